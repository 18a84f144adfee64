#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "peakon/csv.hpp"
#include "peakon/error.hpp"
#include "peakon/field.hpp"
#include "peakon/kernel.hpp"
#include "peakon/rk4.hpp"

// u(t, x) = sum_j m_j(t) phi(x - x_j(t)) with
//   dx_k/dt = sum_j m_j phi(x_k - x_j),   dm_k/dt = -sum_j m_k m_j phi'(x_k - x_j).

namespace peakon {

struct MultipeakonState {
  std::vector<double> x;  // strictly increasing
  std::vector<double> m;

  std::size_t size() const { return x.size(); }
};

namespace detail {

inline void validate_multipeakon(const MultipeakonState& s) {
  if (s.x.empty() || s.x.size() != s.m.size())
    throw InputError("multipeakon needs matching, non-empty x and m");
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!std::isfinite(s.x[k]) || !std::isfinite(s.m[k]))
      throw InputError("multipeakon state must be finite");
    if (k > 0 && !(s.x[k] > s.x[k - 1]))
      throw StructuralError("peakon positions must be strictly increasing");
  }
}

inline std::vector<double> pack(const MultipeakonState& s) {
  std::vector<double> y(s.x);
  y.insert(y.end(), s.m.begin(), s.m.end());
  return y;
}

inline MultipeakonState unpack(const std::vector<double>& y) {
  const std::size_t n = y.size() / 2;
  return {std::vector<double>(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n)),
          std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(n), y.end())};
}

}  // namespace detail

/// u at x_k; this is also dx_k/dt.
inline double mp_velocity(const MultipeakonState& s, std::size_t k) {
  double u = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) u += s.m[j] * phi(s.x[k] - s.x[j]);
  return u;
}

struct MultipeakonRates {
  std::vector<double> dx;
  std::vector<double> dm;
};

/// Hamiltonian vector field. The pairwise forces are added antisymmetrically,
/// so sum_k dm_k/dt is exactly zero in floating point up to summation order.
inline MultipeakonRates mp_rhs(const MultipeakonState& s) {
  const std::size_t n = s.size();
  MultipeakonRates r{std::vector<double>(n), std::vector<double>(n, 0.0)};
  for (std::size_t k = 0; k < n; ++k) r.dx[k] = mp_velocity(s, k);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = k + 1; j < n; ++j) {
      const double force = s.m[k] * s.m[j] * phi_prime(s.x[k] - s.x[j]);
      r.dm[k] -= force;
      r.dm[j] += force;
    }
  }
  return r;
}

/// H = 1/2 sum_{i,j} m_i m_j phi(x_i - x_j).
inline double mp_hamiltonian(const MultipeakonState& s) {
  double h = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) h += s.m[i] * s.m[j] * phi(s.x[i] - s.x[j]);
  }
  return 0.5 * h;
}

inline double mp_total_momentum(const MultipeakonState& s) {
  double total = 0.0;
  for (double m : s.m) total += m;
  return total;
}

struct CollisionReport {
  double t;
  std::size_t left;  // index of the left peakon of the colliding pair
  double gap;
};

struct MultipeakonTrajectory {
  std::vector<double> t;
  std::vector<MultipeakonState> states;
  std::optional<CollisionReport> collision;
};

/// RK4 trajectory from s0 to t_end; stops and reports if two neighbours come
/// within `collision_gap`.
inline MultipeakonTrajectory mp_integrate(const MultipeakonState& s0, double t_end, double dt,
                                          double collision_gap = 1e-8) {
  detail::validate_multipeakon(s0);
  const StepSchedule schedule(t_end, dt);
  auto f = [](double, const std::vector<double>& y) {
    const auto r = mp_rhs(detail::unpack(y));
    std::vector<double> out(r.dx);
    out.insert(out.end(), r.dm.begin(), r.dm.end());
    return out;
  };
  MultipeakonTrajectory out;
  out.t.push_back(0.0);
  out.states.push_back(s0);
  std::vector<double> y = detail::pack(s0);
  for (std::size_t k = 0; k < schedule.steps(); ++k) {
    y = rk4_step(f, schedule.time(k), y, schedule.step(k));
    for (double c : y) {
      if (!std::isfinite(c)) throw IntegrationError("multipeakon integration produced a non-finite value");
    }
    MultipeakonState s = detail::unpack(y);
    const double t = schedule.time(k + 1);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const double gap = s.x[i + 1] - s.x[i];
      if (gap < collision_gap) {
        out.collision = CollisionReport{t, i, gap};
        return out;
      }
    }
    out.t.push_back(t);
    out.states.push_back(std::move(s));
  }
  return out;
}

/// Samples u on the union of `grid` and the peak positions; one-sided slopes
/// differ by -2 m_k at each x_k.
inline Profile reconstruct(const MultipeakonState& s, const std::vector<double>& grid) {
  detail::validate_multipeakon(s);
  std::vector<double> nodes(grid);
  nodes.insert(nodes.end(), s.x.begin(), s.x.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  Profile p;
  p.positions = nodes;
  p.values.resize(nodes.size());
  p.slope_left.resize(nodes.size());
  p.slope_right.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double u = 0.0;
    double left = 0.0;
    double right = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double d = nodes[i] - s.x[j];
      u += s.m[j] * phi(d);
      if (d == 0.0) {
        left += s.m[j];
        right -= s.m[j];
      } else {
        left += s.m[j] * phi_prime(d);
        right += s.m[j] * phi_prime(d);
      }
    }
    p.values[i] = u;
    p.slope_left[i] = left;
    p.slope_right[i] = right;
  }
  return p;
}

/// CSV with columns t, x_1..x_N, m_1..m_N, H, sum_m.
inline void write_trajectory_csv(std::ostream& out, const MultipeakonTrajectory& traj) {
  if (traj.states.empty()) return;
  const std::size_t n = traj.states.front().size();
  std::vector<std::string> header{"t"};
  for (std::size_t k = 1; k <= n; ++k) header.push_back("x_" + std::to_string(k));
  for (std::size_t k = 1; k <= n; ++k) header.push_back("m_" + std::to_string(k));
  header.push_back("H");
  header.push_back("sum_m");
  csv::write_header(out, header);
  std::vector<double> row;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const auto& s = traj.states[i];
    row.assign(1, traj.t[i]);
    row.insert(row.end(), s.x.begin(), s.x.end());
    row.insert(row.end(), s.m.begin(), s.m.end());
    row.push_back(mp_hamiltonian(s));
    row.push_back(mp_total_momentum(s));
    csv::write_row(out, row);
  }
}

}  // namespace peakon
