#pragma once

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "peakon/field.hpp"
#include "peakon/grid.hpp"
#include "peakon/kernel.hpp"
#include "peakon/linear_solver.hpp"
#include "peakon/multipeakon.hpp"

// Self-check suite: closed-form identities evaluated at desk scale.

namespace peakon::cli {

struct VerifyCheck {
  std::string name;
  double measured;
  double tolerance;
  bool passed;
};

namespace detail {

inline PeakedField sampled_peakon(const std::vector<double>& grid) {
  return sample([](double x) { return phi(x); },
                [](double x) { return x <= 0 ? std::exp(x) : -std::exp(-x); },
                [](double x) { return x < 0 ? std::exp(x) : -std::exp(-x); }, grid);
}

inline VerifyCheck check(std::string name, double measured, double tolerance) {
  return {std::move(name), measured, tolerance, measured <= tolerance};
}

// phi' * (phi v + phi' v_x / 2) at x by adaptive Gauss-Kronrod, split at the kernel and data corners.
template <class F, class DF>
double tech_comp_quadrature(const F& v, const DF& dv, double x, double half_width) {
  auto dphi = [](double y) { return y > 0 ? -std::exp(-y) : (y < 0 ? std::exp(y) : 0.0); };
  auto f = [&](double y) { return dphi(x - y) * (phi(y) * v(y) + 0.5 * dphi(y) * dv(y)); };
  std::vector<double> pts{-half_width, half_width, 0.0, x};
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] <= pts[i]) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1], 15, 1e-14);
  }
  return total;
}

}  // namespace detail

/// Sup-node residual of -phi + phi^2/2 + 3/4 phi * phi^2 on [-20, 20], N = 8001.
inline VerifyCheck verify_peakon_identity() {
  const auto grid = uniform_grid(20.0, 8001);
  const auto p = conv_P(detail::sampled_peakon(grid));
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double f = phi(grid[i]);
    err = std::max(err, std::abs(-f + 0.5 * f * f + p[i]));
  }
  return detail::check("peakon identity", err, 1e-8);
}

/// Sweep evaluation of phi' * (phi v + phi' v_x / 2) against quadrature at 20
/// points in [-5, 5], for v = phi and v = x e^{-x^2}.
inline VerifyCheck verify_tech_comp() {
  const double L = 30.0;
  const auto grid = uniform_grid(L, 4001);
  auto bump = [](double x) { return x * std::exp(-x * x); };
  auto bump_prime = [](double x) { return (1.0 - 2.0 * x * x) * std::exp(-x * x); };
  auto peak_slope = [](double x) { return x < 0 ? std::exp(x) : -std::exp(-x); };
  const auto peakon = detail::sampled_peakon(grid);
  const auto smooth = sample(bump, bump_prime, grid);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  double err = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double x = dist(rng);
    err = std::max(err,
                   std::abs(lemma_tech_comp_rhs(peakon, x) -
                            detail::tech_comp_quadrature([](double y) { return phi(y); }, peak_slope, x, L)));
    err = std::max(
        err, std::abs(lemma_tech_comp_rhs(smooth, x) - detail::tech_comp_quadrature(bump, bump_prime, x, L)));
  }
  return detail::check("convolution identity (20 points)", err, 1e-6);
}

/// Closed-form linearized solution vs RK4 on the characteristic ODEs,
/// v0 = x e^{-x^2}, t = 3, dt = 1e-3, labels in [-20, 20].
inline VerifyCheck verify_closed_form_vs_ode(std::size_t nodes = 4001) {
  const auto grid = uniform_grid(20.0, nodes);
  const auto v0 = sample([](double x) { return x * std::exp(-x * x); },
                         [](double x) { return (1.0 - 2.0 * x * x) * std::exp(-x * x); }, grid);
  const auto closed = solve_linear(v0, 3.0);
  const auto ode = linear_ode_reference(v0, 3.0, 1e-3);
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    err = std::max({err, std::abs(closed.X[i] - ode.X[i]), std::abs(closed.V[i] - ode.V[i]),
                    std::abs(closed.W[i] - ode.W[i]), std::abs(closed.U_left[i] - ode.U_left[i]),
                    std::abs(closed.U_right[i] - ode.U_right[i])});
  }
  return detail::check("closed form vs characteristic ODE", err, 1e-6);
}

/// One-sided peak values of A phi are -1 and +1.
inline VerifyCheck verify_jump_generation() {
  const auto a = apply_A(detail::sampled_peakon(uniform_grid(20.0, 4001)));
  const std::size_t p = 2000;
  const double err = std::max(std::abs(a.left[p] + 1.0), std::abs(a.right[p] - 1.0));
  return detail::check("jump of A phi at the peak", err, 1e-6);
}

/// A single peakon of unit amplitude travels to x = 10 by t = 10.
inline VerifyCheck verify_single_peakon() {
  const auto traj = mp_integrate({{0.0}, {1.0}}, 10.0, 1e-3);
  const double err = traj.collision ? 1.0 : std::abs(traj.states.back().x[0] - 10.0);
  return detail::check("single peakon speed", err, 1e-8);
}

inline std::vector<VerifyCheck> run_verify_suite() {
  return {verify_peakon_identity(), verify_tech_comp(), verify_closed_form_vs_ode(), verify_jump_generation(),
          verify_single_peakon()};
}

inline void print_verify_table(std::ostream& out, const std::vector<VerifyCheck>& checks) {
  char line[160];
  for (const auto& c : checks) {
    std::snprintf(line, sizeof(line), "%-4s %-36s measured %.3e  tolerance %.1e", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.measured, c.tolerance);
    out << line << '\n';
  }
}

}  // namespace peakon::cli
