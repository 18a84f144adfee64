#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "peakon/csv.hpp"
#include "peakon/error.hpp"
#include "peakon/field.hpp"
#include "peakon/kernel.hpp"
#include "peakon/rk4.hpp"

// Linearized flow around the peakon, v_t = (1 - phi) v_x + phi int_0^x v,
// solved exactly along the characteristics dX/dt = phi(X) - 1.

namespace peakon {

/// Closed-form linearized solution sampled on the label grid at time t.
/// Arrays are indexed by label; at the peak node the `_left`/`_right`
/// entries hold the one-sided limits s -> 0-/0+, elsewhere they coincide.
struct LinearState {
  double t = 0.0;
  double alpha = 0.0;  // right slope of the data at the peak
  std::size_t peak = 0;
  std::vector<double> s_labels;
  std::vector<double> X;
  std::vector<double> W;
  std::vector<double> V;
  std::vector<double> U_left;
  std::vector<double> U_right;
  std::vector<double> Xs_left;
  std::vector<double> Xs_right;
  std::vector<double> Y;  // V = v0 + w0 Y; zero at the peak
};

namespace detail {

inline double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

inline double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Closed-form pieces for one label at time t >= 0, s != 0.
struct CharacteristicFactors {
  double X;
  double Xs;       // dX/ds
  double Y;        // growth factor multiplying w0 in V
  double stretch;  // 1 + (e^t - 1) e^{-s} for s > 0, 1 + (e^{-t} - 1) e^{s} for s < 0
  double source;   // (e^t - 1) e^{-s} for s > 0, (1 - e^{-t}) e^{s} for s < 0
};

inline CharacteristicFactors characteristic_factors(double t, double s) {
  CharacteristicFactors f{};
  if (s > 0.0) {
    f.X = softplus(s - t + std::log(-std::expm1(-s)));
    if (t == 0.0) {
      f.Xs = 1.0;
      f.Y = 0.0;
      f.stretch = 1.0;
      f.source = 0.0;
    } else {
      // (e^t - 1) e^{-s} = e^z
      const double z = t - s + std::log(-std::expm1(-t));
      f.Xs = logistic(-z);
      f.Y = logistic(z);
      f.source = std::exp(z);
      f.stretch = 1.0 + f.source;
    }
  } else {
    f.X = -softplus(-s + t + std::log(-std::expm1(s)));
    f.source = -std::expm1(-t) * std::exp(s);
    f.stretch = -std::expm1(s) + std::exp(s - t);
    f.Xs = 1.0 / f.stretch;
    f.Y = f.source * f.Xs;
  }
  return f;
}

inline void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("time must be finite and nonnegative");
}

}  // namespace detail

/// Characteristic through label s: dX/dt = phi(X) - 1, X(0) = s.
inline double char_X(double t, double s) {
  if (s == 0.0) return 0.0;
  if (s > 0.0) return detail::softplus(s - t + std::log(-std::expm1(-s)));
  return -detail::softplus(-s + t + std::log(-std::expm1(s)));
}

/// dX/ds for s != 0 and t >= 0. Use jacobian_Xs_at_peak for the limits s -> 0+-.
inline double jacobian_Xs(double t, double s) {
  detail::require_time(t);
  if (s == 0.0) throw InputError("jacobian_Xs is two-valued at s = 0; use jacobian_Xs_at_peak");
  return detail::characteristic_factors(t, s).Xs;
}

/// One-sided limits of dX/ds at the peak: e^{-t} from the right, e^{t} from the left.
inline double jacobian_Xs_at_peak(double t, Side side) {
  detail::require_time(t);
  if (side == Side::both) throw InputError("peak Jacobian needs a side");
  return side == Side::positive ? std::exp(-t) : std::exp(t);
}

/// Exact solution of the linearized Cauchy problem at time t.
/// Data with v0(0) != 0 are rejected: the flow then leaves the continuous
/// class instantly (one-sided limits of v_t at the peak are +-v0(0)).
inline LinearState solve_linear(const PeakedField& v0, double t) {
  detail::require_time(t);
  if (v0.peak_value() != 0.0) {
    throw JumpGenerationError(
        "linearized data must vanish at the peak: v0(0) != 0 generates a jump at x = 0 "
        "(jump-generation lemma)");
  }
  const std::size_t n = v0.size();
  const std::size_t p = v0.peak_index();
  const auto s = v0.positions();
  const auto v = v0.values();
  const auto w0 = cumulative_from_zero(v0);

  LinearState out;
  out.t = t;
  out.peak = p;
  out.alpha = v0.slope_right()[p];
  out.s_labels.assign(s.begin(), s.end());
  out.X.resize(n);
  out.W.resize(n);
  out.V.resize(n);
  out.U_left.resize(n);
  out.U_right.resize(n);
  out.Xs_left.resize(n);
  out.Xs_right.resize(n);
  out.Y.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    if (i == p) continue;
    const auto f = detail::characteristic_factors(t, s[i]);
    const double slope = v0.slope_right()[i];
    double u;
    if (s[i] > 0.0) {
      u = slope * f.stretch + v[i] * f.source - w0[i] * f.Y;
    } else {
      u = slope * f.stretch + v[i] * f.source + w0[i] * f.Y;
    }
    out.X[i] = f.X;
    out.W[i] = w0[i] * f.Xs;
    out.V[i] = v[i] + w0[i] * f.Y;
    out.U_left[i] = out.U_right[i] = u;
    out.Xs_left[i] = out.Xs_right[i] = f.Xs;
    out.Y[i] = f.Y;
  }
  out.X[p] = out.W[p] = out.V[p] = out.Y[p] = 0.0;
  out.U_right[p] = out.alpha * std::exp(t);
  out.U_left[p] = v0.slope_left()[p] * std::exp(-t);
  out.Xs_right[p] = std::exp(-t);
  out.Xs_left[p] = std::exp(t);
  return out;
}

/// The solution surface as a field over the deformed positions X.
inline PeakedField to_field(const LinearState& state) {
  return PeakedField(state.s_labels, state.X, state.V, state.U_left, state.U_right);
}

/// Squared H1 norm of the solved surfaces, integrated in the label variable:
/// int (V^2 + U^2) X_s ds (trapezoid, one-sided values at the peak).
inline double linear_h1_norm_sq(const LinearState& state, Side side) {
  const std::size_t p = state.peak;
  auto density_left = [&](std::size_t i) {
    return (state.V[i] * state.V[i] + state.U_left[i] * state.U_left[i]) * state.Xs_left[i];
  };
  auto density_right = [&](std::size_t i) {
    return (state.V[i] * state.V[i] + state.U_right[i] * state.U_right[i]) * state.Xs_right[i];
  };
  auto sum = [&](std::size_t first, std::size_t end) {
    double total = 0.0;
    for (std::size_t i = first; i < end; ++i) {
      total += 0.5 * (state.s_labels[i + 1] - state.s_labels[i]) * (density_right(i) + density_left(i + 1));
    }
    return total;
  };
  const double neg = sum(0, p);
  const double pos = sum(p, state.s_labels.size() - 1);
  if (side == Side::negative) return neg;
  if (side == Side::positive) return pos;
  return neg + pos;
}

/// Right-hand side of the H1 growth identities:
///   positive side: ||v0||^2_{H1(0,inf)}  + 2 (e^t - 1)  int_0^inf  phi (v0^2 + v0'^2/2) ds
///   negative side: ||v0||^2_{H1(-inf,0)} + 2 (e^-t - 1) int_-inf^0 phi (v0^2 + v0'^2/2) ds
inline double h1_identity_rhs(const PeakedField& v0, double t, Side side) {
  detail::require_time(t);
  if (side == Side::both) throw InputError("growth identity is stated per half-line");
  const std::size_t p = v0.peak_index();
  const std::size_t first = side == Side::positive ? p : 0;
  const std::size_t end = side == Side::positive ? v0.size() - 1 : p;
  const auto x = v0.positions();
  const auto v = v0.values();
  double weighted = 0.0;
  for (std::size_t i = first; i < end; ++i) {
    const double sr = v0.slope_right()[i];
    const double sl = v0.slope_left()[i + 1];
    const double a = phi(x[i]) * (v[i] * v[i] + 0.5 * sr * sr);
    const double b = phi(x[i + 1]) * (v[i + 1] * v[i + 1] + 0.5 * sl * sl);
    weighted += 0.5 * (x[i + 1] - x[i]) * (a + b);
  }
  const double factor = side == Side::positive ? std::expm1(t) : std::expm1(-t);
  return h1_norm_sq(v0, side) + 2.0 * factor * weighted;
}

/// L1 norm of the data on a half-line; the sup-norm bounds on V assume it is finite.
inline double l1_norm(const PeakedField& v0, Side side) {
  const std::size_t p = v0.peak_index();
  const std::size_t first = side == Side::positive ? p : 0;
  const std::size_t end = side == Side::negative ? p : v0.size() - 1;
  double total = 0.0;
  for (std::size_t i = first; i < end; ++i) {
    total += 0.5 * (v0.positions()[i + 1] - v0.positions()[i]) *
             (std::abs(v0.values()[i]) + std::abs(v0.values()[i + 1]));
  }
  return total;
}

/// One-sided node limits of an operator output that may jump at the peak.
struct NodeLimits {
  std::vector<double> left;
  std::vector<double> right;
};

/// (Av)(x) = [1 - phi(x)] v'(x) + phi(x) int_0^x v - v(0) phi'(x).
/// At the peak the two one-sided limits are -v(0) and +v(0).
inline NodeLimits apply_A(const PeakedField& v) {
  const std::size_t n = v.size();
  const std::size_t p = v.peak_index();
  const auto x = v.positions();
  const auto w = cumulative_from_zero(v);
  const double v_peak = v.peak_value();
  NodeLimits out{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    if (i == p) continue;
    const double value = (1.0 - phi(x[i])) * v.slope_right()[i] + phi(x[i]) * w[i] - v_peak * phi_prime(x[i]);
    out.left[i] = out.right[i] = value;
  }
  // phi'(0-) = 1, phi'(0+) = -1; the other terms vanish at x = 0.
  out.left[p] = -v_peak;
  out.right[p] = v_peak;
  return out;
}

/// Rates of the linear characteristic system for one label away from the peak:
/// state (X, W, V, U, Xs).
inline std::array<double, 5> linear_characteristic_rates(const std::array<double, 5>& y) {
  const double X = y[0];
  const double f = phi(X);
  const double df = phi_prime(X);
  return {f - 1.0, df * y[1], f * y[1], -df * y[3] + f * y[2] + df * y[1], df * y[4]};
}

/// RK4 integration of the characteristic ODEs label by label. Independent of
/// the closed forms; used to cross-check them.
inline LinearState linear_ode_reference(const PeakedField& v0, double t_end, double dt) {
  if (v0.peak_value() != 0.0) {
    throw JumpGenerationError("linearized data must vanish at the peak (jump-generation lemma)");
  }
  const StepSchedule schedule(t_end, dt);
  const std::size_t n = v0.size();
  const std::size_t p = v0.peak_index();
  const auto s = v0.positions();
  const auto w0 = cumulative_from_zero(v0);

  LinearState out;
  out.t = t_end;
  out.peak = p;
  out.alpha = v0.slope_right()[p];
  out.s_labels.assign(s.begin(), s.end());
  out.X.assign(n, 0.0);
  out.W.assign(n, 0.0);
  out.V.assign(n, 0.0);
  out.U_left.assign(n, 0.0);
  out.U_right.assign(n, 0.0);
  out.Xs_left.assign(n, 0.0);
  out.Xs_right.assign(n, 0.0);
  out.Y.assign(n, 0.0);

  auto rates = [](double, const std::array<double, 5>& y) { return linear_characteristic_rates(y); };
  for (std::size_t i = 0; i < n; ++i) {
    if (i == p) continue;
    std::array<double, 5> y{s[i], w0[i], v0.values()[i], v0.slope_right()[i], 1.0};
    for (std::size_t k = 0; k < schedule.steps(); ++k) {
      y = rk4_step(rates, schedule.time(k), y, schedule.step(k));
    }
    for (double c : y) {
      if (!std::isfinite(c)) throw IntegrationError("linear characteristic integration produced NaN");
    }
    out.X[i] = y[0];
    out.W[i] = y[1];
    out.V[i] = y[2];
    out.U_left[i] = out.U_right[i] = y[3];
    out.Xs_left[i] = out.Xs_right[i] = y[4];
    out.Y[i] = w0[i] != 0.0 ? (y[2] - v0.values()[i]) / w0[i] : 0.0;
  }

  // Peak traces: X = V = W = 0, dU/dt = -phi'(0+-) U, dXs/dt = phi'(0+-) Xs.
  for (int sign : {-1, 1}) {
    const double slope_of_phi = -static_cast<double>(sign);  // phi'(0-) = 1, phi'(0+) = -1
    auto trace = [slope_of_phi](double, const std::array<double, 2>& y) {
      return std::array<double, 2>{-slope_of_phi * y[0], slope_of_phi * y[1]};
    };
    std::array<double, 2> y{sign > 0 ? v0.slope_right()[p] : v0.slope_left()[p], 1.0};
    for (std::size_t k = 0; k < schedule.steps(); ++k) {
      y = rk4_step(trace, schedule.time(k), y, schedule.step(k));
    }
    (sign > 0 ? out.U_right : out.U_left)[p] = y[0];
    (sign > 0 ? out.Xs_right : out.Xs_left)[p] = y[1];
  }
  return out;
}

/// CSV with columns t, s_label, X, V, U_left, U_right, W.
inline void write_csv(std::ostream& out, const LinearState& state) {
  csv::write_header(out, {"t", "s_label", "X", "V", "U_left", "U_right", "W"});
  for (std::size_t i = 0; i < state.s_labels.size(); ++i) {
    csv::write_row(out, {state.t, state.s_labels[i], state.X[i], state.V[i], state.U_left[i],
                         state.U_right[i], state.W[i]});
  }
}

}  // namespace peakon
