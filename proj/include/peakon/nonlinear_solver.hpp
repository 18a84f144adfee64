#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "peakon/csv.hpp"
#include "peakon/error.hpp"
#include "peakon/field.hpp"
#include "peakon/grid.hpp"
#include "peakon/kernel.hpp"
#include "peakon/rk4.hpp"

// Peaked perturbations u(t, x) = phi(x - t - a(t)) + v(t, x - t - a(t)) of
// the travelling peakon, integrated along characteristics in the frame of
// the peak. The peak label is pinned at X = 0 and carries the trace
// variables V0, U0-, U0+ and the one-sided Jacobians.

namespace peakon {

/// Localized data with a sharp slope at the peak.
struct InitialDataSpec {
  double epsilon = 0.25;
  double mu = 0.01;
  std::string family = "corner-exponential";
};

/// v0(x) = -2 eps^2 x e^{-|x|/mu}: v0(0) = 0, v0'(0+-) = -2 eps^2 = -sup|v0'|,
/// ||v0||^2_{H1} = 2 eps^4 mu (1 + mu^2).
inline PeakedField build_initial_data(const InitialDataSpec& spec, const std::vector<double>& grid) {
  if (spec.family != "corner-exponential") {
    throw ConfigurationError("unknown initial-data family '" + spec.family + "'");
  }
  if (!(spec.epsilon > 0.0 && spec.epsilon <= 0.5)) throw ConfigurationError("epsilon must lie in (0, 0.5]");
  if (!(spec.mu > 0.0 && spec.mu <= 1.0)) throw ConfigurationError("mu must lie in (0, 1]");
  const auto zero = std::find(grid.begin(), grid.end(), 0.0);
  if (zero == grid.end() || zero + 1 == grid.end())
    throw StructuralError("grid must contain 0 as an interior node");
  if (*(zero + 1) > spec.mu / 10.0 * (1.0 + 1e-12)) {
    throw ConfigurationError("grid does not resolve the data: spacing at the peak exceeds mu/10");
  }
  const double c = 2.0 * spec.epsilon * spec.epsilon;
  const double mu = spec.mu;
  return sample([=](double x) { return -c * x * std::exp(-std::abs(x) / mu); },
                [=](double x) { return -c * (1.0 - std::abs(x) / mu) * std::exp(-std::abs(x) / mu); }, grid);
}

/// Characteristic state. U and Xs hold right limits at the peak label;
/// the left limits live in U0_minus and Xs0_minus.
struct NonlinearState {
  double t = 0.0;
  double a = 0.0;  // peak shift
  std::size_t peak = 0;
  std::vector<double> s_labels;
  std::vector<double> X;
  std::vector<double> V;
  std::vector<double> U;
  std::vector<double> Xs;
  double U0_minus = 0.0;
  double Xs0_minus = 1.0;

  double V0() const { return V[peak]; }
  double U0_plus() const { return U[peak]; }
  double Xs0_plus() const { return Xs[peak]; }

  /// Perturbation v(t, .) on the deformed grid, in peak-centred coordinates.
  PeakedField field() const {
    std::vector<double> left = U;
    left[peak] = U0_minus;
    return PeakedField(s_labels, X, V, std::move(left), U);
  }

  static NonlinearState from_field(const PeakedField& v0) {
    NonlinearState s;
    s.peak = v0.peak_index();
    s.s_labels.assign(v0.positions().begin(), v0.positions().end());
    s.X = s.s_labels;
    s.V.assign(v0.values().begin(), v0.values().end());
    s.U.assign(v0.slope_right().begin(), v0.slope_right().end());
    s.Xs.assign(v0.size(), 1.0);
    s.U0_minus = v0.slope_left()[s.peak];
    return s;
  }
};

/// Time derivatives of every component of NonlinearState.
struct NonlinearRates {
  std::vector<double> X;
  std::vector<double> V;
  std::vector<double> U;
  std::vector<double> Xs;
  double U0_minus = 0.0;
  double Xs0_minus = 0.0;
  double a = 0.0;
};

/// Right-hand side of the characteristic system. Throws StructuralError when
/// the characteristics have crossed (X not strictly increasing).
inline NonlinearRates rhs(const NonlinearState& s) {
  const PeakedField v = s.field();
  const auto w = cumulative_from_zero(v);
  const auto nl = nonlocal_terms(v);
  const std::size_t n = s.X.size();
  const std::size_t p = s.peak;
  const double V0 = s.V[p];

  NonlinearRates r;
  r.X.resize(n);
  r.V.resize(n);
  r.U.resize(n);
  r.Xs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == p) continue;
    const double X = s.X[i];
    const double f = phi(X);
    const double df = phi_prime(X);
    const double Vi = s.V[i];
    const double Ui = s.U[i];
    r.X[i] = f - 1.0 + Vi - V0;
    r.V[i] = f * w[i] - nl.Q[i];
    r.U[i] = -df * Ui + f * Vi + df * w[i] - 0.5 * Ui * Ui + Vi * Vi - nl.P[i];
    r.Xs[i] = (df + Ui) * s.Xs[i];
  }
  // Peak traces: phi(0) = 1, phi'(0+-) = -+1, w(0) = 0.
  const double up = s.U[p];
  const double um = s.U0_minus;
  const double common = V0 + V0 * V0 - nl.P[p];
  r.X[p] = 0.0;
  r.V[p] = -nl.Q[p];
  r.U[p] = up - 0.5 * up * up + common;
  r.U0_minus = -um - 0.5 * um * um + common;
  r.Xs[p] = (up - 1.0) * s.Xs[p];
  r.Xs0_minus = (um + 1.0) * s.Xs0_minus;
  r.a = V0;
  return r;
}

/// F0 = -Q[v](0) - P[v](0) = -int_0^inf e^{-y} (v^2 + v_y^2/2) dy, never positive.
inline double peak_forcing(const NonlinearState& s) {
  const auto nl = nonlocal_terms(s.field());
  return -nl.Q[s.peak] - nl.P[s.peak];
}

namespace detail {

inline NonlinearState advance(const NonlinearState& s, const NonlinearRates& r, double h) {
  NonlinearState out = s;
  for (std::size_t i = 0; i < s.X.size(); ++i) {
    out.X[i] += h * r.X[i];
    out.V[i] += h * r.V[i];
    out.U[i] += h * r.U[i];
    out.Xs[i] += h * r.Xs[i];
  }
  out.U0_minus += h * r.U0_minus;
  out.Xs0_minus += h * r.Xs0_minus;
  out.a += h * r.a;
  return out;
}

// Classical RK4 on the structured state. Accumulation order per component is
// fixed, so runs are bitwise reproducible.
inline NonlinearState rk4_advance(const NonlinearState& s, double h) {
  const NonlinearRates k1 = rhs(s);
  const NonlinearRates k2 = rhs(advance(s, k1, 0.5 * h));
  const NonlinearRates k3 = rhs(advance(s, k2, 0.5 * h));
  const NonlinearRates k4 = rhs(advance(s, k3, h));
  auto combine = [h](double y, double a, double b, double c, double d) {
    return y + h / 6.0 * (a + 2.0 * b + 2.0 * c + d);
  };
  NonlinearState out = s;
  out.t = s.t + h;
  for (std::size_t i = 0; i < s.X.size(); ++i) {
    out.X[i] = combine(s.X[i], k1.X[i], k2.X[i], k3.X[i], k4.X[i]);
    out.V[i] = combine(s.V[i], k1.V[i], k2.V[i], k3.V[i], k4.V[i]);
    out.U[i] = combine(s.U[i], k1.U[i], k2.U[i], k3.U[i], k4.U[i]);
    out.Xs[i] = combine(s.Xs[i], k1.Xs[i], k2.Xs[i], k3.Xs[i], k4.Xs[i]);
  }
  out.U0_minus = combine(s.U0_minus, k1.U0_minus, k2.U0_minus, k3.U0_minus, k4.U0_minus);
  out.Xs0_minus = combine(s.Xs0_minus, k1.Xs0_minus, k2.Xs0_minus, k3.Xs0_minus, k4.Xs0_minus);
  out.a = combine(s.a, k1.a, k2.a, k3.a, k4.a);
  return out;
}

inline bool all_finite(const NonlinearState& s) {
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return finite(s.X) && finite(s.V) && finite(s.U) && finite(s.Xs) && std::isfinite(s.U0_minus) &&
         std::isfinite(s.Xs0_minus) && std::isfinite(s.a);
}

inline double min_slope(const NonlinearState& s) {
  return std::min(*std::min_element(s.U.begin(), s.U.end()), s.U0_minus);
}

inline double min_jacobian(const NonlinearState& s) {
  return std::min(*std::min_element(s.Xs.begin(), s.Xs.end()), s.Xs0_minus);
}

}  // namespace detail

enum class BreakdownMechanism { none, slope_unbounded, characteristic_compression };

inline const char* to_string(BreakdownMechanism m) {
  switch (m) {
    case BreakdownMechanism::slope_unbounded:
      return "slope_unbounded";
    case BreakdownMechanism::characteristic_compression:
      return "characteristic_compression";
    default:
      return "none";
  }
}

struct BlowupReport {
  bool triggered = false;
  std::optional<double> t_break;
  BreakdownMechanism mechanism = BreakdownMechanism::none;
  double min_slope = 0.0;
  double min_jacobian = 1.0;
};

/// One row of diagnostics per accepted step.
struct RunRecord {
  double t;
  double a;
  double E;
  double F;
  double h1_v;
  double sup_vx;
  double V0;
  double U0_minus;
  double U0_plus;
  double min_Xs;
  double lower_bound_eps2_et;
};

/// ||u - phi(. - xi)||_{H1}, which in peak-centred coordinates is ||v||_{H1}.
inline double orbital_stability_monitor(const NonlinearState& s) {
  return std::sqrt(h1_norm_sq(s.field(), Side::both));
}

/// E(u) = ||phi||^2 + 2 int (phi v + phi' v_x) + ||v||^2 = 2 + 4 v(0) + ||v||^2.
inline double energy_of_perturbed_peakon(const NonlinearState& s) {
  return 2.0 + 4.0 * s.V0() + h1_norm_sq(s.field(), Side::both);
}

/// F(u) = int (u^3 + u u_x^2) with u = phi + v; the peakon part 4/3 is exact.
inline double momentum_of_perturbed_peakon(const NonlinearState& s) {
  const std::size_t p = s.peak;
  auto f = [](double u, double ux) { return u * u * u + u * ux * ux; };
  auto delta = [&](std::size_t i, bool left) {
    const double x = s.X[i];
    const double base = phi(x);
    double dphi = phi_prime(x);
    double ux = s.U[i];
    if (i == p) {
      dphi = left ? 1.0 : -1.0;
      ux = left ? s.U0_minus : s.U[i];
    }
    return f(base + s.V[i], dphi + ux) - f(base, dphi);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < s.X.size(); ++i) {
    total += 0.5 * (s.X[i + 1] - s.X[i]) * (delta(i, false) + delta(i + 1, true));
  }
  return 4.0 / 3.0 + total;
}

inline RunRecord make_record(const NonlinearState& s, double epsilon) {
  const PeakedField v = s.field();
  const double h1_sq = h1_norm_sq(v, Side::both);
  const auto sup = sup_norms(v);
  return RunRecord{s.t,
                   s.a,
                   2.0 + 4.0 * s.V0() + h1_sq,
                   momentum_of_perturbed_peakon(s),
                   std::sqrt(h1_sq),
                   sup.slope,
                   s.V0(),
                   s.U0_minus,
                   s.U0_plus(),
                   detail::min_jacobian(s),
                   epsilon * epsilon * std::exp(s.t)};
}

struct IntegrateOptions {
  double slope_floor = -50.0;
  double jacobian_floor = 1e-6;
  double epsilon = 0.0;            // only feeds the eps^2 e^t diagnostic column
  std::size_t snapshot_every = 0;  // 0: initial and final states only
};

struct IntegrationResult {
  std::vector<NonlinearState> snapshots;
  BlowupReport report;
  std::vector<RunRecord> records;
  NonlinearState final_state;
};

/// Fixed-step RK4 from v0 (which must vanish at the peak) to t_end, halting
/// at the first step whose slopes or Jacobians cross their floors.
inline IntegrationResult integrate(const PeakedField& v0, double t_end, double dt,
                                   const IntegrateOptions& options = {}) {
  if (v0.peak_value() != 0.0) {
    throw InputError("perturbation must vanish at the peak; absorb v0(0) into the peak shift");
  }
  const StepSchedule schedule(t_end, dt);
  IntegrationResult out;
  NonlinearState state = NonlinearState::from_field(v0);
  out.records.push_back(make_record(state, options.epsilon));
  out.snapshots.push_back(state);
  out.report.min_slope = detail::min_slope(state);
  out.report.min_jacobian = detail::min_jacobian(state);

  for (std::size_t k = 0; k < schedule.steps(); ++k) {
    NonlinearState next;
    try {
      next = detail::rk4_advance(state, schedule.step(k));
    } catch (const StructuralError&) {
      out.report.triggered = true;
      out.report.t_break = schedule.time(k + 1);
      out.report.mechanism = BreakdownMechanism::characteristic_compression;
      break;
    }
    next.t = schedule.time(k + 1);
    if (!detail::all_finite(next)) {
      throw IntegrationError("nonlinear integration produced a non-finite value at t = " +
                             csv::format(next.t));
    }
    state = std::move(next);
    const double min_u = detail::min_slope(state);
    const double min_j = detail::min_jacobian(state);
    out.report.min_slope = std::min(out.report.min_slope, min_u);
    out.report.min_jacobian = std::min(out.report.min_jacobian, min_j);
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < state.X.size(); ++i) monotone = monotone && state.X[i] < state.X[i + 1];
    if (!monotone || min_j <= options.jacobian_floor) {
      out.report.triggered = true;
      out.report.t_break = state.t;
      out.report.mechanism = BreakdownMechanism::characteristic_compression;
      break;
    }
    out.records.push_back(make_record(state, options.epsilon));
    if (options.snapshot_every > 0 && (k + 1) % options.snapshot_every == 0) out.snapshots.push_back(state);
    if (min_u <= options.slope_floor) {
      out.report.triggered = true;
      out.report.t_break = state.t;
      out.report.mechanism = BreakdownMechanism::slope_unbounded;
      break;
    }
  }
  if (out.snapshots.back().t != state.t) out.snapshots.push_back(state);
  out.final_state = std::move(state);
  return out;
}

struct InstabilityResult {
  std::optional<double> t0;  // first recorded time with sup|v_x| > 1
  double tau = 0.0;          // log 2 - 2 log eps
  double h1_v0 = 0.0;
  bool cs_hypothesis = false;  // ||v0||_{H1} < (eps/3)^4, the smallness the stability theorem asks for
  std::vector<RunRecord> records;
  BlowupReport report;
  IntegrationResult run;
};

struct InstabilityOptions {
  double half_width = 30.0;
  std::size_t nodes = 8001;
  std::optional<double> h_min;  // default mu / 10
  std::size_t snapshot_every = 0;
};

inline double threshold_time(double epsilon) { return std::log(2.0) - 2.0 * std::log(epsilon); }

/// Integrates the corner-exponential data up to t_max (or breakdown) and
/// reports when the slope first exceeds 1 in magnitude.
inline InstabilityResult instability_experiment(double epsilon, double mu, double t_max, double dt,
                                                const InstabilityOptions& options = {}) {
  const InitialDataSpec spec{epsilon, mu, "corner-exponential"};
  const auto grid = graded_grid(options.half_width, options.nodes, options.h_min.value_or(mu / 10.0));
  const PeakedField v0 = build_initial_data(spec, grid);

  InstabilityResult out;
  out.tau = threshold_time(epsilon);
  out.h1_v0 = std::sqrt(h1_norm_sq(v0, Side::both));
  out.cs_hypothesis = out.h1_v0 < std::pow(epsilon / 3.0, 4);
  IntegrateOptions io;
  io.epsilon = epsilon;
  io.snapshot_every = options.snapshot_every;
  out.run = integrate(v0, t_max, dt, io);
  out.records = out.run.records;
  out.report = out.run.report;
  for (const auto& r : out.records) {
    if (r.sup_vx > 1.0) {
      out.t0 = r.t;
      break;
    }
  }
  return out;
}

inline void write_records_csv(std::ostream& out, std::span<const RunRecord> records) {
  csv::write_header(out, {"t", "a", "E", "F", "h1_v", "sup_vx", "V0", "U0_minus", "U0_plus", "min_Xs",
                          "lower_bound_eps2_et"});
  for (const auto& r : records) {
    csv::write_row(out, {r.t, r.a, r.E, r.F, r.h1_v, r.sup_vx, r.V0, r.U0_minus, r.U0_plus, r.min_Xs,
                         r.lower_bound_eps2_et});
  }
}

}  // namespace peakon
