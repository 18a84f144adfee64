#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "peakon/error.hpp"
#include "peakon/field.hpp"

namespace peakon {

/// Green function of 1 - d^2/dx^2 (up to the factor 2): e^{-|x|}.
inline double phi(double x) { return std::exp(-std::abs(x)); }

/// -sign(x) e^{-|x|}, with the value 0 at x = 0.
inline double phi_prime(double x) {
  if (x > 0.0) return -std::exp(-x);
  if (x < 0.0) return std::exp(x);
  return 0.0;
}

/// Density samples seen from each side of a node: `left[i]` belongs to the
/// cell [x_{i-1}, x_i], `right[i]` to [x_i, x_{i+1}].
struct OneSidedSamples {
  std::vector<double> left;
  std::vector<double> right;
};

/// Cumulative one-sided exponential integrals of a density g:
///   left[i]  = int_{x_0}^{x_i} e^{y} g(y) dy
///   right[i] = int_{x_i}^{x_last} e^{-y} g(y) dy
/// Tails beyond the grid are zero. Values overflow for |x| beyond ~700.
struct ExpSweepAccumulators {
  std::vector<double> left;
  std::vector<double> right;
};

namespace detail {

// m_k(h) = h^{-k} int_0^h s^k e^{-s} ds, k = 0..3.
inline std::array<double, 4> exp_moments(double h) {
  std::array<double, 4> m{};
  if (h <= 2.0) {
    // m_k = h * sum_n (-h)^n / (n! (n + k + 1)); alternating, terms shrink like h^n/n!.
    double c = 1.0;
    for (int n = 0; n < 60; ++n) {
      const double dn = static_cast<double>(n);
      for (int k = 0; k < 4; ++k) m[k] += c / (dn + k + 1.0);
      c *= -h / (dn + 1.0);
      if (std::abs(c) < 1e-20) break;
    }
    for (auto& mk : m) mk *= h;
    return m;
  }
  const double e = std::exp(-h);
  double partial = 0.0;
  double term = 1.0;
  double factorial = 1.0;
  double hk = 1.0;
  for (int k = 0; k < 4; ++k) {
    if (k > 0) {
      term *= h / k;
      factorial *= k;
      hk *= h;
    }
    partial += term;
    m[k] = factorial * (1.0 - e * partial) / hk;
  }
  return m;
}

// Weights of the cubic Hermite interpolant against e^{-s} on a cell of
// width h, where s is the distance from the "near" node.
struct HermiteExpWeights {
  double near_value, near_slope, far_value, far_slope, decay;
};

inline HermiteExpWeights hermite_exp_weights(double h) {
  const auto m = exp_moments(h);
  return {m[0] - 3.0 * m[2] + 2.0 * m[3], h * (m[1] - 2.0 * m[2] + m[3]), 3.0 * m[2] - 2.0 * m[3],
          h * (m[3] - m[2]), std::exp(-h)};
}

inline void check_samples(std::span<const double> x, const OneSidedSamples& g) {
  const std::size_t n = x.size();
  if (n < 2) throw StructuralError("density needs at least 2 nodes");
  if (g.left.size() != n || g.right.size() != n) {
    throw StructuralError("density sample arrays have mismatched lengths");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(g.left[i]) || !std::isfinite(g.right[i])) {
      throw InputError("non-finite density sample at node " + std::to_string(i));
    }
    if (i + 1 < n && !(x[i] < x[i + 1])) {
      throw StructuralError("density grid is not strictly increasing at node " + std::to_string(i));
    }
  }
}

// One-sided derivative estimates of the density. Derivatives never reach
// across a break node (a corner of the density, or a jump in its samples);
// within a smooth segment they come from the 3-point quadratic interpolant.
inline OneSidedSamples segment_derivatives(std::span<const double> x, const OneSidedSamples& g,
                                           std::span<const std::size_t> corners) {
  const std::size_t n = x.size();
  std::vector<char> is_break(n, 0);
  is_break.front() = is_break.back() = 1;
  for (std::size_t c : corners) {
    if (c < n) is_break[c] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (g.left[i] != g.right[i]) is_break[i] = 1;
  }

  OneSidedSamples d{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  std::size_t lo = 0;
  while (lo + 1 < n) {
    std::size_t hi = lo + 1;
    while (!is_break[hi]) ++hi;
    // Segment nodes lo..hi; at lo the segment sees g.right, at hi it sees g.left.
    auto val = [&](std::size_t j) { return j == lo ? g.right[j] : g.left[j]; };
    if (hi == lo + 1) {
      const double slope = (val(hi) - val(lo)) / (x[hi] - x[lo]);
      d.right[lo] = slope;
      d.left[hi] = slope;
    } else {
      {
        const double h1 = x[lo + 1] - x[lo];
        const double h2 = x[lo + 2] - x[lo + 1];
        d.right[lo] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * val(lo) + (h1 + h2) / (h1 * h2) * val(lo + 1) -
                      h1 / (h2 * (h1 + h2)) * val(lo + 2);
      }
      for (std::size_t j = lo + 1; j < hi; ++j) {
        const double h1 = x[j] - x[j - 1];
        const double h2 = x[j + 1] - x[j];
        const double dj = -h2 / (h1 * (h1 + h2)) * val(j - 1) + (h2 - h1) / (h1 * h2) * val(j) +
                          h1 / (h2 * (h1 + h2)) * val(j + 1);
        d.left[j] = dj;
        d.right[j] = dj;
      }
      {
        const double h1 = x[hi] - x[hi - 1];
        const double h2 = x[hi - 1] - x[hi - 2];
        d.left[hi] = (2.0 * h1 + h2) / (h1 * (h1 + h2)) * val(hi) - (h1 + h2) / (h1 * h2) * val(hi - 1) +
                     h1 / (h2 * (h1 + h2)) * val(hi - 2);
      }
    }
    lo = hi;
  }
  return d;
}

// Per-cell exponential integrals of the Hermite reconstruction:
//   to_right[i] = int_{x_i}^{x_{i+1}} e^{-(x_{i+1} - y)} g dy   (weight peaks at x_{i+1})
//   to_left[i]  = int_{x_i}^{x_{i+1}} e^{-(y - x_i)} g dy       (weight peaks at x_i)
struct CellIntegrals {
  std::vector<double> to_right;
  std::vector<double> to_left;
  std::vector<double> decay;  // e^{-h_i}
};

inline CellIntegrals cell_integrals(std::span<const double> x, const OneSidedSamples& g,
                                    std::span<const std::size_t> corners) {
  check_samples(x, g);
  const std::size_t cells = x.size() - 1;
  const OneSidedSamples d = segment_derivatives(x, g, corners);
  CellIntegrals c{std::vector<double>(cells), std::vector<double>(cells), std::vector<double>(cells)};
  for (std::size_t i = 0; i < cells; ++i) {
    const auto w = hermite_exp_weights(x[i + 1] - x[i]);
    // Near node i+1, distance s = x_{i+1} - y, so d/ds = -d/dy.
    c.to_right[i] = w.near_value * g.left[i + 1] - w.near_slope * d.left[i + 1] + w.far_value * g.right[i] -
                    w.far_slope * d.right[i];
    // Near node i, distance s = y - x_i.
    c.to_left[i] = w.near_value * g.right[i] + w.near_slope * d.right[i] + w.far_value * g.left[i + 1] +
                   w.far_slope * d.left[i + 1];
    c.decay[i] = w.decay;
  }
  return c;
}

// Scaled sweeps: lhat[i] = int_{x_0}^{x_i} e^{-(x_i - y)} g dy,
//                rhat[i] = int_{x_i}^{x_last} e^{-(y - x_i)} g dy.
// Both are O(1) for O(1) densities, whatever the grid extent.
struct ScaledSweeps {
  std::vector<double> lhat;
  std::vector<double> rhat;
};

inline ScaledSweeps scaled_sweeps(std::span<const double> x, const OneSidedSamples& g,
                                  std::span<const std::size_t> corners) {
  const auto c = cell_integrals(x, g, corners);
  const std::size_t n = x.size();
  ScaledSweeps s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i + 1 < n; ++i) s.lhat[i + 1] = c.decay[i] * s.lhat[i] + c.to_right[i];
  for (std::size_t i = n - 1; i > 0; --i) s.rhat[i - 1] = c.decay[i - 1] * s.rhat[i] + c.to_left[i - 1];
  return s;
}

}  // namespace detail

/// Raw cumulative exponential integrals of a density (see ExpSweepAccumulators).
inline ExpSweepAccumulators exp_sweep(std::span<const double> x, const OneSidedSamples& density,
                                      std::span<const std::size_t> corners = {}) {
  const auto c = detail::cell_integrals(x, density, corners);
  const std::size_t n = x.size();
  ExpSweepAccumulators out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i + 1 < n; ++i) out.left[i + 1] = out.left[i] + std::exp(x[i + 1]) * c.to_right[i];
  for (std::size_t i = n - 1; i > 0; --i)
    out.right[i - 1] = out.right[i] + std::exp(-x[i - 1]) * c.to_left[i - 1];
  return out;
}

/// (phi * g)(x_i) at every node.
inline std::vector<double> convolve_phi(std::span<const double> x, const OneSidedSamples& density,
                                        std::span<const std::size_t> corners = {}) {
  const auto s = detail::scaled_sweeps(x, density, corners);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = s.lhat[i] + s.rhat[i];
  return out;
}

/// (phi' * g)(x_i) at every node.
inline std::vector<double> convolve_phi_prime(std::span<const double> x, const OneSidedSamples& density,
                                              std::span<const std::size_t> corners = {}) {
  const auto s = detail::scaled_sweeps(x, density, corners);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = s.rhat[i] - s.lhat[i];
  return out;
}

/// Nonlocal density v^2 + v_x^2 / 2, with each cell using its own one-sided slope.
inline OneSidedSamples nonlocal_density(const PeakedField& field) {
  const std::size_t n = field.size();
  OneSidedSamples a{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double v = field.values()[i];
    const double sl = field.slope_left()[i];
    const double sr = field.slope_right()[i];
    a.left[i] = v * v + 0.5 * sl * sl;
    a.right[i] = v * v + 0.5 * sr * sr;
  }
  return a;
}

/// Q[v](x_i) = 1/2 (phi' * (v^2 + v_x^2/2))(x_i).
inline std::vector<double> conv_Q(const PeakedField& field) {
  const std::size_t corner[] = {field.peak_index()};
  auto q = convolve_phi_prime(field.positions(), nonlocal_density(field), corner);
  for (auto& value : q) value *= 0.5;
  return q;
}

/// P[v](x_i) = 1/2 (phi * (v^2 + v_x^2/2))(x_i).
inline std::vector<double> conv_P(const PeakedField& field) {
  const std::size_t corner[] = {field.peak_index()};
  auto p = convolve_phi(field.positions(), nonlocal_density(field), corner);
  for (auto& value : p) value *= 0.5;
  return p;
}

/// Both nonlocal terms from one pair of sweeps.
struct NonlocalTerms {
  std::vector<double> Q;
  std::vector<double> P;
};

inline NonlocalTerms nonlocal_terms(const PeakedField& field) {
  const std::size_t corner[] = {field.peak_index()};
  const auto s = detail::scaled_sweeps(field.positions(), nonlocal_density(field), corner);
  NonlocalTerms out{std::vector<double>(field.size()), std::vector<double>(field.size())};
  for (std::size_t i = 0; i < field.size(); ++i) {
    out.Q[i] = 0.5 * (s.rhat[i] - s.lhat[i]);
    out.P[i] = 0.5 * (s.rhat[i] + s.lhat[i]);
  }
  return out;
}

/// Closed-form right-hand side of
///   phi' * (phi v + v_x phi'/2) (x) = -phi'(x) v(x) + phi'(x) v(0) - phi(x) int_0^x v,
/// with v and its integral taken from the Hermite interpolant of the field.
inline double lemma_tech_comp_rhs(const PeakedField& field, double x) {
  const double v = interpolate(field, x);
  const double w = integral_from_zero(field, x);
  return -phi_prime(x) * v + phi_prime(x) * field.peak_value() - phi(x) * w;
}

}  // namespace peakon
