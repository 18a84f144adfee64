#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "peakon/csv.hpp"
#include "peakon/error.hpp"

namespace peakon {

enum class Side { negative, positive, both };

/// Samples of a continuous, piecewise-C1 function: one value per node and the
/// two one-sided derivatives. Corners are nodes where the slopes differ.
struct Profile {
  std::vector<double> positions;
  std::vector<double> values;
  std::vector<double> slope_left;
  std::vector<double> slope_right;

  std::size_t size() const { return positions.size(); }
};

namespace detail {

inline void validate_profile(const Profile& p) {
  const std::size_t n = p.positions.size();
  if (n < 2) throw StructuralError("profile needs at least 2 nodes");
  if (p.values.size() != n || p.slope_left.size() != n || p.slope_right.size() != n) {
    throw StructuralError("profile arrays have mismatched lengths");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(p.positions[i]) || !std::isfinite(p.values[i]) || !std::isfinite(p.slope_left[i]) ||
        !std::isfinite(p.slope_right[i])) {
      throw InputError("profile contains a non-finite entry at node " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(p.positions[i] < p.positions[i + 1])) {
      throw StructuralError("positions are not strictly increasing at node " + std::to_string(i));
    }
  }
}

// Cubic Hermite interpolant on one cell, local coordinate t in [0, 1].
inline double hermite_value(double t, double h, double v0, double d0, double v1, double d1) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (1.0 - 3.0 * t2 + 2.0 * t3) * v0 + h * (t - 2.0 * t2 + t3) * d0 + (3.0 * t2 - 2.0 * t3) * v1 +
         h * (t3 - t2) * d1;
}

// Integral of the cubic Hermite interpolant from the left node to local coordinate t.
inline double hermite_integral(double t, double h, double v0, double d0, double v1, double d1) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t3 * t;
  return h * ((t - t3 + 0.5 * t4) * v0 + h * (0.5 * t2 - 2.0 * t3 / 3.0 + 0.25 * t4) * d0 +
              (t3 - 0.5 * t4) * v1 + h * (0.25 * t4 - t3 / 3.0) * d1);
}

// Full-cell Hermite integral: trapezoid plus end-slope correction.
inline double hermite_cell_integral(double h, double v0, double d0, double v1, double d1) {
  return 0.5 * h * (v0 + v1) + h * h / 12.0 * (d0 - d1);
}

}  // namespace detail

/// A perturbation field in the class of continuous functions that are C1 on
/// each side of a single peak node at position 0.
///
/// Carries the characteristic labels next to the physical positions; for
/// initial data the two coincide. Immutable after construction.
class PeakedField {
 public:
  PeakedField(std::vector<double> s_labels, std::vector<double> positions, std::vector<double> values,
              std::vector<double> slope_left, std::vector<double> slope_right)
      : labels_(std::move(s_labels)),
        profile_{std::move(positions), std::move(values), std::move(slope_left), std::move(slope_right)} {
    detail::validate_profile(profile_);
    const std::size_t n = profile_.size();
    if (labels_.size() != n) throw StructuralError("label array length differs from positions");
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!std::isfinite(labels_[i]) || !(labels_[i] < labels_[i + 1])) {
        throw StructuralError("labels are not strictly increasing at node " + std::to_string(i));
      }
    }
    const auto zero = std::find(profile_.positions.begin(), profile_.positions.end(), 0.0);
    if (zero == profile_.positions.end()) {
      throw StructuralError("field has no node at position 0");
    }
    peak_ = static_cast<std::size_t>(zero - profile_.positions.begin());
    if (labels_[peak_] != 0.0) {
      throw StructuralError("label 0 must sit at the same node as position 0");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i != peak_ && profile_.slope_left[i] != profile_.slope_right[i]) {
        throw StructuralError("one-sided slopes differ away from the peak at node " + std::to_string(i));
      }
    }
  }

  /// Field whose labels coincide with its positions.
  static PeakedField on_grid(std::vector<double> positions, std::vector<double> values,
                             std::vector<double> slope_left, std::vector<double> slope_right) {
    std::vector<double> labels = positions;
    return PeakedField(std::move(labels), std::move(positions), std::move(values), std::move(slope_left),
                       std::move(slope_right));
  }

  std::size_t size() const { return profile_.size(); }
  std::size_t peak_index() const { return peak_; }
  double peak_value() const { return profile_.values[peak_]; }

  std::span<const double> s_labels() const { return labels_; }
  std::span<const double> positions() const { return profile_.positions; }
  std::span<const double> values() const { return profile_.values; }
  std::span<const double> slope_left() const { return profile_.slope_left; }
  std::span<const double> slope_right() const { return profile_.slope_right; }
  const Profile& profile() const { return profile_; }

 private:
  std::vector<double> labels_;
  Profile profile_;
  std::size_t peak_ = 0;
};

using ScalarFunction = std::function<double(double)>;

/// Samples f and its one-sided derivatives on a grid containing 0.
inline PeakedField sample(const ScalarFunction& f, const ScalarFunction& f_prime_left,
                          const ScalarFunction& f_prime_right, std::span<const double> grid) {
  if (std::find(grid.begin(), grid.end(), 0.0) == grid.end()) {
    throw StructuralError("sampling grid must contain 0");
  }
  std::vector<double> x(grid.begin(), grid.end());
  std::vector<double> v(x.size()), sl(x.size()), sr(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    v[i] = f(x[i]);
    sl[i] = f_prime_left(x[i]);
    sr[i] = f_prime_right(x[i]);
  }
  return PeakedField::on_grid(std::move(x), std::move(v), std::move(sl), std::move(sr));
}

/// Samples a function that is C1 everywhere (same derivative on both sides).
inline PeakedField sample(const ScalarFunction& f, const ScalarFunction& f_prime,
                          std::span<const double> grid) {
  return sample(f, f_prime, f_prime, grid);
}

/// w(x) = integral of v from 0 to x at every node, accumulated outward from
/// the peak node cell by cell. Each cell uses the trapezoid rule with the
/// Hermite end-slope correction built from the stored one-sided slopes.
inline std::vector<double> cumulative_from_zero(const PeakedField& field) {
  const auto x = field.positions();
  const auto v = field.values();
  const auto sl = field.slope_left();
  const auto sr = field.slope_right();
  const std::size_t p = field.peak_index();
  std::vector<double> w(field.size(), 0.0);
  for (std::size_t i = p; i + 1 < field.size(); ++i) {
    w[i + 1] = w[i] + detail::hermite_cell_integral(x[i + 1] - x[i], v[i], sr[i], v[i + 1], sl[i + 1]);
  }
  for (std::size_t i = p; i > 0; --i) {
    w[i - 1] = w[i] - detail::hermite_cell_integral(x[i] - x[i - 1], v[i - 1], sr[i - 1], v[i], sl[i]);
  }
  return w;
}

namespace detail {

inline std::size_t locate_cell(std::span<const double> x, double at) {
  if (!std::isfinite(at) || at < x.front() || at > x.back()) {
    throw ExtrapolationError("evaluation point outside the sampled support");
  }
  auto it = std::upper_bound(x.begin(), x.end(), at);
  std::size_t cell = static_cast<std::size_t>(it - x.begin());
  cell = cell == 0 ? 0 : cell - 1;
  return std::min(cell, x.size() - 2);
}

}  // namespace detail

/// Piecewise cubic Hermite interpolation of the field at an arbitrary point.
inline double interpolate(const PeakedField& field, double at) {
  const auto x = field.positions();
  const std::size_t i = detail::locate_cell(x, at);
  const double h = x[i + 1] - x[i];
  return detail::hermite_value((at - x[i]) / h, h, field.values()[i], field.slope_right()[i],
                               field.values()[i + 1], field.slope_left()[i + 1]);
}

/// Integral of the Hermite interpolant of v from 0 to `at`, consistent with
/// cumulative_from_zero at the nodes.
inline double integral_from_zero(const PeakedField& field, double at) {
  const auto x = field.positions();
  const std::size_t i = detail::locate_cell(x, at);
  const auto w = cumulative_from_zero(field);
  const double h = x[i + 1] - x[i];
  return w[i] + detail::hermite_integral((at - x[i]) / h, h, field.values()[i], field.slope_right()[i],
                                         field.values()[i + 1], field.slope_left()[i + 1]);
}

namespace detail {

// Cellwise trapezoid of a density f(v, v_x), using the slope belonging to the cell.
template <class Density>
double trapezoid(const Profile& p, std::size_t first_cell, std::size_t end_cell, Density&& f) {
  double sum = 0.0;
  for (std::size_t i = first_cell; i < end_cell; ++i) {
    const double h = p.positions[i + 1] - p.positions[i];
    sum += 0.5 * h * (f(p.values[i], p.slope_right[i]) + f(p.values[i + 1], p.slope_left[i + 1]));
  }
  return sum;
}

inline double h1_density(double v, double vx) { return v * v + vx * vx; }

}  // namespace detail

/// Trapezoid approximation of the squared H1 norm over a half-line or the whole line.
inline double h1_norm_sq(const PeakedField& field, Side side) {
  const std::size_t p = field.peak_index();
  const std::size_t cells = field.size() - 1;
  switch (side) {
    case Side::negative:
      return detail::trapezoid(field.profile(), 0, p, detail::h1_density);
    case Side::positive:
      return detail::trapezoid(field.profile(), p, cells, detail::h1_density);
    case Side::both:
      break;
  }
  return detail::trapezoid(field.profile(), 0, p, detail::h1_density) +
         detail::trapezoid(field.profile(), p, cells, detail::h1_density);
}

/// E(u) = integral of u^2 + u_x^2.
inline double energy_E(const Profile& profile) {
  detail::validate_profile(profile);
  return detail::trapezoid(profile, 0, profile.size() - 1, detail::h1_density);
}
inline double energy_E(const PeakedField& field) { return h1_norm_sq(field, Side::both); }

/// F(u) = integral of u (u^2 + u_x^2).
inline double momentum_F(const Profile& profile) {
  detail::validate_profile(profile);
  return detail::trapezoid(profile, 0, profile.size() - 1,
                           [](double v, double vx) { return v * (v * v + vx * vx); });
}
inline double momentum_F(const PeakedField& field) { return momentum_F(field.profile()); }

struct SupNorms {
  double value = 0.0;  // max |v| over nodes
  double slope = 0.0;  // max |v_x| over both one-sided slopes
};

inline SupNorms sup_norms(const PeakedField& field) {
  SupNorms out;
  for (std::size_t i = 0; i < field.size(); ++i) {
    out.value = std::max(out.value, std::abs(field.values()[i]));
    out.slope = std::max({out.slope, std::abs(field.slope_left()[i]), std::abs(field.slope_right()[i])});
  }
  return out;
}

/// [v_x] across the peak: right slope minus left slope.
inline double derivative_jump_at_peak(const PeakedField& field) {
  const std::size_t p = field.peak_index();
  return field.slope_right()[p] - field.slope_left()[p];
}

/// CSV with columns s_label, position, value, slope_left, slope_right.
inline void write_csv(std::ostream& out, const PeakedField& field) {
  csv::write_header(out, {"s_label", "position", "value", "slope_left", "slope_right"});
  for (std::size_t i = 0; i < field.size(); ++i) {
    csv::write_row(out, {field.s_labels()[i], field.positions()[i], field.values()[i], field.slope_left()[i],
                         field.slope_right()[i]});
  }
}

}  // namespace peakon
