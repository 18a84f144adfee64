#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "peakon/error.hpp"

namespace peakon {

namespace detail {

// Mirror the nonnegative half-grid {0, x_1, ..., x_M} into a symmetric grid.
inline std::vector<double> mirror_half_grid(const std::vector<double>& half) {
  const std::size_t m = half.size() - 1;
  std::vector<double> grid(2 * m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    grid[m + k] = half[k];
    grid[m - k] = -half[k];
  }
  grid[m] = 0.0;
  return grid;
}

inline void check_grid_request(double half_width, std::size_t nodes) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ConfigurationError("grid half-width must be positive and finite");
  }
  if (nodes < 3 || nodes % 2 == 0) {
    throw ConfigurationError("grid node count must be odd and at least 3 so that 0 is a node");
  }
}

}  // namespace detail

/// Uniform symmetric grid on [-L, L] with an odd number of nodes (0 is the centre node).
inline std::vector<double> uniform_grid(double half_width, std::size_t nodes) {
  detail::check_grid_request(half_width, nodes);
  const std::size_t m = (nodes - 1) / 2;
  std::vector<double> half(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    half[k] = half_width * static_cast<double>(k) / static_cast<double>(m);
  }
  half[m] = half_width;
  return detail::mirror_half_grid(half);
}

/// Symmetric grid on [-L, L] whose spacing grows geometrically away from 0,
/// starting at `h_min` next to the peak node.
///
/// If `h_min` is at least the uniform spacing L/M (M cells per side) the
/// uniform grid is returned, which then already satisfies h <= h_min.
inline std::vector<double> graded_grid(double half_width, std::size_t nodes, double h_min) {
  detail::check_grid_request(half_width, nodes);
  if (!(h_min > 0.0) || !std::isfinite(h_min)) {
    throw ConfigurationError("h_min must be positive and finite");
  }
  const std::size_t m = (nodes - 1) / 2;
  const double md = static_cast<double>(m);
  if (h_min * md >= half_width) {
    return uniform_grid(half_width, nodes);
  }

  // Solve h_min * (r^M - 1) / (r - 1) = L for r > 1 by bisection on log r.
  auto span_for = [&](double log_r) { return h_min * std::expm1(md * log_r) / std::expm1(log_r); };
  double lo = 0.0;
  double hi = 1.0;
  while (span_for(hi) < half_width) hi *= 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (span_for(mid) < half_width) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double log_r = 0.5 * (lo + hi);

  std::vector<double> half(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    half[k] = half_width * std::expm1(static_cast<double>(k) * log_r) / std::expm1(md * log_r);
  }
  half[m] = half_width;
  return detail::mirror_half_grid(half);
}

}  // namespace peakon
