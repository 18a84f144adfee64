#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "peakon/error.hpp"

namespace peakon {

/// Fixed-step schedule covering [0, t_end]: steps of `dt`, the last one
/// shortened if t_end is not a multiple of dt. Step times are k * dt, not
/// accumulated sums.
class StepSchedule {
 public:
  StepSchedule(double t_end, double dt) : t_end_(t_end), dt_(dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("time step must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InputError("end time must be nonnegative");
    const double ratio = t_end / dt;
    const double nearest = std::round(ratio);
    steps_ = static_cast<std::size_t>(
        std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio) ? nearest : std::ceil(ratio));
  }

  std::size_t steps() const { return steps_; }
  double time(std::size_t k) const { return k >= steps_ ? t_end_ : static_cast<double>(k) * dt_; }
  double step(std::size_t k) const { return time(k + 1) - time(k); }

 private:
  double t_end_;
  double dt_;
  std::size_t steps_ = 0;
};

/// One classical RK4 step for y' = f(t, y) on a fixed-size state.
template <std::size_t N, class Rhs>
std::array<double, N> rk4_step(const Rhs& f, double t, const std::array<double, N>& y, double dt) {
  auto shifted = [&](const std::array<double, N>& k, double c) {
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + c * k[i];
    return out;
  };
  const auto k1 = f(t, y);
  const auto k2 = f(t + 0.5 * dt, shifted(k1, 0.5 * dt));
  const auto k3 = f(t + 0.5 * dt, shifted(k2, 0.5 * dt));
  const auto k4 = f(t + dt, shifted(k3, dt));
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

/// One classical RK4 step on a dynamically sized state.
template <class Rhs>
std::vector<double> rk4_step(const Rhs& f, double t, const std::vector<double>& y, double dt) {
  const std::size_t n = y.size();
  auto shifted = [&](const std::vector<double>& k, double c) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + c * k[i];
    return out;
  };
  const auto k1 = f(t, y);
  const auto k2 = f(t + 0.5 * dt, shifted(k1, 0.5 * dt));
  const auto k3 = f(t + 0.5 * dt, shifted(k2, 0.5 * dt));
  const auto k4 = f(t + dt, shifted(k3, dt));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

}  // namespace peakon
