#pragma once

// Independent reference computations for the tests. Nothing in here calls the
// sweep or characteristic code under test.

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <vector>

namespace oracle {

inline double phi(double x) { return std::exp(-std::abs(x)); }
inline double dphi(double x) { return x > 0 ? -std::exp(-x) : (x < 0 ? std::exp(x) : 0.0); }

/// Adaptive 61-point Gauss-Kronrod over [a, b], split at the given breakpoints.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        std::initializer_list<double> breaks = {}) {
  std::vector<double> pts{a};
  for (double c : breaks) {
    if (c > a && c < b) pts.push_back(c);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] <= pts[i]) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1], 15, 1e-14);
  }
  return total;
}

/// Q[u](x) = 1/2 int phi'(x - y) (u^2 + u_y^2/2) dy over [-L, L].
inline double q_operator(const std::function<double(double)>& u, const std::function<double(double)>& du,
                         double x, double half_width, double corner = 0.0) {
  auto f = [&](double y) {
    const double a = u(y) * u(y) + 0.5 * du(y) * du(y);
    return 0.5 * dphi(x - y) * a;
  };
  return integrate(f, -half_width, half_width, {x, corner});
}

inline double p_operator(const std::function<double(double)>& u, const std::function<double(double)>& du,
                         double x, double half_width, double corner = 0.0) {
  auto f = [&](double y) {
    const double a = u(y) * u(y) + 0.5 * du(y) * du(y);
    return 0.5 * phi(x - y) * a;
  };
  return integrate(f, -half_width, half_width, {x, corner});
}

/// Left-hand side phi' * (phi v + phi' v_x / 2) evaluated by quadrature.
inline double tech_comp_lhs(const std::function<double(double)>& v, const std::function<double(double)>& dv,
                            double x, double half_width) {
  auto f = [&](double y) { return dphi(x - y) * (phi(y) * v(y) + 0.5 * dphi(y) * dv(y)); };
  return integrate(f, -half_width, half_width, {x, 0.0});
}

/// Classical RK4 for a scalar ODE y' = f(t, y).
inline double rk4_scalar(const std::function<double(double, double)>& f, double y, double t_end, double dt) {
  const int steps = static_cast<int>(std::lround(t_end / dt));
  double t = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double k1 = f(t, y);
    const double k2 = f(t + dt / 2, y + dt / 2 * k1);
    const double k3 = f(t + dt / 2, y + dt / 2 * k2);
    const double k4 = f(t + dt, y + dt * k3);
    y += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += dt;
  }
  return y;
}

}  // namespace oracle
