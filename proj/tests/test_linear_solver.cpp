#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "oracle.hpp"
#include "peakon/grid.hpp"
#include "peakon/linear_solver.hpp"

namespace peakon {
namespace {

double bump(double x) { return x * std::exp(-x * x); }
double bump_prime(double x) { return (1.0 - 2.0 * x * x) * std::exp(-x * x); }

PeakedField bump_field(const std::vector<double>& grid) { return sample(bump, bump_prime, grid); }

// Vanishes at 0 with different one-sided slopes: 0.7 x e^{-x} on the right, -0.4 x e^{x} on the left.
PeakedField corner_field(const std::vector<double>& grid) {
  auto v = [](double x) { return x >= 0 ? 0.7 * x * std::exp(-x) : -0.4 * x * std::exp(x); };
  auto dl = [](double x) { return x <= 0 ? -0.4 * (1 + x) * std::exp(x) : 0.7 * (1 - x) * std::exp(-x); };
  auto dr = [](double x) { return x < 0 ? -0.4 * (1 + x) * std::exp(x) : 0.7 * (1 - x) * std::exp(-x); };
  return sample(v, dl, dr, grid);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

TEST(CharX, Examples) {
  EXPECT_EQ(char_X(2.0, 0.0), 0.0);
  for (double s : {-3.0, -0.2, 0.5, 7.0}) EXPECT_NEAR(char_X(0.0, s), s, 1e-15 * std::max(1.0, std::abs(s)));
  EXPECT_NEAR(char_X(1.0, 1.0), std::log(1.0 + (std::exp(1.0) - 1.0) * std::exp(-1.0)), 1e-15);
  EXPECT_NEAR(char_X(1.0, 1.0), 0.48988, 1e-5);
  const double by_rk4 =
      oracle::rk4_scalar([](double, double x) { return std::exp(-std::abs(x)) - 1.0; }, 1.0, 1.0, 1e-4);
  EXPECT_NEAR(char_X(1.0, 1.0), by_rk4, 1e-12);
}

TEST(CharX, StableForLargeArguments) {
  // s - t > 700 would overflow e^s in the naive form.
  EXPECT_NEAR(char_X(5.0, 800.0), 795.0, 1e-9);
  EXPECT_NEAR(char_X(20.0, -800.0), -820.0, 1e-9);
  EXPECT_TRUE(std::isfinite(char_X(20.0, 30.0)));
  EXPECT_TRUE(std::isfinite(char_X(20.0, 1e-10)));
  EXPECT_GT(char_X(20.0, 1e-10), 0.0);
  EXPECT_LT(char_X(20.0, -1e-10), 0.0);
}

TEST(JacobianXs, LimitsAndPositivity) {
  EXPECT_NEAR(jacobian_Xs(2.0, 1e-12), std::exp(-2.0), 1e-10);
  EXPECT_NEAR(jacobian_Xs(2.0, -1e-12), std::exp(2.0), 1e-8);
  EXPECT_EQ(jacobian_Xs_at_peak(2.0, Side::positive), std::exp(-2.0));
  EXPECT_EQ(jacobian_Xs_at_peak(2.0, Side::negative), std::exp(2.0));
  EXPECT_EQ(jacobian_Xs(0.0, 0.3), 1.0);
  EXPECT_EQ(jacobian_Xs(0.0, -0.3), 1.0);
  EXPECT_NEAR(jacobian_Xs(3.0, 60.0), 1.0, 1e-12);
  EXPECT_NEAR(jacobian_Xs(3.0, -60.0), 1.0, 1e-12);
  for (double t : {0.5, 5.0, 20.0}) {
    for (double s : {-30.0, -1.0, -1e-6, 1e-6, 1.0, 30.0}) EXPECT_GT(jacobian_Xs(t, s), 0.0);
  }
  EXPECT_THROW(jacobian_Xs(1.0, 0.0), InputError);
}

TEST(JacobianXs, MatchesFiniteDifferenceOfCharX) {
  for (double t : {0.5, 3.0}) {
    for (double s : {-2.0, -0.1, 0.1, 2.0}) {
      const double h = 1e-6;
      const double fd = (char_X(t, s + h) - char_X(t, s - h)) / (2 * h);
      EXPECT_NEAR(jacobian_Xs(t, s), fd, 1e-7);
    }
  }
}

TEST(ElementaryMaximum, ApproachesOne) {
  const double t = 20.0;
  const double s = 0.001;
  const double p = std::expm1(t) * std::exp(-s);
  EXPECT_GE(p / (1.0 + p), 0.999);
}

TEST(SolveLinear, ZeroDataStaysZero) {
  const auto grid = uniform_grid(10.0, 201);
  const auto st = solve_linear(sample([](double) { return 0.0; }, [](double) { return 0.0; }, grid), 4.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(st.V[i], 0.0);
    EXPECT_EQ(st.W[i], 0.0);
    EXPECT_EQ(st.U_left[i], 0.0);
    EXPECT_EQ(st.U_right[i], 0.0);
  }
}

TEST(SolveLinear, InitialTimeReproducesData) {
  const auto grid = graded_grid(20.0, 801, 1e-2);
  const auto v0 = corner_field(grid);
  const auto st = solve_linear(v0, 0.0);
  const auto w0 = cumulative_from_zero(v0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(st.X[i], grid[i], 1e-14 * std::max(1.0, std::abs(grid[i])));
    EXPECT_NEAR(st.V[i], v0.values()[i], 1e-15);
    EXPECT_NEAR(st.W[i], w0[i], 1e-15);
    EXPECT_NEAR(st.U_left[i], v0.slope_left()[i], 1e-15);
    EXPECT_NEAR(st.U_right[i], v0.slope_right()[i], 1e-15);
  }
}

TEST(SolveLinear, StructuralInvariants) {
  const auto grid = graded_grid(30.0, 2001, 1e-3);
  const auto st = solve_linear(bump_field(grid), 5.0);
  EXPECT_EQ(st.X[st.peak], 0.0);
  EXPECT_EQ(st.V[st.peak], 0.0);
  EXPECT_EQ(st.W[st.peak], 0.0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) EXPECT_LT(st.X[i], st.X[i + 1]);
  EXPECT_NO_THROW(to_field(st));
}

TEST(SolveLinear, RejectsDataThatDoNotVanishAtPeak) {
  const auto grid = uniform_grid(10.0, 101);
  const auto v0 = sample([](double x) { return std::exp(-x * x); },
                         [](double x) { return -2 * x * std::exp(-x * x); }, grid);
  EXPECT_THROW(solve_linear(v0, 1.0), JumpGenerationError);
  EXPECT_THROW(linear_ode_reference(v0, 1.0, 0.1), JumpGenerationError);
}

TEST(SolveLinear, PeakTracesGrowAndDecay) {
  const auto grid = uniform_grid(20.0, 401);
  const auto v0 = corner_field(grid);
  for (double t : {0.5, 2.0, 6.0}) {
    const auto st = solve_linear(v0, t);
    EXPECT_NEAR(st.U_right[st.peak], 0.7 * std::exp(t), 1e-12 * std::exp(t));
    EXPECT_NEAR(st.U_left[st.peak], -0.4 * std::exp(-t), 1e-15);
    EXPECT_EQ(st.alpha, 0.7);
  }
  // C1 data acquire a derivative jump: one-sided limits e^{+-t} v0'(0).
  const auto st = solve_linear(bump_field(grid), 1.0);
  EXPECT_NE(st.U_left[st.peak], st.U_right[st.peak]);
}

TEST(SolveLinear, TracesAreLimitsOfNeighbouringLabels) {
  const auto grid = graded_grid(20.0, 4001, 1e-5);
  const auto st = solve_linear(corner_field(grid), 2.0);
  EXPECT_NEAR(st.U_right[st.peak + 1], st.U_right[st.peak], 1e-3);
  EXPECT_NEAR(st.U_left[st.peak - 1], st.U_left[st.peak], 1e-3);
}

TEST(SolveLinear, MatchesOdeReference) {
  const auto grid = uniform_grid(20.0, 801);
  const auto v0 = bump_field(grid);
  const auto closed = solve_linear(v0, 3.0);
  const auto ode = linear_ode_reference(v0, 3.0, 1e-3);
  EXPECT_LT(max_abs_diff(closed.X, ode.X), 1e-6);
  EXPECT_LT(max_abs_diff(closed.V, ode.V), 1e-6);
  EXPECT_LT(max_abs_diff(closed.W, ode.W), 1e-6);
  EXPECT_LT(max_abs_diff(closed.U_left, ode.U_left), 1e-6);
  EXPECT_LT(max_abs_diff(closed.U_right, ode.U_right), 1e-6);
  EXPECT_LT(max_abs_diff(closed.Xs_left, ode.Xs_left), 1e-6);
  EXPECT_LT(max_abs_diff(closed.Xs_right, ode.Xs_right), 1e-6);
}

TEST(LinearOdeReference, CharacteristicsMatchClosedForm) {
  const auto grid = uniform_grid(10.0, 41);
  const auto ode =
      linear_ode_reference(sample([](double) { return 0.0; }, [](double) { return 0.0; }, grid), 2.0, 1e-4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(ode.X[i], char_X(2.0, grid[i]), 1e-8);
    EXPECT_EQ(ode.V[i], 0.0);
  }
}

TEST(LinearOdeReference, RejectsBadStep) {
  const auto v0 = bump_field(uniform_grid(5.0, 11));
  EXPECT_THROW(linear_ode_reference(v0, 1.0, 0.0), InputError);
}

TEST(H1Identity, InitialTimeIsHalfLineNorm) {
  const auto v0 = bump_field(uniform_grid(30.0, 2001));
  EXPECT_EQ(h1_identity_rhs(v0, 0.0, Side::positive), h1_norm_sq(v0, Side::positive));
  EXPECT_EQ(h1_identity_rhs(v0, 0.0, Side::negative), h1_norm_sq(v0, Side::negative));
  EXPECT_THROW(h1_identity_rhs(v0, 1.0, Side::both), InputError);
}

TEST(H1Identity, PositiveGrowsNegativeDecreases) {
  const auto v0 = bump_field(uniform_grid(30.0, 2001));
  double prev_pos = h1_identity_rhs(v0, 0.0, Side::positive);
  double prev_neg = h1_identity_rhs(v0, 0.0, Side::negative);
  for (double t : {0.5, 1.0, 2.0, 5.0}) {
    const double pos = h1_identity_rhs(v0, t, Side::positive);
    const double neg = h1_identity_rhs(v0, t, Side::negative);
    EXPECT_GT(pos, prev_pos);
    EXPECT_LT(neg, prev_neg);
    EXPECT_GT(neg, 0.0);
    prev_pos = pos;
    prev_neg = neg;
  }
}

TEST(H1Identity, SolvedSurfacesMatchIdentity) {
  const auto v0 = bump_field(uniform_grid(30.0, 20001));
  for (double t : {1.0, 3.0, 5.0}) {
    const auto st = solve_linear(v0, t);
    for (Side side : {Side::positive, Side::negative}) {
      const double measured = linear_h1_norm_sq(st, side);
      const double predicted = h1_identity_rhs(v0, t, side);
      EXPECT_NEAR(measured / predicted, 1.0, 1e-4) << "t=" << t;
    }
  }
}

TEST(H1Identity, SurfaceNormAgreesWithFieldNorm) {
  // Label-space quadrature vs trapezoid over the deformed grid.
  const auto v0 = bump_field(uniform_grid(30.0, 20001));
  const auto st = solve_linear(v0, 2.0);
  const double label_space = linear_h1_norm_sq(st, Side::both);
  const double physical = h1_norm_sq(to_field(st), Side::both);
  EXPECT_NEAR(label_space / physical, 1.0, 1e-4);
}

TEST(SupBounds, LinearBoundsHoldOnGrid) {
  const auto grid = graded_grid(30.0, 4001, 1e-3);
  const auto v0 = corner_field(grid);
  const auto n0 = sup_norms(v0);
  const double l1_pos = l1_norm(v0, Side::positive);
  for (double t : {0.5, 2.0, 5.0, 10.0}) {
    const auto st = solve_linear(v0, t);
    double sup_v_pos = 0.0, sup_v_neg = 0.0, sup_u_pos = 0.0, sup_u_neg = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (i >= st.peak) {
        sup_v_pos = std::max(sup_v_pos, std::abs(st.V[i]));
        sup_u_pos = std::max(sup_u_pos, std::abs(st.U_right[i]));
      }
      if (i <= st.peak) {
        sup_v_neg = std::max(sup_v_neg, std::abs(st.V[i]));
        sup_u_neg = std::max(sup_u_neg, std::abs(st.U_left[i]));
      }
    }
    EXPECT_LE(sup_v_pos, n0.value + l1_pos + 1e-12);
    EXPECT_LE(sup_v_neg, 2.0 * n0.value + 1e-12);
    EXPECT_LE(sup_u_neg, n0.slope + 2.0 * n0.value + 1e-12);
    EXPECT_GE(sup_u_pos, 0.7 * std::exp(t) * (1 - 1e-12));
  }
}

TEST(ApplyA, JumpAtPeak) {
  const auto grid = uniform_grid(20.0, 4001);
  const auto f = sample([](double x) { return std::exp(-std::abs(x)); },
                        [](double x) { return x <= 0 ? std::exp(x) : -std::exp(-x); },
                        [](double x) { return x < 0 ? std::exp(x) : -std::exp(-x); }, grid);
  const auto a = apply_A(f);
  const std::size_t p = f.peak_index();
  EXPECT_NEAR(a.left[p], -1.0, 1e-6);
  EXPECT_NEAR(a.right[p], 1.0, 1e-6);
  // Direct evaluation of the operator at x = +-1e-6 for v = phi.
  auto direct = [](double x) {
    const double w = x >= 0 ? 1.0 - std::exp(-x) : std::exp(x) - 1.0;
    const double dv = x < 0 ? std::exp(x) : -std::exp(-x);
    return (1.0 - std::exp(-std::abs(x))) * dv + std::exp(-std::abs(x)) * w -
           (x < 0 ? std::exp(x) : -std::exp(-x));
  };
  EXPECT_NEAR(a.left[p], direct(-1e-6), 1e-5);
  EXPECT_NEAR(a.right[p], direct(1e-6), 1e-5);
}

TEST(ApplyA, ZeroAndScaledPeak) {
  const auto grid = uniform_grid(10.0, 101);
  const auto z = apply_A(sample([](double) { return 0.0; }, [](double) { return 0.0; }, grid));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(z.left[i], 0.0);
    EXPECT_EQ(z.right[i], 0.0);
  }
  const auto c = apply_A(sample([](double x) { return 0.3 * std::exp(-x * x); },
                                [](double x) { return -0.6 * x * std::exp(-x * x); }, grid));
  EXPECT_EQ(c.left[50], -0.3);
  EXPECT_EQ(c.right[50], 0.3);
}

TEST(ApplyA, AgreesWithClosedFormTimeDerivative) {
  // For v0(0) = 0, dV/dt at t = 0 equals (A v0)(s).
  const auto grid = uniform_grid(20.0, 2001);
  const auto v0 = bump_field(grid);
  const auto a = apply_A(v0);
  const double h = 1e-5;
  const auto plus = solve_linear(v0, h);
  for (std::size_t i = 0; i < grid.size(); i += 50) {
    if (std::abs(grid[i]) > 6.0) continue;
    // Eulerian derivative: d/dt v(t, X) = V_t - (phi - 1) v_x along characteristics.
    const double vt_lagr = (plus.V[i] - v0.values()[i]) / h;
    const double eulerian = vt_lagr - (phi(grid[i]) - 1.0) * v0.slope_right()[i];
    EXPECT_NEAR(eulerian, a.right[i], 1e-4);
  }
}

TEST(LinearCsv, Header) {
  const auto st = solve_linear(bump_field(uniform_grid(2.0, 5)), 1.0);
  std::ostringstream out;
  write_csv(out, st);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,s_label,X,V,U_left,U_right,W");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
}

}  // namespace
}  // namespace peakon
