#include <array>
#include <cmath>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace legik;

namespace {

// Degree-7 polynomial through the six boundary states plus two interior
// position constraints; used to spot-check the quintic's jerk optimality.
std::array<double, 8> solve_septic(double t0, double tf, const AxisBoundary& bc,
                                   double ta, double pa, double tb, double pb) {
  Eigen::Matrix<double, 8, 8> M = Eigen::Matrix<double, 8, 8>::Zero();
  auto fill_row = [&](int row, double t, int order) {
    for (int j = order; j < 8; ++j) {
      double c = 1.0;
      for (int d = 0; d < order; ++d) c *= j - d;
      M(row, j) = c * std::pow(t, j - order);
    }
  };
  fill_row(0, t0, 0);
  fill_row(1, t0, 1);
  fill_row(2, t0, 2);
  fill_row(3, tf, 0);
  fill_row(4, tf, 1);
  fill_row(5, tf, 2);
  fill_row(6, ta, 0);
  fill_row(7, tb, 0);
  Eigen::Matrix<double, 8, 1> rhs;
  rhs << bc.p0, bc.v0, bc.a0, bc.pf, bc.vf, bc.af, pa, pb;
  Eigen::Matrix<double, 8, 1> c = M.fullPivLu().solve(rhs);
  std::array<double, 8> out;
  for (int i = 0; i < 8; ++i) out[i] = c[i];
  return out;
}

double septic_jerk(const std::array<double, 8>& c, double t) {
  double j = 0.0;
  for (int i = 7; i >= 3; --i)
    j = j * t + static_cast<double>(i * (i - 1) * (i - 2)) * c[i];
  return j;
}

template <typename F>
double squared_jerk_cost(F&& jerk, double t0, double tf) {
  const int n = 2000;  // Simpson panels
  double h = (tf - t0) / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    double v = jerk(t0 + i * h);
    double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * v * v;
  }
  return acc * h / 3.0;
}

}  // namespace

TEST(Quintic, ConstantBoundaryIsConstantPolynomial) {
  AxisBoundary bc{0.37, 0, 0, 0.37, 0, 0};
  auto c = solve_quintic(0.0, 0.5, bc);
  EXPECT_NEAR(c.s[0], 0.37, 1e-12);
  for (int i = 1; i < 6; ++i) EXPECT_NEAR(c.s[i], 0.0, 1e-12);
  auto k = c.at(0.123);
  EXPECT_NEAR(k.pos, 0.37, 1e-12);
  EXPECT_NEAR(k.vel, 0.0, 1e-12);
  EXPECT_NEAR(k.acc, 0.0, 1e-12);
  EXPECT_NEAR(k.jerk, 0.0, 1e-12);
}

TEST(Quintic, NormalizedMinJerkProfile) {
  auto c = solve_quintic(0.0, 1.0, {0, 0, 0, 1, 0, 0});
  EXPECT_NEAR(c.s[0], 0.0, 1e-12);
  EXPECT_NEAR(c.s[1], 0.0, 1e-12);
  EXPECT_NEAR(c.s[2], 0.0, 1e-12);
  EXPECT_NEAR(c.s[3], 10.0, 1e-12);
  EXPECT_NEAR(c.s[4], -15.0, 1e-12);
  EXPECT_NEAR(c.s[5], 6.0, 1e-12);
  EXPECT_NEAR(c.at(0.5).pos, 0.5, 1e-12);
}

TEST(Quintic, ReferenceMotionCoefficients) {
  BoundaryConditions bc = table3_boundary();
  auto cx = solve_quintic(bc.t0, bc.tf, bc.x);
  auto cy = solve_quintic(bc.t0, bc.tf, bc.y);
  const double ex[6] = {0.824628, 1.33, 0.0, -57.39208, 172.17624, -137.740992};
  const double ey[6] = {-0.0668736, 1.33, 0.0, -9.369792, 28.109376, -22.4875008};
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(cx.s[i], ex[i], 1e-8) << "x coeff " << i;
    EXPECT_NEAR(cy.s[i], ey[i], 1e-8) << "y coeff " << i;
  }
}

TEST(Quintic, ReferenceMotionMidpointOracle) {
  BoundaryConditions bc = table3_boundary();
  auto cx = solve_quintic(bc.t0, bc.tf, bc.x);
  auto cy = solve_quintic(bc.t0, bc.tf, bc.y);
  EXPECT_NEAR(cx.at(0.25).pos, 0.79842750000000062, 1e-9);
  EXPECT_NEAR(cy.at(0.25).pos, 0.20706520000000009, 1e-9);
  EXPECT_NEAR(cx.at(0.25).vel, -1.36025375, 1e-9);
}

TEST(Quintic, RandomBoundaryStatesReproduced) {
  Rng rng(31);
  for (int k = 0; k < 100; ++k) {
    AxisBoundary bc;
    bc.p0 = rng.uniform(-1, 1);
    bc.v0 = rng.uniform(-2, 2);
    bc.a0 = rng.uniform(-4, 4);
    bc.pf = rng.uniform(-1, 1);
    bc.vf = rng.uniform(-2, 2);
    bc.af = rng.uniform(-4, 4);
    double t0 = rng.uniform(-0.5, 0.5);
    double tf = t0 + rng.uniform(0.2, 1.5);
    auto c = solve_quintic(t0, tf, bc);
    auto k0 = c.at(t0);
    auto kf = c.at(tf);
    EXPECT_NEAR(k0.pos, bc.p0, 1e-9);
    EXPECT_NEAR(k0.vel, bc.v0, 1e-9);
    EXPECT_NEAR(k0.acc, bc.a0, 1e-9);
    EXPECT_NEAR(kf.pos, bc.pf, 1e-9);
    EXPECT_NEAR(kf.vel, bc.vf, 1e-9);
    EXPECT_NEAR(kf.acc, bc.af, 1e-9);
  }
}

TEST(Quintic, DegenerateDurationRejected) {
  EXPECT_THROW(solve_quintic(0.0, 0.0, {}), std::invalid_argument);
  EXPECT_THROW(solve_quintic(0.0, 1e-10, {}), std::invalid_argument);
  EXPECT_THROW(solve_quintic(0.5, 0.4, {}), std::invalid_argument);
}

TEST(Quintic, BeatsSepticWithExtraConstraints) {
  // Among all polynomials meeting the six boundary states, the quintic
  // minimizes integral squared jerk; pinning two extra interior points on a
  // septic can only cost more.
  Rng rng(32);
  for (int k = 0; k < 100; ++k) {
    AxisBoundary bc;
    bc.p0 = rng.uniform(-1, 1);
    bc.v0 = rng.uniform(-2, 2);
    bc.a0 = rng.uniform(-4, 4);
    bc.pf = rng.uniform(-1, 1);
    bc.vf = rng.uniform(-2, 2);
    bc.af = rng.uniform(-4, 4);
    auto quintic = solve_quintic(0.0, 1.0, bc);
    auto septic = solve_septic(0.0, 1.0, bc, 0.3, rng.uniform(-1, 2), 0.7,
                               rng.uniform(-1, 2));
    double qc = squared_jerk_cost([&](double t) { return quintic.at(t).jerk; },
                                  0.0, 1.0);
    double sc = squared_jerk_cost([&](double t) { return septic_jerk(septic, t); },
                                  0.0, 1.0);
    EXPECT_LE(qc, sc + 1e-9 * std::max(1.0, sc));
  }
}

TEST(Plan, ReferenceMotionEndpoints) {
  auto plan = generate_plan(table3_boundary(), 101);
  ASSERT_EQ(plan.size(), 101u);
  EXPECT_NEAR(plan.samples.front().x, 0.824628, 1e-9);
  EXPECT_NEAR(plan.samples.front().y, -0.0668736, 1e-9);
  EXPECT_NEAR(plan.samples.back().x, 0.772227, 1e-9);
  EXPECT_NEAR(plan.samples.back().y, 0.481004, 1e-9);
  EXPECT_NEAR(plan.samples.front().vx, 1.33, 1e-9);
  EXPECT_NEAR(plan.samples.back().vy, 1.33, 1e-9);
  EXPECT_NEAR(plan.samples.front().ax, 0.0, 1e-9);
  EXPECT_NEAR(plan.samples.back().ay, 0.0, 1e-9);
}

TEST(Plan, TwoSamplesAreExactlyTheBoundaryStates) {
  BoundaryConditions bc = table3_boundary();
  auto plan = generate_plan(bc, 2);
  ASSERT_EQ(plan.size(), 2u);
  EXPECT_DOUBLE_EQ(plan.times[0], bc.t0);
  EXPECT_DOUBLE_EQ(plan.times[1], bc.tf);
  EXPECT_NEAR(plan.samples[0].x, bc.x.p0, 1e-9);
  EXPECT_NEAR(plan.samples[1].y, bc.y.pf, 1e-9);
}

TEST(Plan, UniformGridEndsExactlyAtFinalTime) {
  BoundaryConditions bc = table3_boundary();
  auto plan = generate_plan(bc, 101);
  EXPECT_DOUBLE_EQ(plan.times.front(), bc.t0);
  EXPECT_DOUBLE_EQ(plan.times.back(), bc.tf);
  double dt = (bc.tf - bc.t0) / 100.0;
  for (std::size_t i = 0; i + 1 < plan.times.size(); ++i)
    EXPECT_NEAR(plan.times[i + 1] - plan.times[i], dt, 1e-12);
  for (std::size_t i = 0; i < plan.size(); ++i)
    EXPECT_DOUBLE_EQ(plan.samples[i].t, plan.times[i]);
}

TEST(Plan, DeterministicForSameInputs) {
  auto a = generate_plan(table3_boundary(), 64);
  auto b = generate_plan(table3_boundary(), 64);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.samples[i].x, b.samples[i].x);
    EXPECT_EQ(a.samples[i].y, b.samples[i].y);
    EXPECT_EQ(a.samples[i].vx, b.samples[i].vx);
    EXPECT_EQ(a.samples[i].ay, b.samples[i].ay);
  }
}

TEST(Plan, RejectsTooFewSamples) {
  EXPECT_THROW(generate_plan(table3_boundary(), 0), std::invalid_argument);
  EXPECT_THROW(generate_plan(table3_boundary(), 1), std::invalid_argument);
}

TEST(Plan, AllReferenceSamplesWithinLegReach) {
  KinematicModel m;
  for (const auto& s : generate_plan(table3_boundary(), 101).samples)
    EXPECT_LT(std::hypot(s.x, s.y), m.reach());
}
