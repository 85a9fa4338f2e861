#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

namespace legik {

// Boundary state for one axis: position, velocity, acceleration at t0 and tf.
struct AxisBoundary {
  double p0 = 0, v0 = 0, a0 = 0;
  double pf = 0, vf = 0, af = 0;
};

struct BoundaryConditions {
  double t0 = 0.0;
  double tf = 0.5;
  AxisBoundary x;
  AxisBoundary y;
};

// Table-3 reference motion: 0.5 s swing with 1.33 m/s boundary velocities.
inline BoundaryConditions table3_boundary() {
  BoundaryConditions bc;
  bc.t0 = 0.0;
  bc.tf = 0.5;
  bc.x = {0.824628, 1.33, 0.0, 0.772227, 1.33, 0.0};
  bc.y = {-0.0668736, 1.33, 0.0, 0.481004, 1.33, 0.0};
  return bc;
}

struct Kinematics1d {
  double pos = 0, vel = 0, acc = 0, jerk = 0;
};

// Quintic s0 + s1 t + ... + s5 t^5; minimizing integral of squared jerk over
// fixed endpoint states makes the quintic optimal, so solving the 6x6
// boundary system is the whole planner.
struct QuinticCoefficients {
  std::array<double, 6> s{};

  Kinematics1d at(double t) const {
    // Horner evaluation of the polynomial and its first three derivatives.
    Kinematics1d k;
    k.pos = s[5];
    for (int i = 4; i >= 0; --i) k.pos = k.pos * t + s[i];
    k.vel = 5 * s[5];
    for (int i = 4; i >= 1; --i) k.vel = k.vel * t + i * s[i];
    k.acc = 20 * s[5];
    for (int i = 4; i >= 2; --i) k.acc = k.acc * t + i * (i - 1) * s[i];
    k.jerk = 60 * s[5];
    for (int i = 4; i >= 3; --i) k.jerk = k.jerk * t + i * (i - 1) * (i - 2) * s[i];
    return k;
  }
};

inline QuinticCoefficients solve_quintic(double t0, double tf,
                                         const AxisBoundary& bc) {
  if (!(tf - t0 > 1e-9))
    throw std::invalid_argument("quintic: tf - t0 must exceed 1e-9 s");
  Eigen::Matrix<double, 6, 6> M;
  for (int r = 0; r < 2; ++r) {
    double t = r == 0 ? t0 : tf;
    double tp[6] = {1, t, t * t, t * t * t, t * t * t * t, t * t * t * t * t};
    for (int j = 0; j < 6; ++j) {
      M(3 * r + 0, j) = tp[j];
      M(3 * r + 1, j) = j >= 1 ? j * tp[j - 1] : 0.0;
      M(3 * r + 2, j) = j >= 2 ? j * (j - 1) * tp[j - 2] : 0.0;
    }
  }
  Eigen::Matrix<double, 6, 1> rhs;
  rhs << bc.p0, bc.v0, bc.a0, bc.pf, bc.vf, bc.af;
  Eigen::Matrix<double, 6, 1> c = M.fullPivLu().solve(rhs);
  QuinticCoefficients out;
  for (int i = 0; i < 6; ++i) out.s[i] = c[i];
  return out;
}

struct TrajectorySample {
  double t = 0;
  double x = 0, y = 0;
  double vx = 0, vy = 0;
  double ax = 0, ay = 0;
};

struct TrajectoryPlan {
  QuinticCoefficients cx, cy;
  std::vector<double> times;
  std::vector<TrajectorySample> samples;
  // Constant foot orientation psi carried along when a caller needs the
  // analytical solver; numerical solvers ignore it.
  std::optional<double> orientation;

  std::size_t size() const { return samples.size(); }
};

inline TrajectoryPlan generate_plan(const BoundaryConditions& bc,
                                    std::size_t n_samples) {
  if (n_samples < 2)
    throw std::invalid_argument("plan needs at least 2 samples");
  TrajectoryPlan plan;
  plan.cx = solve_quintic(bc.t0, bc.tf, bc.x);
  plan.cy = solve_quintic(bc.t0, bc.tf, bc.y);
  plan.times.reserve(n_samples);
  plan.samples.reserve(n_samples);
  double dt = (bc.tf - bc.t0) / static_cast<double>(n_samples - 1);
  for (std::size_t i = 0; i < n_samples; ++i) {
    double t = i + 1 == n_samples ? bc.tf : bc.t0 + static_cast<double>(i) * dt;
    auto kx = plan.cx.at(t);
    auto ky = plan.cy.at(t);
    plan.times.push_back(t);
    plan.samples.push_back({t, kx.pos, ky.pos, kx.vel, ky.vel, kx.acc, ky.acc});
  }
  return plan;
}

}  // namespace legik
