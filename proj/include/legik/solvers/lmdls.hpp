#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "legik/solvers/common.hpp"

namespace legik {

// Per-joint damping of Eq. 27: lambda_i = a * (2 (theta_i - c_i) / range_i)^b,
// clamped below at lambda_min.
inline Eigen::Vector3d lmdls_lambdas(const KinematicModel& m,
                                     const JointVector& q,
                                     const DampingParams& dp) {
  Eigen::Vector3d lam;
  for (int i = 0; i < 3; ++i) {
    double c = damping_center(m, i + 1, dp.center_mode);
    double s = 2.0 * (q[i] - c) / m.joint_limits[i].width();
    // Odd or fractional b can drive Eq. 27 negative or undefined below the
    // center; the lower clamp restores lambda > 0 either way.
    double v = dp.a * std::pow(s, dp.b);
    lam[i] = std::isfinite(v) ? std::max(v, dp.lambda_min) : dp.lambda_min;
  }
  return lam;
}

// One damped least-squares step. The literal Eq. 23 shape is dimensionally
// inconsistent for a 2x3 Jacobian; the joint-space form (J^T J + D)^-1 J^T e
// is used for genuinely per-joint damping, and the algebraically identical
// task-space form J^T (J J^T + lambda I2)^-1 e when the damping is isotropic
// (the 2x2 solve stays well conditioned as lambda -> 0, which the
// MPPI-degeneracy contract requires).
inline Eigen::Vector3d lmdls_step(const KinematicModel& m, const JointVector& q,
                                  const Eigen::Vector2d& error,
                                  const Eigen::Vector3d& lambdas) {
  Jacobian2x3 J = jacobian(m, q);
  double lo = lambdas.minCoeff(), hi = lambdas.maxCoeff();
  if (hi - lo <= 1e-14 * std::max(1.0, hi)) {
    Eigen::Matrix2d A = J * J.transpose() + lo * Eigen::Matrix2d::Identity();
    return J.transpose() * A.ldlt().solve(error);
  }
  Eigen::Matrix3d A = J.transpose() * J;
  A.diagonal() += lambdas;
  return A.ldlt().solve(J.transpose() * error);
}

// LMDLS: damped Newton iteration with comfort-zone-driven lambdas and a
// post-hoc clamp of each target's solution to the joint range.
inline SolveResult lmdls_solve(const SolveRequest& req) {
  req.validate();
  const KinematicModel m = req.effective_model();
  const auto& opt = req.options;
  detail::WallTimer timer;
  SolveResult res;
  JointVector q = req.initial_q;
  for (const auto& target : req.targets) {
    Eigen::Vector2d t(target.x, target.y);
    int it = 0;
    while (true) {
      auto pose = forward_kinematics(m, q);
      Eigen::Vector2d e = t - Eigen::Vector2d(pose.x, pose.y);
      if (e.norm() < opt.position_tolerance || it >= opt.max_iterations) break;
      q = JointVector::from(q.vec() +
                            lmdls_step(m, q, e, lmdls_lambdas(m, q, opt.damping)));
      ++it;
    }
    for (int i = 0; i < 3; ++i)
      q[i] = std::clamp(q[i], m.joint_limits[i].lo, m.joint_limits[i].hi);
    auto pose = forward_kinematics(m, q);
    bool converged = std::hypot(pose.x - target.x, pose.y - target.y) <
                     opt.position_tolerance;
    detail::record(res, m, q, target, it, converged);
  }
  res.elapsed_s = timer.seconds();
  return res;
}

}  // namespace legik
