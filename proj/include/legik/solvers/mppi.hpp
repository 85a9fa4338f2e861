#pragma once

#include <Eigen/Dense>

#include "legik/solvers/common.hpp"

namespace legik {

// Newton-Raphson with the Moore-Penrose right pseudo-inverse
// J+ = J^T (J J^T)^{-1}. Joint limits deliberately NOT enforced: the method
// has no notion of angular constraints. Warm start across targets.
inline SolveResult mppi_solve(const SolveRequest& req) {
  req.validate();
  const KinematicModel m = req.effective_model();
  const auto& opt = req.options;
  detail::WallTimer timer;
  SolveResult res;
  JointVector q = req.initial_q;
  for (const auto& target : req.targets) {
    Eigen::Vector2d t(target.x, target.y);
    int it = 0;
    bool singular = false;
    while (true) {
      auto pose = forward_kinematics(m, q);
      Eigen::Vector2d e = t - Eigen::Vector2d(pose.x, pose.y);
      if (e.norm() < opt.position_tolerance || it >= opt.max_iterations) break;
      Jacobian2x3 J = jacobian(m, q);
      Eigen::Matrix2d JJt = J * J.transpose();
      if (std::abs(JJt.determinant()) < 1e-12) {
        singular = true;
        break;
      }
      Eigen::Vector3d dq = J.transpose() * JJt.ldlt().solve(e);
      q = JointVector::from(q.vec() + dq);
      ++it;
    }
    auto pose = forward_kinematics(m, q);
    bool converged =
        !singular && std::hypot(pose.x - target.x, pose.y - target.y) <
                         opt.position_tolerance;
    detail::record(res, m, q, target, it, converged);
  }
  res.elapsed_s = timer.seconds();
  return res;
}

// One raw Newton step, exposed for the LMDLS degeneracy property test.
inline Eigen::Vector3d mppi_step(const KinematicModel& m, const JointVector& q,
                                 const Eigen::Vector2d& error) {
  Jacobian2x3 J = jacobian(m, q);
  Eigen::Matrix2d JJt = J * J.transpose();
  return J.transpose() * JJt.ldlt().solve(error);
}

}  // namespace legik
