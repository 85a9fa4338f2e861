#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <functional>

#include "legik/solvers/common.hpp"

namespace legik {

// Called after every single-joint update with the effector-target distance
// before and after; lets tests assert the per-update monotonicity property.
using CcdUpdateMonitor = std::function<void(int joint, double dist_before,
                                            double dist_after)>;

// Cyclic coordinate descent, distal (theta3) to proximal (theta1). Each joint
// rotates the effector about its pivot by the angle aligning the
// pivot->effector ray with pivot->target, translated into joint coordinates
// through the Table-1 sign convention (theta2 negated), then clamps to the
// joint range. Per-target warm start from the previous solution.
inline SolveResult ccd_solve(const SolveRequest& req,
                             const CcdUpdateMonitor& monitor = nullptr) {
  req.validate();
  const KinematicModel m = req.effective_model();
  const auto& opt = req.options;
  detail::WallTimer timer;
  SolveResult res;
  JointVector q = req.initial_q;
  // Joint rotation sign: d(effector angle about pivot_j)/d(theta_j).
  constexpr double joint_sign[3] = {+1.0, -1.0, +1.0};
  for (const auto& target : req.targets) {
    Eigen::Vector2d t(target.x, target.y);
    int sweeps = 0;
    auto err = [&] {
      auto p = forward_kinematics(m, q);
      return (Eigen::Vector2d(p.x, p.y) - t).norm();
    };
    while (err() > opt.position_tolerance && sweeps < opt.max_iterations) {
      for (int j = 2; j >= 0; --j) {
        Eigen::Vector2d pivot;
        if (j == 0)
          pivot.setZero();
        else if (j == 1)
          pivot = knee_position(m, q);
        else
          pivot = ankle_position(m, q);
        auto pose = forward_kinematics(m, q);
        Eigen::Vector2d eff(pose.x, pose.y);
        Eigen::Vector2d a = eff - pivot;
        Eigen::Vector2d b = t - pivot;
        if (a.norm() < 1e-15 || b.norm() < 1e-15) continue;
        double alpha = std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
        double d_before = (eff - t).norm();
        double updated = q[j] + joint_sign[j] * alpha;
        q[j] = std::clamp(updated, m.joint_limits[j].lo, m.joint_limits[j].hi);
        if (monitor) {
          auto p2 = forward_kinematics(m, q);
          monitor(j, d_before, (Eigen::Vector2d(p2.x, p2.y) - t).norm());
        }
      }
      ++sweeps;
    }
    detail::record(res, m, q, target, sweeps,
                   err() <= opt.position_tolerance);
  }
  res.elapsed_s = timer.seconds();
  return res;
}

}  // namespace legik
