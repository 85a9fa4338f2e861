#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "legik/model.hpp"
#include "legik/rng.hpp"

namespace legik {

using Jacobian2x3 = Eigen::Matrix<double, 2, 3>;

// Planar FK of the hip-knee-ankle chain. The modified-DH sign convention
// (Table-1 style) makes theta2 enter negated:
//   x = L3 cos(t1 - t2 + t3) + L2 cos(t1 - t2) + L1 cos(t1)
//   y = L3 sin(t1 - t2 + t3) + L2 sin(t1 - t2) + L1 sin(t1)
inline PlanarPose forward_kinematics(const KinematicModel& m,
                                     const JointVector& q) {
  double u = q.t1 - q.t2 + q.t3;
  double v = q.t1 - q.t2;
  PlanarPose p;
  p.x = m.L3 * std::cos(u) + m.L2 * std::cos(v) + m.L1 * std::cos(q.t1);
  p.y = m.L3 * std::sin(u) + m.L2 * std::sin(v) + m.L1 * std::sin(q.t1);
  p.orientation = u;
  return p;
}

// Position of the joint pivots: hip (origin), knee, ankle.
inline Eigen::Vector2d knee_position(const KinematicModel& m,
                                     const JointVector& q) {
  return {m.L1 * std::cos(q.t1), m.L1 * std::sin(q.t1)};
}

inline Eigen::Vector2d ankle_position(const KinematicModel& m,
                                      const JointVector& q) {
  double v = q.t1 - q.t2;
  return knee_position(m, q) + Eigen::Vector2d{m.L2 * std::cos(v), m.L2 * std::sin(v)};
}

// Analytic partial derivatives of the FK position; column 2 carries the sign
// flip induced by the -theta2 convention.
inline Jacobian2x3 jacobian(const KinematicModel& m, const JointVector& q) {
  double u = q.t1 - q.t2 + q.t3;
  double v = q.t1 - q.t2;
  double su = std::sin(u), cu = std::cos(u);
  double sv = std::sin(v), cv = std::cos(v);
  double s1 = std::sin(q.t1), c1 = std::cos(q.t1);
  Jacobian2x3 J;
  J(0, 0) = -m.L3 * su - m.L2 * sv - m.L1 * s1;
  J(0, 1) = m.L3 * su + m.L2 * sv;
  J(0, 2) = -m.L3 * su;
  J(1, 0) = m.L3 * cu + m.L2 * cv + m.L1 * c1;
  J(1, 1) = -m.L3 * cu - m.L2 * cv;
  J(1, 2) = m.L3 * cu;
  return J;
}

struct WorkspaceSample {
  JointVector q;
  PlanarPose pose;
};

// Monte-Carlo workspace: q_i = q_min + rho * (q_max - q_min), rho ~ U[0,1)
// per joint, drawn joint-major from one seeded stream.
inline std::vector<WorkspaceSample> sample_workspace(const KinematicModel& m,
                                                     std::size_t n,
                                                     std::uint64_t seed) {
  Rng rng(seed);
  std::vector<WorkspaceSample> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    JointVector q;
    for (int i = 0; i < 3; ++i)
      q[i] = m.joint_limits[i].lo + rng.uniform() * m.joint_limits[i].width();
    out.push_back({q, forward_kinematics(m, q)});
  }
  return out;
}

// Comfort-zone center exactly as Eq. 3 is printed:
// (q_comf_max - q_comf_min)/2 + q_comf_h. Note this is the zone half-width
// shifted by the home position, which can fall outside the zone itself; see
// ComfortCenterMode for the variant solvers actually use. `joint` is 1-based.
inline double comfort_center(const KinematicModel& m, int joint) {
  const auto& z = m.comfort_zones[joint - 1];
  return 0.5 * (z.hi - z.lo) + m.home_position[joint - 1];
}

enum class ComfortCenterMode { paper_eq3, midpoint };

// Center used for the LMDLS damping: Eq. 3 verbatim, or the conventional
// zone midpoint (default elsewhere in this library).
inline double damping_center(const KinematicModel& m, int joint,
                             ComfortCenterMode mode) {
  if (mode == ComfortCenterMode::paper_eq3) return comfort_center(m, joint);
  return m.comfort_zones[joint - 1].mid();
}

}  // namespace legik
