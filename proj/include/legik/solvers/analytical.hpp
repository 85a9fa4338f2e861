#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "legik/kinematics.hpp"
#include "legik/model.hpp"

namespace legik {

enum class KneeBranch { positive, negative };

struct OutOfReachError : std::runtime_error {
  OutOfReachError(double d, double lo, double hi)
      : std::runtime_error("ankle point out of reach: |D| = " +
                           std::to_string(d) + ", annulus [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        distance(d), annulus_lo(lo), annulus_hi(hi) {}
  double distance, annulus_lo, annulus_hi;
};

// Closed-form IK. The target carries the FK orientation psi; the transverse
// foot angle is theta0 = pi/2 - psi, and Eq. 15 gives theta3 = pi/2 - t1 + t2 - theta0.
// Eq. 14 is used in the corrected form t1 = atan2(Dy,Dx) + atan2(L2 S2, L1 + L2 C2);
// the printed argument order/sign does not invert Eq. 1 (fails the FK round trip).
inline JointVector analytical_ik(const KinematicModel& m,
                                 const PlanarPose& target,
                                 KneeBranch branch = KneeBranch::positive) {
  if (!target.orientation)
    throw std::invalid_argument("analytical_ik requires target orientation");
  double psi = *target.orientation;
  double theta0 = kPi / 2.0 - psi;
  // Ankle point D = E - L3 (sin theta0, cos theta0) = E - L3 (cos psi, sin psi).
  double dx = target.x - m.L3 * std::sin(theta0);
  double dy = target.y - m.L3 * std::cos(theta0);
  double dd = dx * dx + dy * dy;
  double c2 = (dd - m.L1 * m.L1 - m.L2 * m.L2) / (2.0 * m.L1 * m.L2);
  if (std::abs(c2) > 1.0 + 1e-12) {
    double d = std::sqrt(dd);
    throw OutOfReachError(d, std::abs(m.L1 - m.L2), m.L1 + m.L2);
  }
  c2 = std::clamp(c2, -1.0, 1.0);
  double s2 = std::sqrt(1.0 - c2 * c2);
  if (branch == KneeBranch::negative) s2 = -s2;
  JointVector q;
  q.t2 = std::atan2(s2, c2);
  q.t1 = std::atan2(dy, dx) + std::atan2(m.L2 * s2, m.L1 + m.L2 * c2);
  q.t3 = kPi / 2.0 - q.t1 + q.t2 - theta0;
  return q;
}

}  // namespace legik
