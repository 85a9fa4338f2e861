#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace legik {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

struct JointRange {
  double lo = 0.0;  // radians
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

// Geometry, limits and mass model of the planar hip-knee-ankle chain.
// Immutable after construction; shared freely across solvers.
struct KinematicModel {
  double L1 = 0.50;  // thigh length, m
  double L2 = 0.45;  // shank length, m
  double L3 = 0.12;  // foot (ankle to toe) length, m
  double b = 0.10;   // hip z-offset, m; carried for completeness, unused in-plane

  std::array<JointRange, 3> joint_limits{
      JointRange{-20.0 * kDegToRad, 120.0 * kDegToRad},
      JointRange{0.0, 118.0 * kDegToRad},
      JointRange{50.0 * kDegToRad, 126.0 * kDegToRad}};

  // Default comfort zones: width 0.35 x range, centered at the range midpoint.
  std::array<JointRange, 3> comfort_zones = zones_from_rule(joint_limits);

  std::array<double, 3> home_position{0.0, 0.0, 0.0};

  // Body-mass fractions (thigh, shank, foot) and per-segment center-of-mass
  // locations as a fraction of segment length from the proximal joint.
  std::array<double, 3> mass_fractions{0.100, 0.0465, 0.0145};
  std::array<double, 3> com_fractions{0.433, 0.433, 0.50};

  static std::array<JointRange, 3> zones_from_rule(
      const std::array<JointRange, 3>& limits) {
    std::array<JointRange, 3> z;
    for (int i = 0; i < 3; ++i) {
      double half = 0.5 * 0.35 * limits[i].width();
      z[i] = {limits[i].mid() - half, limits[i].mid() + half};
    }
    return z;
  }

  double reach() const { return L1 + L2 + L3; }

  void validate() const {
    if (!(L1 > 0 && L2 > 0 && L3 > 0))
      throw std::invalid_argument("segment lengths must be positive");
    double total_mass = 0.0;
    for (int i = 0; i < 3; ++i) {
      const auto& r = joint_limits[i];
      const auto& z = comfort_zones[i];
      if (!(r.lo < r.hi))
        throw std::invalid_argument("joint limit " + std::to_string(i + 1) +
                                    " has min >= max");
      if (z.lo < r.lo - 1e-12 || z.hi > r.hi + 1e-12)
        throw std::invalid_argument("comfort zone " + std::to_string(i + 1) +
                                    " not contained in joint range");
      if (mass_fractions[i] < 0)
        throw std::invalid_argument("mass fractions must be nonnegative");
      total_mass += mass_fractions[i];
    }
    if (total_mass <= 0) throw std::invalid_argument("total mass is zero");
  }
};

// Generalized coordinate q = (theta1, theta2, theta3), radians.
struct JointVector {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;

  double operator[](int i) const { return i == 0 ? t1 : (i == 1 ? t2 : t3); }
  double& operator[](int i) { return i == 0 ? t1 : (i == 1 ? t2 : t3); }

  Eigen::Vector3d vec() const { return {t1, t2, t3}; }
  static JointVector from(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

  bool finite() const {
    return std::isfinite(t1) && std::isfinite(t2) && std::isfinite(t3);
  }

  bool in_range(const KinematicModel& m, double slack = 0.0) const {
    for (int i = 0; i < 3; ++i) {
      if ((*this)[i] < m.joint_limits[i].lo - slack ||
          (*this)[i] > m.joint_limits[i].hi + slack)
        return false;
    }
    return true;
  }

  bool strictly_inside(const KinematicModel& m) const {
    for (int i = 0; i < 3; ++i) {
      if (!((*this)[i] > m.joint_limits[i].lo &&
            (*this)[i] < m.joint_limits[i].hi))
        return false;
    }
    return true;
  }
};

// End-effector (big toe) pose in the hip frame R0. `orientation` stores the
// forward-kinematics orientation psi = theta1 - theta2 + theta3; the foot
// angle theta0 used by the analytical solver relates to it as
// theta0 = pi/2 - psi (Eq. 15 convention).
struct PlanarPose {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> orientation;

  Eigen::Vector2d pos() const { return {x, y}; }
  double radius() const { return std::hypot(x, y); }
};

// Wrap an angle difference onto (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

}  // namespace legik
