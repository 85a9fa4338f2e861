#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "legik/kinematics.hpp"
#include "legik/model.hpp"

namespace legik {

struct DampingParams {
  double a = 0.1;           // Eq. 27 gain
  double b = 2.0;           // Eq. 27 exponent; even keeps lambda >= 0
  double lambda_min = 1e-9; // keeps the damped system positive definite
  ComfortCenterMode center_mode = ComfortCenterMode::midpoint;
};

struct BarrierParams {
  double k0 = 1.0;
  double growth = 10.0;
  int outer_iterations = 8;
  int inner_iterations = 40;
  double position_weight = 1e3;  // quadratic penalty enforcing x=xd, y=yd
};

struct GaParams {
  int population = 100;
  int generations = 150;
  double crossover_rate = 0.8;
  double mutation_rate = 0.1;
  double mutation_sigma = 2.0 * kDegToRad;
  int elite = 2;
  int tournament = 3;
  // Warm-started targets draw their population from
  // [prev - warm_window, prev + warm_window] ^ limits; see ccd/mooga notes.
  double warm_window = 0.15;
};

struct SolverOptions {
  int max_iterations = 200;
  double position_tolerance = 1e-6;  // meters
  DampingParams damping;
  BarrierParams barrier;
  GaParams ga;
  std::uint64_t seed = 42;

  void validate() const {
    if (!(position_tolerance > 0)) throw std::invalid_argument("tolerance <= 0");
    if (max_iterations <= 0) throw std::invalid_argument("max_iterations <= 0");
    if (!(damping.a > 0)) throw std::invalid_argument("damping a <= 0");
    for (double r : {ga.crossover_rate, ga.mutation_rate})
      if (r < 0 || r > 1) throw std::invalid_argument("GA rate outside [0,1]");
  }
};

struct SolveRequest {
  KinematicModel model;
  std::vector<PlanarPose> targets;
  JointVector initial_q;
  std::optional<std::array<JointRange, 3>> limits_override;
  SolverOptions options;

  KinematicModel effective_model() const {
    KinematicModel m = model;
    if (limits_override) m.joint_limits = *limits_override;
    return m;
  }

  void validate() const {
    if (targets.empty()) throw std::invalid_argument("no targets");
    if (!initial_q.finite()) throw std::invalid_argument("initial_q not finite");
    options.validate();
  }
};

struct SolveResult {
  std::vector<JointVector> joint_trajectory;
  std::vector<double> position_errors;  // recomputed via FK, never self-reported
  std::vector<int> iterations;
  std::vector<char> converged;
  double elapsed_s = 0.0;

  double max_error() const {
    double e = 0;
    for (double v : position_errors) e = std::max(e, v);
    return e;
  }
};

namespace detail {

class WallTimer {
 public:
  WallTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Uniform contract: position errors are recomputed from FK here, so a solver
// cannot misreport its own accuracy.
inline void record(SolveResult& res, const KinematicModel& m,
                   const JointVector& q, const PlanarPose& target, int iters,
                   bool converged) {
  auto p = forward_kinematics(m, q);
  double err = std::hypot(p.x - target.x, p.y - target.y);
  res.joint_trajectory.push_back(q);
  res.position_errors.push_back(err);
  res.iterations.push_back(iters);
  res.converged.push_back(converged ? 1 : 0);
}

}  // namespace detail
}  // namespace legik
