#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "legik/csv.hpp"
#include "legik/kinematics.hpp"
#include "legik/model.hpp"
#include "legik/solvers/barrier.hpp"

namespace legik {

struct ComfortWeights {
  double xi = 1.0;    // jerk-energy weight
  double mu = 1.0;    // CoM-distance weight
  double beta = 1.0;  // barrier weight
};

struct MetricsReport {
  double rmse = 0.0;
  double jerk_energy = 0.0;       // time-mean of summed |d3 theta/dt3|
  double com_distance_mean = 0.0;
  double barrier_mean = 0.0;      // may be infinite
  double comfort_index = 0.0;     // may be infinite
};

inline double rmse(const std::vector<JointVector>& traj,
                   const std::vector<PlanarPose>& targets,
                   const KinematicModel& m) {
  if (traj.empty()) throw std::invalid_argument("rmse: empty trajectory");
  if (traj.size() != targets.size())
    throw std::invalid_argument("rmse: trajectory/target length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    auto p = forward_kinematics(m, traj[i]);
    double dx = p.x - targets[i].x, dy = p.y - targets[i].y;
    acc += dx * dx + dy * dy;
  }
  return std::sqrt(acc / static_cast<double>(traj.size()));
}

namespace detail {

inline void require_uniform_grid(const std::vector<double>& times) {
  if (times.size() < 2) throw std::invalid_argument("need >= 2 sample times");
  double h = times[1] - times[0];
  if (!(h > 0)) throw std::invalid_argument("sample times must increase");
  for (std::size_t i = 1; i + 1 < times.size(); ++i) {
    double hi = times[i + 1] - times[i];
    if (std::abs(hi - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw std::invalid_argument("jerk metrics require a uniform time grid");
  }
}

// Second-order third-derivative stencils: 5-point central in the interior,
// 5-point one-sided at the edges (4-point first-order fallback when the
// series has exactly 4 samples).
inline std::vector<double> third_derivative(const std::vector<double>& f,
                                            double h) {
  std::size_t n = f.size();
  std::vector<double> d(n);
  double h3 = h * h * h;
  if (n == 4) {
    double v = (f[3] - 3 * f[2] + 3 * f[1] - f[0]) / h3;
    for (auto& x : d) x = v;
    return d;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i < 2) {
      d[i] = (-2.5 * f[i] + 9 * f[i + 1] - 12 * f[i + 2] + 7 * f[i + 3] -
              1.5 * f[i + 4]) / h3;
    } else if (i + 2 >= n) {
      d[i] = (2.5 * f[i] - 9 * f[i - 1] + 12 * f[i - 2] - 7 * f[i - 3] +
              1.5 * f[i - 4]) / h3;
    } else {
      d[i] = (f[i + 2] - 2 * f[i + 1] + 2 * f[i - 1] - f[i - 2]) / (2 * h3);
    }
  }
  return d;
}

}  // namespace detail

// Per-sample summed absolute joint jerk, |d3 theta1| + |d3 theta2| + |d3 theta3|.
inline std::vector<double> joint_jerk_profile(
    const std::vector<JointVector>& traj, const std::vector<double>& times) {
  if (traj.size() != times.size())
    throw std::invalid_argument("trajectory/time length mismatch");
  if (traj.size() < 4)
    throw std::invalid_argument("jerk needs at least 4 samples");
  detail::require_uniform_grid(times);
  double h = times[1] - times[0];
  std::vector<double> sum(traj.size(), 0.0);
  for (int j = 0; j < 3; ++j) {
    std::vector<double> f(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) f[i] = traj[i][j];
    auto d = detail::third_derivative(f, h);
    for (std::size_t i = 0; i < traj.size(); ++i) sum[i] += std::abs(d[i]);
  }
  return sum;
}

inline double jerk_energy(const std::vector<JointVector>& traj,
                          const std::vector<double>& times) {
  auto prof = joint_jerk_profile(traj, times);
  double acc = 0.0;
  for (double v : prof) acc += v;
  return acc / static_cast<double>(prof.size());
}

// Eq.-06 style lower-limb CoM magnitude: weighted mean of the three segment
// CoM positions (proximal joint + com_fraction * segment vector) in R0.
inline double com_distance(const KinematicModel& m, const JointVector& q) {
  if (!q.finite()) throw std::invalid_argument("com_distance: q not finite");
  double u = q.t1 - q.t2 + q.t3;
  double v = q.t1 - q.t2;
  Eigen::Vector2d hip(0, 0);
  Eigen::Vector2d knee = hip + m.L1 * Eigen::Vector2d(std::cos(q.t1), std::sin(q.t1));
  Eigen::Vector2d ankle = knee + m.L2 * Eigen::Vector2d(std::cos(v), std::sin(v));
  Eigen::Vector2d toe = ankle + m.L3 * Eigen::Vector2d(std::cos(u), std::sin(u));
  Eigen::Vector2d coms[3] = {hip + m.com_fractions[0] * (knee - hip),
                             knee + m.com_fractions[1] * (ankle - knee),
                             ankle + m.com_fractions[2] * (toe - ankle)};
  Eigen::Vector2d acc(0, 0);
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    acc += m.mass_fractions[i] * coms[i];
    total += m.mass_fractions[i];
  }
  if (total <= 0) throw std::invalid_argument("com_distance: zero total mass");
  return (acc / total).norm();
}

// Barrier robustness term; infinite on/outside any limit (same definition the
// optimization solver uses).
inline double barrier_term(const KinematicModel& m, const JointVector& q) {
  return log_barrier(m, q);
}

// Comfort index I_c: time-mean of xi * sum|jerk| + mu * D_CoM + beta * barrier.
// A zero weight disables its term entirely (0 * inf counts as 0), so the
// index is infinite iff beta > 0 and some sample touches or exceeds a limit.
inline double comfort_index(const KinematicModel& m,
                            const std::vector<JointVector>& traj,
                            const std::vector<double>& times,
                            const ComfortWeights& w) {
  auto jerk = joint_jerk_profile(traj, times);
  double acc = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    double term = 0.0;
    if (w.xi != 0) term += w.xi * jerk[i];
    if (w.mu != 0) term += w.mu * com_distance(m, traj[i]);
    if (w.beta != 0) term += w.beta * barrier_term(m, traj[i]);
    acc += term;
  }
  return acc / static_cast<double>(traj.size());
}

inline MetricsReport compute_metrics(const KinematicModel& m,
                                     const std::vector<JointVector>& traj,
                                     const std::vector<PlanarPose>& targets,
                                     const std::vector<double>& times,
                                     const ComfortWeights& w) {
  MetricsReport r;
  r.rmse = rmse(traj, targets, m);
  r.jerk_energy = jerk_energy(traj, times);
  double com_acc = 0.0, bar_acc = 0.0;
  for (const auto& q : traj) {
    com_acc += com_distance(m, q);
    bar_acc += barrier_term(m, q);
  }
  r.com_distance_mean = com_acc / static_cast<double>(traj.size());
  r.barrier_mean = bar_acc / static_cast<double>(traj.size());
  r.comfort_index = comfort_index(m, traj, times, w);
  return r;
}

// One JSON object per solver run; infinities encoded as the string "inf".
inline void write_metrics_json(const std::string& path, const MetricsReport& r,
                               const ComfortWeights& w) {
  nlohmann::json j;
  auto enc = [](double v) -> nlohmann::json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  j["rmse_m"] = enc(r.rmse);
  j["jerk_energy"] = enc(r.jerk_energy);
  j["com_distance_mean_m"] = enc(r.com_distance_mean);
  j["barrier_mean"] = enc(r.barrier_mean);
  j["comfort_index"] = enc(r.comfort_index);
  j["weights"] = {{"xi", w.xi}, {"mu", w.mu}, {"beta", w.beta}};
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write metrics json: " + path);
  f << j.dump(2) << "\n";
}

}  // namespace legik
