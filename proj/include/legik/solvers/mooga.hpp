#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

#include "legik/rng.hpp"
#include "legik/solvers/common.hpp"

namespace legik {

// Receives each target's best-fitness-per-generation sequence; elitism makes
// it non-increasing, which the acceptance suite asserts.
using GaGenerationMonitor =
    std::function<void(std::size_t target_index, const std::vector<double>&)>;

// Real-coded GA over joint vectors: tournament selection, BLX-0.5 blend
// crossover, Gaussian mutation, elitism. Fitness is the end-effector position
// error, infinite on or outside the joint limits, so survivors are always
// strictly interior. The first target draws its population across the full
// range (Eq. 2 sampling); warm-started targets draw from a window around the
// previous solution (with that solution injected), since a full-range restart
// regularly hops to a distant point of the solution fiber and breaks
// inter-sample continuity.
inline SolveResult mooga_solve(const SolveRequest& req,
                               const GaGenerationMonitor& monitor = nullptr) {
  req.validate();
  const KinematicModel m = req.effective_model();
  const auto& opt = req.options;
  const auto& ga = opt.ga;
  detail::WallTimer timer;
  Rng rng(opt.seed);
  SolveResult res;

  // Mutation/crossover clamp to a strict interior box so fitness stays finite.
  Eigen::Vector3d lo, hi;
  for (int i = 0; i < 3; ++i) {
    double margin = 1e-9 * m.joint_limits[i].width();
    lo[i] = m.joint_limits[i].lo + margin;
    hi[i] = m.joint_limits[i].hi - margin;
  }

  bool warm = false;
  Eigen::Vector3d prev = req.initial_q.vec();
  const int pop = ga.population;
  std::vector<Eigen::Vector3d> P(pop), next;
  std::vector<double> F(pop);

  for (std::size_t ti = 0; ti < req.targets.size(); ++ti) {
    const auto& target = req.targets[ti];
    Eigen::Vector2d t(target.x, target.y);
    auto fitness = [&](const Eigen::Vector3d& v) {
      JointVector q = JointVector::from(v);
      if (!q.strictly_inside(m)) return std::numeric_limits<double>::infinity();
      auto p = forward_kinematics(m, q);
      return std::hypot(p.x - target.x, p.y - target.y);
    };

    Eigen::Vector3d init_lo = lo, init_hi = hi;
    if (warm) {
      for (int i = 0; i < 3; ++i) {
        init_lo[i] = std::max(lo[i], prev[i] - ga.warm_window);
        init_hi[i] = std::min(hi[i], prev[i] + ga.warm_window);
      }
    }
    for (int i = 0; i < pop; ++i)
      for (int j = 0; j < 3; ++j)
        P[i][j] = init_lo[j] + rng.uniform() * (init_hi[j] - init_lo[j]);
    if (warm) P[0] = prev;
    for (int i = 0; i < pop; ++i) F[i] = fitness(P[i]);

    auto tournament = [&]() -> const Eigen::Vector3d& {
      int best = static_cast<int>(rng.index(pop));
      for (int k = 1; k < ga.tournament; ++k) {
        int c = static_cast<int>(rng.index(pop));
        if (F[c] < F[best]) best = c;
      }
      return P[best];
    };

    std::vector<double> best_hist;
    int gens_run = 0;
    for (int gen = 0; gen < ga.generations; ++gen) {
      // Elites: indices of the `elite` smallest fitnesses.
      std::vector<int> order(pop);
      for (int i = 0; i < pop; ++i) order[i] = i;
      std::partial_sort(order.begin(), order.begin() + ga.elite, order.end(),
                        [&](int a, int b) { return F[a] < F[b]; });
      next.clear();
      for (int e = 0; e < ga.elite; ++e) next.push_back(P[order[e]]);
      while (static_cast<int>(next.size()) < pop) {
        Eigen::Vector3d p1 = tournament();
        Eigen::Vector3d p2 = tournament();
        Eigen::Vector3d c1, c2;
        if (rng.uniform() < ga.crossover_rate) {
          // BLX-0.5: children uniform on the parent interval extended by
          // half its width on each side.
          for (int j = 0; j < 3; ++j) {
            double g_lo = std::min(p1[j], p2[j]);
            double g_hi = std::max(p1[j], p2[j]);
            double d = g_hi - g_lo;
            c1[j] = g_lo - 0.5 * d + rng.uniform() * 2.0 * d;
            c2[j] = g_lo - 0.5 * d + rng.uniform() * 2.0 * d;
          }
        } else {
          c1 = p1;
          c2 = p2;
        }
        for (Eigen::Vector3d* c : {&c1, &c2}) {
          for (int j = 0; j < 3; ++j) {
            if (rng.uniform() < ga.mutation_rate)
              (*c)[j] += ga.mutation_sigma * rng.gaussian();
            (*c)[j] = std::clamp((*c)[j], lo[j], hi[j]);
          }
          if (static_cast<int>(next.size()) < pop) next.push_back(*c);
        }
      }
      P.swap(next);
      for (int i = 0; i < pop; ++i) F[i] = fitness(P[i]);
      best_hist.push_back(*std::min_element(F.begin(), F.end()));
      ++gens_run;
      if (best_hist.back() < opt.position_tolerance) break;
    }
    if (monitor) monitor(ti, best_hist);

    int bi = 0;
    for (int i = 1; i < pop; ++i)
      if (F[i] < F[bi]) bi = i;
    prev = P[bi];
    warm = true;
    detail::record(res, m, JointVector::from(prev), target, gens_run,
                   F[bi] < opt.position_tolerance);
  }
  res.elapsed_s = timer.seconds();
  return res;
}

}  // namespace legik
