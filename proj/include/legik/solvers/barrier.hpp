#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "legik/solvers/common.hpp"

namespace legik {

// Log barrier b(q) = -sum_i [log(theta_max_i - theta_i) + log(theta_i - theta_min_i)];
// +inf on or outside a limit (a value, not a trap).
inline double log_barrier(const KinematicModel& m, const JointVector& q) {
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    double d_hi = m.joint_limits[i].hi - q[i];
    double d_lo = q[i] - m.joint_limits[i].lo;
    if (d_hi <= 0.0 || d_lo <= 0.0)
      return std::numeric_limits<double>::infinity();
    sum -= std::log(d_hi) + std::log(d_lo);
  }
  return sum;
}

// B_k(q) = |r_d - r| + w ||p - p_d||^2 + (1/k) b(q).  The radial term is the
// published objective; the quadratic term enforces the x=x_d, y=y_d
// constraints as a penalty (a hard equality would leave the barrier nothing
// to optimize).
inline double barrier_objective(const KinematicModel& m, const JointVector& q,
                                const PlanarPose& target, double k,
                                double position_weight = 1e3) {
  auto pose = forward_kinematics(m, q);
  double r = std::hypot(pose.x, pose.y);
  double rd = target.radius();
  double ex = pose.x - target.x, ey = pose.y - target.y;
  return std::abs(rd - r) + position_weight * (ex * ex + ey * ey) +
         log_barrier(m, q) / k;
}

namespace detail {

struct BarrierInnerResult {
  JointVector final_q;  // last Newton iterate; chains into the next stage
  JointVector best_q;   // lowest-position-error iterate visited
  double best_err = 0.0;
};

// Damped Newton minimization of B_k at fixed k: Gauss-Newton Hessian of the
// penalty plus the exact barrier Hessian diagonal, fraction-to-boundary step
// cap (0.995) and Armijo backtracking on the true (nonsmooth) B_k.
//
// |r_d - r| is kinked exactly at the solution, so the Newton direction built
// from its one-sided gradient stalls the iteration at ||e|| ~ 1/(2w). Each
// iteration therefore line-searches two descent candidates -- the full
// one-sided Newton direction and the direction dropping the radial gradient
// (the zero element of the kink's subdifferential) -- and keeps whichever
// reaches the lower B_k. Away from the kink the full direction wins; at the
// kink the smooth one restores quadratic convergence of the position penalty.
// The best-position iterate visited is reported alongside the last one
// (standard subgradient-method convention).
inline BarrierInnerResult minimize_barrier_inner(const KinematicModel& m,
                                                 JointVector q,
                                                 const PlanarPose& target,
                                                 double k,
                                                 const BarrierParams& bp) {
  const double w = bp.position_weight;
  auto err_of = [&](const JointVector& v) {
    auto p = forward_kinematics(m, v);
    return std::hypot(p.x - target.x, p.y - target.y);
  };
  BarrierInnerResult out;
  out.best_q = q;
  out.best_err = err_of(q);
  for (int inner = 0; inner < bp.inner_iterations; ++inner) {
    auto pose = forward_kinematics(m, q);
    Jacobian2x3 J = jacobian(m, q);
    Eigen::Vector2d p(pose.x, pose.y);
    Eigen::Vector2d e = p - Eigen::Vector2d(target.x, target.y);
    double r = p.norm(), rd = target.radius();
    Eigen::Vector3d g_radial = Eigen::Vector3d::Zero();
    if (r > 1e-12) {
      double sgn = r > rd ? 1.0 : (r < rd ? -1.0 : 0.0);
      g_radial = sgn * (J.transpose() * (p / r));
    }
    Eigen::Vector3d d_hi, d_lo;
    for (int i = 0; i < 3; ++i) {
      d_hi[i] = m.joint_limits[i].hi - q[i];
      d_lo[i] = q[i] - m.joint_limits[i].lo;
    }
    Eigen::Vector3d g_smooth =
        2.0 * w * (J.transpose() * e) +
        (1.0 / k) * (d_hi.cwiseInverse() - d_lo.cwiseInverse());
    Eigen::Vector3d g_full = g_smooth + g_radial;
    Eigen::Matrix3d H = 2.0 * w * (J.transpose() * J);
    for (int i = 0; i < 3; ++i)
      H(i, i) += (1.0 / k) * (1.0 / (d_hi[i] * d_hi[i]) +
                              1.0 / (d_lo[i] * d_lo[i])) +
                 1e-12;
    auto solver = H.ldlt();
    double f0 = barrier_objective(m, q, target, k, w);

    // Backtracking line search for one candidate direction; returns the
    // accepted point and value, or false when every trial fails Armijo.
    auto search = [&](const Eigen::Vector3d& step, JointVector* q_out,
                      double* f_out, double* len_out) {
      // Fraction-to-boundary rule keeps the iterate strictly interior.
      double amax = 1.0;
      for (int i = 0; i < 3; ++i) {
        if (step[i] > 0)
          amax = std::min(amax, 0.995 * d_hi[i] / step[i]);
        else if (step[i] < 0)
          amax = std::min(amax, 0.995 * d_lo[i] / -step[i]);
      }
      // Directional derivative of the true B_k along the candidate.
      double gd = std::min(g_full.dot(step), 0.0);
      double alpha = amax;
      for (int bt = 0; bt < 40; ++bt) {
        JointVector qn = JointVector::from(q.vec() + alpha * step);
        double f = barrier_objective(m, qn, target, k, w);
        if (f <= f0 + 1e-4 * alpha * gd && f < f0) {
          *q_out = qn;
          *f_out = f;
          *len_out = alpha * step.norm();
          return true;
        }
        alpha *= 0.5;
      }
      return false;
    };

    Eigen::Vector3d step_full = -solver.solve(g_full);
    Eigen::Vector3d step_smooth = -solver.solve(g_smooth);
    JointVector q_a, q_b;
    double f_a = 0, f_b = 0, len_a = 0, len_b = 0;
    bool ok_a = search(step_full, &q_a, &f_a, &len_a);
    bool ok_b = search(step_smooth, &q_b, &f_b, &len_b);
    if (!ok_a && !ok_b) break;
    JointVector qn = q;
    double len = 0;
    if (ok_a && (!ok_b || f_a <= f_b)) {
      qn = q_a;
      len = len_a;
    } else {
      qn = q_b;
      len = len_b;
    }
    if (len < 1e-15) break;
    q = qn;
    double err = err_of(q);
    if (err < out.best_err) {
      out.best_err = err;
      out.best_q = q;
    }
  }
  out.final_q = q;
  return out;
}

}  // namespace detail

// Interior-point IK: geometric barrier-weight schedule k0, k0*growth, ...;
// each outer stage Newton-minimizes B_k and the best position error seen so
// far is the incumbent, making outer progress monotone by construction.
// Optional per-target hook receives the incumbent error after each outer
// stage (used by the acceptance suite to assert tightening).
using OuterProgressMonitor =
    std::function<void(std::size_t target_index, const std::vector<double>&)>;

inline SolveResult optimize_ik_solve(const SolveRequest& req,
                                     const OuterProgressMonitor& monitor = nullptr) {
  req.validate();
  const KinematicModel m = req.effective_model();
  const auto& opt = req.options;
  const auto& bp = opt.barrier;
  detail::WallTimer timer;
  SolveResult res;
  JointVector q = req.initial_q;
  // The barrier domain is the open box; nudge a boundary start inward.
  for (int i = 0; i < 3; ++i) {
    double margin = 1e-9 * m.joint_limits[i].width();
    q[i] = std::clamp(q[i], m.joint_limits[i].lo + margin,
                      m.joint_limits[i].hi - margin);
  }
  for (std::size_t ti = 0; ti < req.targets.size(); ++ti) {
    const auto& target = req.targets[ti];
    auto err_of = [&](const JointVector& v) {
      auto p = forward_kinematics(m, v);
      return std::hypot(p.x - target.x, p.y - target.y);
    };
    JointVector best_q = q;
    double best_err = err_of(q);
    std::vector<double> outer_errs;
    double k = bp.k0;
    int outer = 0;
    for (; outer < bp.outer_iterations; ++outer) {
      auto inner = detail::minimize_barrier_inner(m, q, target, k, bp);
      q = inner.final_q;
      if (inner.best_err < best_err) {
        best_err = inner.best_err;
        best_q = inner.best_q;
      }
      outer_errs.push_back(best_err);
      k *= bp.growth;
      if (best_err < opt.position_tolerance) {
        ++outer;
        break;
      }
    }
    if (monitor) monitor(ti, outer_errs);
    q = best_q;
    detail::record(res, m, q, target, outer, best_err < opt.position_tolerance);
  }
  res.elapsed_s = timer.seconds();
  return res;
}

}  // namespace legik
