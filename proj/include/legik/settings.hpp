#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "legik/config.hpp"
#include "legik/kinematics.hpp"
#include "legik/metrics.hpp"
#include "legik/model.hpp"
#include "legik/neural.hpp"
#include "legik/solvers/common.hpp"
#include "legik/trajectory.hpp"

namespace legik {

// Config boundary: files carry degrees, meters, and seconds; everything here
// converts once and hands radians to the rest of the library.

struct DatasetOptions {
  std::size_t size = 127282;
  std::uint64_t seed = 7;
  DatasetFilter filter = DatasetFilter::knee_positive;
};

inline KinematicModel load_model(const ConfigFile& cfg) {
  KinematicModel m;
  m.L1 = cfg.get_double("model", "l1_m", m.L1);
  m.L2 = cfg.get_double("model", "l2_m", m.L2);
  m.L3 = cfg.get_double("model", "l3_m", m.L3);
  m.b = cfg.get_double("model", "b_m", m.b);
  for (int i = 0; i < 3; ++i) {
    std::string n = std::to_string(i + 1);
    auto& r = m.joint_limits[i];
    r.lo = cfg.get_double("model", "theta" + n + "_min_deg", r.lo * kRadToDeg) *
           kDegToRad;
    r.hi = cfg.get_double("model", "theta" + n + "_max_deg", r.hi * kRadToDeg) *
           kDegToRad;
  }
  // Comfort zones follow the configured limits unless given explicitly.
  m.comfort_zones = KinematicModel::zones_from_rule(m.joint_limits);
  for (int i = 0; i < 3; ++i) {
    std::string n = std::to_string(i + 1);
    auto& z = m.comfort_zones[i];
    z.lo = cfg.get_double("model", "comfort" + n + "_min_deg",
                          z.lo * kRadToDeg) * kDegToRad;
    z.hi = cfg.get_double("model", "comfort" + n + "_max_deg",
                          z.hi * kRadToDeg) * kDegToRad;
    m.home_position[i] = cfg.get_double("model", "home" + n + "_deg",
                                        m.home_position[i] * kRadToDeg) *
                         kDegToRad;
    m.mass_fractions[i] =
        cfg.get_double("model", "mass_fraction" + n, m.mass_fractions[i]);
    m.com_fractions[i] =
        cfg.get_double("model", "com_fraction" + n, m.com_fractions[i]);
  }
  m.validate();
  return m;
}

inline ComfortCenterMode parse_center_mode(const std::string& s) {
  if (s == "midpoint") return ComfortCenterMode::midpoint;
  if (s == "paper_eq3") return ComfortCenterMode::paper_eq3;
  throw std::runtime_error("comfort_center_mode must be midpoint or paper_eq3, got '" +
                           s + "'");
}

inline SolverOptions load_solver_options(const ConfigFile& cfg) {
  SolverOptions o;
  o.max_iterations = static_cast<int>(
      cfg.get_int("solver", "max_iterations", o.max_iterations));
  o.position_tolerance =
      cfg.get_double("solver", "position_tolerance_m", o.position_tolerance);
  o.seed = static_cast<std::uint64_t>(
      cfg.get_int("solver", "seed", static_cast<long long>(o.seed)));

  o.damping.a = cfg.get_double("damping", "a", o.damping.a);
  o.damping.b = cfg.get_double("damping", "b", o.damping.b);
  o.damping.lambda_min =
      cfg.get_double("damping", "lambda_min", o.damping.lambda_min);
  o.damping.center_mode = parse_center_mode(cfg.get_string(
      "damping", "comfort_center_mode",
      o.damping.center_mode == ComfortCenterMode::midpoint ? "midpoint"
                                                           : "paper_eq3"));

  o.barrier.k0 = cfg.get_double("barrier", "k0", o.barrier.k0);
  o.barrier.growth = cfg.get_double("barrier", "growth", o.barrier.growth);
  o.barrier.outer_iterations = static_cast<int>(
      cfg.get_int("barrier", "outer_iterations", o.barrier.outer_iterations));
  o.barrier.inner_iterations = static_cast<int>(
      cfg.get_int("barrier", "inner_iterations", o.barrier.inner_iterations));
  o.barrier.position_weight =
      cfg.get_double("barrier", "position_weight", o.barrier.position_weight);

  o.ga.population =
      static_cast<int>(cfg.get_int("ga", "population", o.ga.population));
  o.ga.generations =
      static_cast<int>(cfg.get_int("ga", "generations", o.ga.generations));
  o.ga.crossover_rate =
      cfg.get_double("ga", "crossover_rate", o.ga.crossover_rate);
  o.ga.mutation_rate = cfg.get_double("ga", "mutation_rate", o.ga.mutation_rate);
  o.ga.mutation_sigma = cfg.get_double("ga", "mutation_sigma_deg",
                                       o.ga.mutation_sigma * kRadToDeg) *
                        kDegToRad;
  o.ga.elite = static_cast<int>(cfg.get_int("ga", "elite", o.ga.elite));
  o.ga.tournament =
      static_cast<int>(cfg.get_int("ga", "tournament", o.ga.tournament));
  o.ga.warm_window = cfg.get_double("ga", "warm_window_deg",
                                    o.ga.warm_window * kRadToDeg) * kDegToRad;
  o.validate();
  return o;
}

inline TrainConfig load_train_config(const ConfigFile& cfg) {
  TrainConfig t;
  t.epochs = static_cast<int>(cfg.get_int("train", "epochs", t.epochs));
  t.learning_rate = cfg.get_double("train", "learning_rate", t.learning_rate);
  t.momentum = cfg.get_double("train", "momentum", t.momentum);
  t.batch_size =
      static_cast<int>(cfg.get_int("train", "batch_size", t.batch_size));
  t.patience = static_cast<int>(cfg.get_int("train", "patience", t.patience));
  t.seed = static_cast<std::uint64_t>(
      cfg.get_int("train", "seed", static_cast<long long>(t.seed)));
  t.validate();
  return t;
}

inline DatasetOptions load_dataset_options(const ConfigFile& cfg) {
  DatasetOptions d;
  long long n = cfg.get_int("dataset", "size", static_cast<long long>(d.size));
  if (n <= 0) throw std::runtime_error("dataset.size must be positive");
  d.size = static_cast<std::size_t>(n);
  d.seed = static_cast<std::uint64_t>(
      cfg.get_int("dataset", "seed", static_cast<long long>(d.seed)));
  std::string f = cfg.get_string("dataset", "filter", "knee_positive");
  if (f == "knee_positive")
    d.filter = DatasetFilter::knee_positive;
  else if (f == "none")
    d.filter = DatasetFilter::none;
  else
    throw std::runtime_error("dataset.filter must be none or knee_positive, got '" +
                             f + "'");
  return d;
}

inline ComfortWeights load_comfort_weights(const ConfigFile& cfg) {
  ComfortWeights w;
  w.xi = cfg.get_double("weights", "xi", w.xi);
  w.mu = cfg.get_double("weights", "mu", w.mu);
  w.beta = cfg.get_double("weights", "beta", w.beta);
  return w;
}

inline BoundaryConditions load_boundary(const ConfigFile& cfg) {
  BoundaryConditions bc = table3_boundary();
  bc.t0 = cfg.get_double("trajectory", "t0_s", bc.t0);
  bc.tf = cfg.get_double("trajectory", "tf_s", bc.tf);
  bc.x.p0 = cfg.get_double("trajectory", "x0_m", bc.x.p0);
  bc.x.v0 = cfg.get_double("trajectory", "vx0_mps", bc.x.v0);
  bc.x.a0 = cfg.get_double("trajectory", "ax0_mps2", bc.x.a0);
  bc.x.pf = cfg.get_double("trajectory", "xf_m", bc.x.pf);
  bc.x.vf = cfg.get_double("trajectory", "vxf_mps", bc.x.vf);
  bc.x.af = cfg.get_double("trajectory", "axf_mps2", bc.x.af);
  bc.y.p0 = cfg.get_double("trajectory", "y0_m", bc.y.p0);
  bc.y.v0 = cfg.get_double("trajectory", "vy0_mps", bc.y.v0);
  bc.y.a0 = cfg.get_double("trajectory", "ay0_mps2", bc.y.a0);
  bc.y.pf = cfg.get_double("trajectory", "yf_m", bc.y.pf);
  bc.y.vf = cfg.get_double("trajectory", "vyf_mps", bc.y.vf);
  bc.y.af = cfg.get_double("trajectory", "ayf_mps2", bc.y.af);
  return bc;
}

inline int load_plan_samples(const ConfigFile& cfg) {
  long long n = cfg.get_int("trajectory", "samples", 101);
  if (n < 2) throw std::runtime_error("trajectory.samples must be >= 2");
  return static_cast<int>(n);
}

}  // namespace legik
