#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "legik/csv.hpp"
#include "legik/metrics.hpp"
#include "legik/neural.hpp"
#include "legik/settings.hpp"
#include "legik/solvers/barrier.hpp"
#include "legik/solvers/ccd.hpp"
#include "legik/solvers/lmdls.hpp"
#include "legik/solvers/mooga.hpp"
#include "legik/solvers/mppi.hpp"
#include "legik/svgplot.hpp"
#include "legik/trajectory.hpp"

namespace legik {

inline constexpr int kBenchMethodCount = 6;

// Table row order is fixed; every per-method array in this header is indexed
// by this list.
inline const std::array<std::string, kBenchMethodCount>& bench_method_names() {
  static const std::array<std::string, kBenchMethodCount> names{
      "ccd", "mppi", "lmdls", "opt", "mooga", "nn"};
  return names;
}

struct BenchConfig {
  KinematicModel model;
  BoundaryConditions boundary = table3_boundary();
  int n_samples = 101;
  JointVector initial_q;  // defaults to joint-range midpoints
  std::array<SolverOptions, kBenchMethodCount> method_options;
  std::array<std::optional<std::array<JointRange, 3>>, kBenchMethodCount>
      limit_overrides;
  std::string nn_model_path;  // empty -> train on demand
  TrainConfig train;
  DatasetOptions dataset;
  ComfortWeights weights;
  std::string output_dir = "bench_out";
  int timing_repeats = 5;
  bool parallel = false;

  static BenchConfig defaults() {
    BenchConfig c;
    c.finalize_defaults();
    return c;
  }

  // Builds the run configuration: [bench] for plumbing, [solver]/[damping]/
  // [barrier]/[ga] shared across methods, and optional [method.<name>]
  // sections overriding iteration budget, tolerance, seed, or joint limits
  // for one method. LEGIK_OUTPUT_DIR overrides the configured output dir.
  static BenchConfig from_config(const ConfigFile& cfg) {
    BenchConfig c;
    c.model = load_model(cfg);
    c.boundary = load_boundary(cfg);
    c.n_samples = load_plan_samples(cfg);
    SolverOptions base = load_solver_options(cfg);
    c.method_options.fill(base);
    c.train = load_train_config(cfg);
    c.dataset = load_dataset_options(cfg);
    c.weights = load_comfort_weights(cfg);
    c.output_dir = cfg.get_string("bench", "output_dir", c.output_dir);
    c.timing_repeats = static_cast<int>(
        cfg.get_int("bench", "timing_repeats", c.timing_repeats));
    c.parallel = cfg.get_bool("bench", "parallel", c.parallel);
    c.nn_model_path = cfg.get_string("bench", "nn_model_path", "");
    c.finalize_defaults();
    for (int i = 0; i < 3; ++i) {
      std::string key = "initial" + std::to_string(i + 1) + "_deg";
      c.initial_q[i] = cfg.get_double("bench", key, c.initial_q[i] * kRadToDeg) *
                       kDegToRad;
    }
    for (int mi = 0; mi < kBenchMethodCount; ++mi) {
      std::string sec = "method." + bench_method_names()[mi];
      auto& o = c.method_options[mi];
      o.max_iterations = static_cast<int>(
          cfg.get_int(sec, "max_iterations", o.max_iterations));
      o.position_tolerance =
          cfg.get_double(sec, "position_tolerance_m", o.position_tolerance);
      o.seed = static_cast<std::uint64_t>(
          cfg.get_int(sec, "seed", static_cast<long long>(o.seed)));
      bool any_limit = false;
      auto limits = c.model.joint_limits;
      for (int j = 0; j < 3; ++j) {
        std::string n = std::to_string(j + 1);
        if (cfg.has(sec, "theta" + n + "_min_deg") ||
            cfg.has(sec, "theta" + n + "_max_deg"))
          any_limit = true;
        limits[j].lo = cfg.get_double(sec, "theta" + n + "_min_deg",
                                      limits[j].lo * kRadToDeg) * kDegToRad;
        limits[j].hi = cfg.get_double(sec, "theta" + n + "_max_deg",
                                      limits[j].hi * kRadToDeg) * kDegToRad;
      }
      if (any_limit) c.limit_overrides[mi] = limits;
    }
    if (const char* env = std::getenv("LEGIK_OUTPUT_DIR"))
      if (*env) c.output_dir = env;
    return c;
  }

  void finalize_defaults() {
    if (initial_q.t1 == 0 && initial_q.t2 == 0 && initial_q.t3 == 0)
      for (int i = 0; i < 3; ++i) initial_q[i] = model.joint_limits[i].mid();
    if (timing_repeats < 1) timing_repeats = 1;
  }
};

struct ComparisonRow {
  std::string method;
  double time_s = 0.0;
  double rmse = 0.0;
  double comfort_index = 0.0;
  bool failed = false;
  std::string error;  // diagnostic for failed rows
};

namespace detail {

inline std::string encode_cell(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return fmt_double(v);
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline SolveResult dispatch_solve(int method_index, const SolveRequest& req,
                                  const Mlp* mlp) {
  switch (method_index) {
    case 0: return ccd_solve(req);
    case 1: return mppi_solve(req);
    case 2: return lmdls_solve(req);
    case 3: return optimize_ik_solve(req);
    case 4: return mooga_solve(req);
    case 5: return nn_solve(req, *mlp);
    default: throw std::logic_error("bad method index");
  }
}

struct MethodArtifacts {
  ComparisonRow row;
  MetricsReport metrics{};
  bool has_metrics = false;
};

// Runs one method end to end: timing repetitions (sequential, one thread),
// artifact CSVs, metrics JSON. All files go under out_dir/<method>/.
inline MethodArtifacts run_method(const BenchConfig& cfg, int mi,
                                  const TrajectoryPlan& plan,
                                  const std::vector<PlanarPose>& targets,
                                  const Mlp* mlp) {
  namespace fs = std::filesystem;
  const std::string& name = bench_method_names()[mi];
  MethodArtifacts out;
  out.row.method = name;
  try {
    SolveRequest req;
    req.model = cfg.model;
    req.targets = targets;
    req.initial_q = cfg.initial_q;
    req.limits_override = cfg.limit_overrides[mi];
    req.options = cfg.method_options[mi];
    req.validate();

    std::vector<double> times;
    SolveResult res;
    for (int r = 0; r < cfg.timing_repeats; ++r) {
      SolveResult cur = dispatch_solve(mi, req, mlp);
      times.push_back(cur.elapsed_s);
      if (r == 0) res = std::move(cur);
    }
    out.row.time_s = median(times);

    fs::path dir = fs::path(cfg.output_dir) / name;
    fs::create_directories(dir);
    {
      CsvWriter w((dir / "joints.csv").string(),
                  "t_s,theta1_deg,theta2_deg,theta3_deg");
      for (std::size_t i = 0; i < plan.times.size(); ++i) {
        const auto& q = res.joint_trajectory[i];
        w.row(std::vector<double>{plan.times[i], q.t1 * kRadToDeg,
                                  q.t2 * kRadToDeg, q.t3 * kRadToDeg});
      }
    }
    {
      CsvWriter w((dir / "error.csv").string(), "t_s,err_m,iters,converged");
      for (std::size_t i = 0; i < plan.times.size(); ++i)
        w.row(std::vector<std::string>{
            fmt_double(plan.times[i]), fmt_double(res.position_errors[i]),
            std::to_string(res.iterations[i]),
            res.converged[i] ? "1" : "0"});
    }
    KinematicModel eff = req.effective_model();
    out.metrics = compute_metrics(eff, res.joint_trajectory, targets,
                                  plan.times, cfg.weights);
    out.has_metrics = true;
    write_metrics_json((dir / "metrics.json").string(), out.metrics,
                       cfg.weights);
    out.row.rmse = out.metrics.rmse;
    out.row.comfort_index = out.metrics.comfort_index;
  } catch (const std::exception& e) {
    out.row.failed = true;
    out.row.error = e.what();
    out.row.time_s = std::numeric_limits<double>::quiet_NaN();
    out.row.rmse = std::numeric_limits<double>::quiet_NaN();
    out.row.comfort_index = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace detail

// Full comparison: plans the reference motion, solves it with every method in
// the fixed table order, and writes comparison.csv / comparison.txt plus
// per-method artifacts. A crashing method becomes a failed row and the bench
// keeps going. Deterministic per seeds except the wall-clock column.
inline std::vector<ComparisonRow> run_bench(const BenchConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);

  TrajectoryPlan plan = generate_plan(cfg.boundary, cfg.n_samples);
  std::vector<PlanarPose> targets;
  targets.reserve(plan.samples.size());
  for (const auto& s : plan.samples) targets.push_back({s.x, s.y});
  {
    CsvWriter w((fs::path(cfg.output_dir) / "plan.csv").string(),
                "t_s,x_m,y_m,vx,vy,ax,ay");
    for (const auto& s : plan.samples)
      w.row(std::vector<double>{s.t, s.x, s.y, s.vx, s.vy, s.ax, s.ay});
  }

  // NN model: load if a path is configured, otherwise train on demand.
  // Training happens before any timing so the NN row times inference only.
  Mlp mlp;
  double train_time_s = 0.0;
  std::string nn_setup_error;
  bool nn_ready = false;
  try {
    if (!cfg.nn_model_path.empty()) {
      mlp = Mlp::load(cfg.nn_model_path);
      nn_ready = true;
    } else {
      Dataset data = generate_dataset(cfg.model, cfg.dataset.size,
                                      cfg.dataset.seed, cfg.dataset.filter);
      mlp = Mlp::init(cfg.train.seed);
      TrainHistory hist = train(mlp, data, cfg.train);
      train_time_s = hist.train_time_s;
      nn_ready = true;
    }
  } catch (const std::exception& e) {
    nn_setup_error = e.what();
  }

  std::vector<detail::MethodArtifacts> arts(kBenchMethodCount);
  auto run_one = [&](int mi) {
    if (mi == 5 && !nn_ready) {
      detail::MethodArtifacts a;
      a.row.method = bench_method_names()[mi];
      a.row.failed = true;
      a.row.error = "nn setup failed: " + nn_setup_error;
      a.row.time_s = a.row.rmse = a.row.comfort_index =
          std::numeric_limits<double>::quiet_NaN();
      return a;
    }
    return detail::run_method(cfg, mi, plan, targets, &mlp);
  };

  if (cfg.parallel) {
    std::vector<std::future<detail::MethodArtifacts>> futs;
    for (int mi = 0; mi < kBenchMethodCount; ++mi)
      futs.push_back(std::async(std::launch::async, run_one, mi));
    for (int mi = 0; mi < kBenchMethodCount; ++mi) arts[mi] = futs[mi].get();
  } else {
    for (int mi = 0; mi < kBenchMethodCount; ++mi) arts[mi] = run_one(mi);
  }

  std::vector<ComparisonRow> rows;
  for (auto& a : arts) rows.push_back(a.row);

  {
    CsvWriter w((fs::path(cfg.output_dir) / "comparison.csv").string(),
                "method,time_s,rmse_m,comfort_index");
    for (const auto& r : rows)
      w.row(std::vector<std::string>{r.method, detail::encode_cell(r.time_s),
                                     detail::encode_cell(r.rmse),
                                     detail::encode_cell(r.comfort_index)});
  }
  {
    std::ofstream f(fs::path(cfg.output_dir) / "comparison.txt");
    f << "method     time_s        rmse_m        comfort_index\n";
    for (const auto& r : rows) {
      char buf[160];
      if (r.failed) {
        std::snprintf(buf, sizeof(buf), "%-10s FAILED: %s\n", r.method.c_str(),
                      r.error.c_str());
      } else {
        std::snprintf(buf, sizeof(buf), "%-10s %-13.6g %-13.6g %-13.6g\n",
                      r.method.c_str(), r.time_s, r.rmse, r.comfort_index);
      }
      f << buf;
    }
  }
  {
    nlohmann::json meta;
    meta["n_samples"] = cfg.n_samples;
    meta["timing_repeats"] = cfg.timing_repeats;
    meta["dataset_size"] = cfg.dataset.size;
    meta["dataset_seed"] = cfg.dataset.seed;
    meta["train_seed"] = cfg.train.seed;
    meta["train_time_s"] = train_time_s;  // excluded from the nn table row
    meta["nn_model_path"] = cfg.nn_model_path;
    if (!nn_setup_error.empty()) meta["nn_setup_error"] = nn_setup_error;
    std::array<std::uint64_t, kBenchMethodCount> seeds{};
    for (int i = 0; i < kBenchMethodCount; ++i)
      seeds[i] = cfg.method_options[i].seed;
    meta["solver_seeds"] = seeds;
    std::ofstream f(fs::path(cfg.output_dir) / "bench_meta.json");
    f << meta.dump(2) << "\n";
  }
  return rows;
}

// Renders joint-angle and tracking-error plots for every method directory
// found under `out_dir`. Missing or empty artifacts are skipped with a
// warning on stderr; returns the number of plot files written.
inline int emit_plots(const std::string& out_dir) {
  namespace fs = std::filesystem;
  int written = 0;
  for (const auto& name : bench_method_names()) {
    fs::path dir = fs::path(out_dir) / name;
    fs::path joints = dir / "joints.csv";
    fs::path error = dir / "error.csv";
    if (!fs::exists(joints)) {
      std::cerr << "warning: missing artifact " << joints.string()
                << ", plot skipped\n";
    } else {
      CsvTable t = CsvTable::read(joints.string());
      if (t.rows.empty()) {
        std::cerr << "warning: empty series in " << joints.string()
                  << ", plot skipped\n";
      } else {
        std::vector<double> ts, q1, q2, q3;
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
          ts.push_back(t.number(i, "t_s"));
          q1.push_back(t.number(i, "theta1_deg"));
          q2.push_back(t.number(i, "theta2_deg"));
          q3.push_back(t.number(i, "theta3_deg"));
        }
        SvgPlot p(name + ": joint angles", "t [s]", "angle [deg]");
        p.add_series("theta1", ts, q1);
        p.add_series("theta2", ts, q2);
        p.add_series("theta3", ts, q3);
        p.write((dir / "joints.svg").string());
        ++written;
      }
    }
    if (!fs::exists(error)) {
      std::cerr << "warning: missing artifact " << error.string()
                << ", plot skipped\n";
      continue;
    }
    CsvTable t = CsvTable::read(error.string());
    if (t.rows.empty()) {
      std::cerr << "warning: empty series in " << error.string()
                << ", plot skipped\n";
      continue;
    }
    std::vector<double> ts, es;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      ts.push_back(t.number(i, "t_s"));
      es.push_back(t.number(i, "err_m"));
    }
    SvgPlot p(name + ": tracking error", "t [s]", "error [m]");
    p.add_series("err", ts, es);
    p.write((dir / "error.svg").string());
    ++written;
  }
  return written;
}

}  // namespace legik
