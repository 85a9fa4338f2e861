// Command-line front end: workspace sampling, minimum-jerk planning, IK
// solving over a plan, MLP training, the full method comparison bench, and
// plot rendering. Exit codes: 0 ok, 2 usage error, 1 runtime failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "legik/legik.hpp"

namespace {

using namespace legik;

ConfigFile load_cfg(const std::string& path) {
  return path.empty() ? ConfigFile{} : ConfigFile::parse_file(path);
}

int cmd_workspace(const std::string& cfg_path, long long n, long long seed,
                  const std::string& out) {
  KinematicModel m = load_model(load_cfg(cfg_path));
  auto samples = sample_workspace(m, static_cast<std::size_t>(n),
                                  static_cast<std::uint64_t>(seed));
  CsvWriter w(out, "theta1_deg,theta2_deg,theta3_deg,x_m,y_m");
  for (const auto& s : samples)
    w.row(std::vector<double>{s.q.t1 * kRadToDeg, s.q.t2 * kRadToDeg,
                              s.q.t3 * kRadToDeg, s.pose.x, s.pose.y});
  std::cout << "wrote " << samples.size() << " workspace samples to " << out
            << "\n";
  return 0;
}

struct PlanFlags {
  std::optional<double> t0, tf, x0, vx0, ax0, xf, vxf, axf;
  std::optional<double> y0, vy0, ay0, yf, vyf, ayf;
  std::optional<long long> samples;
};

int cmd_plan(const std::string& cfg_path, const PlanFlags& f,
             const std::string& out) {
  ConfigFile cfg = load_cfg(cfg_path);
  BoundaryConditions bc = load_boundary(cfg);
  auto ov = [](std::optional<double> v, double& dst) { if (v) dst = *v; };
  ov(f.t0, bc.t0); ov(f.tf, bc.tf);
  ov(f.x0, bc.x.p0); ov(f.vx0, bc.x.v0); ov(f.ax0, bc.x.a0);
  ov(f.xf, bc.x.pf); ov(f.vxf, bc.x.vf); ov(f.axf, bc.x.af);
  ov(f.y0, bc.y.p0); ov(f.vy0, bc.y.v0); ov(f.ay0, bc.y.a0);
  ov(f.yf, bc.y.pf); ov(f.vyf, bc.y.vf); ov(f.ayf, bc.y.af);
  long long n = f.samples ? *f.samples : load_plan_samples(cfg);
  if (n < 2) throw std::runtime_error("need at least 2 plan samples");
  TrajectoryPlan plan = generate_plan(bc, static_cast<std::size_t>(n));
  CsvWriter w(out, "t_s,x_m,y_m,vx,vy,ax,ay");
  for (const auto& s : plan.samples)
    w.row(std::vector<double>{s.t, s.x, s.y, s.vx, s.vy, s.ax, s.ay});
  std::cout << "wrote " << plan.size() << " plan samples to " << out << "\n";
  return 0;
}

std::vector<PlanarPose> read_plan_targets(const std::string& path,
                                          std::vector<double>* times) {
  CsvTable t = CsvTable::read(path);
  std::vector<PlanarPose> targets;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    targets.push_back({t.number(i, "x_m"), t.number(i, "y_m")});
    if (times) times->push_back(t.number(i, "t_s"));
  }
  if (targets.empty()) throw std::runtime_error("plan has no rows: " + path);
  return targets;
}

int cmd_solve(const std::string& method, const std::string& plan_path,
              const std::string& cfg_path, const std::string& out,
              const std::string& nn_path, double theta0_deg,
              const std::string& knee) {
  ConfigFile cfg = load_cfg(cfg_path);
  std::vector<double> times;
  std::vector<PlanarPose> targets = read_plan_targets(plan_path, &times);

  SolveRequest req;
  req.model = load_model(cfg);
  req.options = load_solver_options(cfg);
  req.targets = targets;
  for (int i = 0; i < 3; ++i) req.initial_q[i] = req.model.joint_limits[i].mid();
  for (int i = 0; i < 3; ++i) {
    std::string key = "initial" + std::to_string(i + 1) + "_deg";
    req.initial_q[i] = cfg.get_double("bench", key, req.initial_q[i] * kRadToDeg) *
                       kDegToRad;
  }

  SolveResult res;
  if (method == "analytical") {
    double psi = kPi / 2.0 - theta0_deg * kDegToRad;
    KneeBranch branch =
        knee == "negative" ? KneeBranch::negative : KneeBranch::positive;
    detail::WallTimer timer;
    for (auto t : targets) {
      t.orientation = psi;
      JointVector q = analytical_ik(req.model, t, branch);
      detail::record(res, req.model, q, t, 0, true);
    }
    res.elapsed_s = timer.seconds();
  } else if (method == "ccd") {
    res = ccd_solve(req);
  } else if (method == "mppi") {
    res = mppi_solve(req);
  } else if (method == "lmdls") {
    res = lmdls_solve(req);
  } else if (method == "opt") {
    res = optimize_ik_solve(req);
  } else if (method == "mooga") {
    res = mooga_solve(req);
  } else if (method == "nn") {
    if (nn_path.empty())
      throw std::runtime_error("--model is required for method nn");
    Mlp mlp = Mlp::load(nn_path);
    res = nn_solve(req, mlp);
  } else {
    throw CLI::ValidationError("--method",
                               "unknown method '" + method + "'");
  }

  CsvWriter w(out, "t_s,theta1_deg,theta2_deg,theta3_deg,err_m,iters,converged");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto& q = res.joint_trajectory[i];
    w.row(std::vector<std::string>{
        fmt_double(times[i]), fmt_double(q.t1 * kRadToDeg),
        fmt_double(q.t2 * kRadToDeg), fmt_double(q.t3 * kRadToDeg),
        fmt_double(res.position_errors[i]), std::to_string(res.iterations[i]),
        res.converged[i] ? "1" : "0"});
  }
  std::printf("%s: %zu targets, max error %.3e m, %.6f s\n", method.c_str(),
              targets.size(), res.max_error(), res.elapsed_s);
  return 0;
}

int cmd_train(const std::string& cfg_path, const std::string& out,
              const std::string& history_path) {
  ConfigFile cfg = load_cfg(cfg_path);
  KinematicModel m = load_model(cfg);
  TrainConfig tc = load_train_config(cfg);
  DatasetOptions ds = load_dataset_options(cfg);
  Dataset data = generate_dataset(m, ds.size, ds.seed, ds.filter);
  std::cout << "dataset: " << data.size() << " samples (train " << data.n_train
            << ", val " << data.n_val << ", test " << data.n_test << ")\n";
  Mlp mlp = Mlp::init(tc.seed);
  TrainHistory hist = train(mlp, data, tc);
  mlp.save(out);
  std::printf("trained %d epochs in %.1f s, best val mse %.6e -> %s\n",
              hist.epochs_run, hist.train_time_s,
              hist.val_mse_best.empty() ? 0.0 : hist.val_mse_best.back(),
              out.c_str());
  if (!history_path.empty()) {
    CsvWriter w(history_path, "epoch,train_mse,val_mse_best");
    for (std::size_t i = 0; i < hist.train_mse.size(); ++i)
      w.row(std::vector<std::string>{std::to_string(i + 1),
                                     fmt_double(hist.train_mse[i]),
                                     fmt_double(hist.val_mse_best[i])});
  }
  return 0;
}

int cmd_bench(const std::string& cfg_path, const std::string& out_dir,
              bool parallel) {
  BenchConfig bc = BenchConfig::from_config(load_cfg(cfg_path));
  if (!out_dir.empty()) bc.output_dir = out_dir;
  if (parallel) bc.parallel = true;
  auto rows = run_bench(bc);
  std::cout << "method     time_s        rmse_m        comfort_index\n";
  for (const auto& r : rows) {
    if (r.failed)
      std::printf("%-10s FAILED: %s\n", r.method.c_str(), r.error.c_str());
    else
      std::printf("%-10s %-13.6g %-13.6g %-13.6g\n", r.method.c_str(), r.time_s,
                  r.rmse, r.comfort_index);
  }
  std::cout << "artifacts in " << bc.output_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar 3-DOF leg inverse-kinematics toolbox"};
  app.require_subcommand(1);

  std::string ws_cfg, pl_cfg, sv_cfg, tr_cfg, be_cfg;
  std::string ws_out = "workspace.csv", pl_out = "plan.csv", sv_out = "result.csv";
  std::string tr_out = "mlp.txt", be_out, po_dir = "bench_out";
  std::string plan_path, method, nn_path, history_path;
  long long n = 10000, seed = 42;
  double theta0_deg = 0.0;
  std::string knee = "positive";
  PlanFlags pf;
  bool parallel = false;

  auto* ws = app.add_subcommand("workspace", "sample reachable poses over the joint ranges");
  ws->add_option("--config", ws_cfg, "model config file");
  ws->add_option("--n", n, "number of Monte-Carlo samples");
  ws->add_option("--seed", seed, "RNG seed");
  ws->add_option("--out", ws_out, "output CSV");

  auto* pl = app.add_subcommand("plan", "generate a minimum-jerk task-space plan");
  pl->add_option("--config", pl_cfg, "config file with [trajectory] boundary values");
  pl->add_option("--out", pl_out, "output CSV");
  pl->add_option("--samples", [&pf](const std::vector<std::string>& v) {
        pf.samples = std::stoll(v.at(0)); return true; },
      "number of time samples");
  auto popt = [&pl](const char* flag, std::optional<double>& slot, const char* help) {
    pl->add_option(flag, [&slot](const std::vector<std::string>& v) {
          slot = std::stod(v.at(0)); return true; }, help);
  };
  popt("--t0", pf.t0, "start time [s]");
  popt("--tf", pf.tf, "end time [s]");
  popt("--x0", pf.x0, "initial x [m]");
  popt("--vx0", pf.vx0, "initial x velocity [m/s]");
  popt("--ax0", pf.ax0, "initial x acceleration [m/s^2]");
  popt("--xf", pf.xf, "final x [m]");
  popt("--vxf", pf.vxf, "final x velocity [m/s]");
  popt("--axf", pf.axf, "final x acceleration [m/s^2]");
  popt("--y0", pf.y0, "initial y [m]");
  popt("--vy0", pf.vy0, "initial y velocity [m/s]");
  popt("--ay0", pf.ay0, "initial y acceleration [m/s^2]");
  popt("--yf", pf.yf, "final y [m]");
  popt("--vyf", pf.vyf, "final y velocity [m/s]");
  popt("--ayf", pf.ayf, "final y acceleration [m/s^2]");

  auto* sv = app.add_subcommand("solve", "solve IK along a plan with one method");
  sv->add_option("--method", method, "analytical|ccd|mppi|lmdls|opt|mooga|nn")
      ->required()
      ->check(CLI::IsMember({"analytical", "ccd", "mppi", "lmdls", "opt",
                             "mooga", "nn"}));
  sv->add_option("--plan", plan_path, "input plan CSV")->required();
  sv->add_option("--config", sv_cfg, "model/solver config file");
  sv->add_option("--out", sv_out, "result CSV");
  sv->add_option("--model", nn_path, "trained MLP file (method nn)");
  sv->add_option("--theta0-deg", theta0_deg,
                 "foot angle for the analytical method (psi = 90deg - theta0)");
  sv->add_option("--knee", knee, "analytical branch: positive|negative")
      ->check(CLI::IsMember({"positive", "negative"}));

  auto* tr = app.add_subcommand("train", "generate a dataset and train the MLP");
  tr->add_option("--config", tr_cfg, "config file ([train]/[dataset])");
  tr->add_option("--out", tr_out, "output model file");
  tr->add_option("--history", history_path, "optional per-epoch MSE CSV");

  auto* be = app.add_subcommand("bench", "run the six-method comparison");
  be->add_option("--config", be_cfg, "bench config file");
  be->add_option("--out", be_out, "output directory (overrides config and LEGIK_OUTPUT_DIR)");
  be->add_flag("--parallel", parallel, "run methods concurrently");

  auto* po = app.add_subcommand("plots", "render SVG plots from bench artifacts");
  po->add_option("--dir", po_dir, "bench output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (ws->parsed()) return cmd_workspace(ws_cfg, n, seed, ws_out);
    if (pl->parsed()) return cmd_plan(pl_cfg, pf, pl_out);
    if (sv->parsed())
      return cmd_solve(method, plan_path, sv_cfg, sv_out, nn_path, theta0_deg, knee);
    if (tr->parsed()) return cmd_train(tr_cfg, tr_out, history_path);
    if (be->parsed()) return cmd_bench(be_cfg, be_out, parallel);
    if (po->parsed()) {
      int files = legik::emit_plots(po_dir);
      std::cout << "wrote " << files << " plot files under " << po_dir << "\n";
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
