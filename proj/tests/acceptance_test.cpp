#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "legik/legik.hpp"
#include "test_util.hpp"

using namespace legik;

namespace {

template <typename... Args>
std::string strf(const char* fmt, Args... args) {
  char buf[768];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return std::string(buf);
}

std::string short_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return strf("%.4g", v);
}

// One verdict line per criterion; clauses use EXPECT (never ASSERT) so every
// measurement is taken and printed even after an earlier clause fails.
void report(int criterion, const std::string& detail) {
  bool pass = !::testing::Test::HasFailure();
  std::printf("[CRITERION %d] %s - %s\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
}

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

// Dataset generation and training are the slow parts of the suite; criteria
// 8-10 share one pipeline run (default dataset and training settings, model
// saved to disk so the bench runs load it instead of retraining).
struct NnPipeline {
  Dataset data;
  Mlp mlp;
  TrainHistory hist;
  double dataset_gen_s = 0.0;
  std::string model_path;
};

const NnPipeline& nn_pipeline() {
  static const NnPipeline* pipe = [] {
    auto* p = new NnPipeline;
    KinematicModel m;
    DatasetOptions d;
    Stopwatch gen;
    p->data = generate_dataset(m, d.size, d.seed, d.filter);
    p->dataset_gen_s = gen.seconds();
    TrainConfig tc;
    p->mlp = Mlp::init(tc.seed);
    p->hist = train(p->mlp, p->data, tc);
    p->model_path =
        (testutil::fresh_dir("acceptance-nn") / "model.txt").string();
    p->mlp.save(p->model_path);
    return p;
  }();
  return *pipe;
}

// Two default-configuration bench runs into separate directories; criterion 9
// reads the first, criterion 10 compares the pair. timing_repeats=1 because
// no criterion constrains the wall-clock column.
struct BenchRuns {
  std::filesystem::path dir1, dir2;
  std::vector<ComparisonRow> rows1, rows2;
};

const BenchRuns& bench_runs() {
  static const BenchRuns* runs = [] {
    auto* b = new BenchRuns;
    b->dir1 = testutil::fresh_dir("acceptance-bench1");
    b->dir2 = testutil::fresh_dir("acceptance-bench2");
    BenchConfig cfg = BenchConfig::defaults();
    cfg.timing_repeats = 1;
    cfg.nn_model_path = nn_pipeline().model_path;
    cfg.output_dir = b->dir1.string();
    b->rows1 = run_bench(cfg);
    cfg.output_dir = b->dir2.string();
    b->rows2 = run_bench(cfg);
    return b;
  }();
  return *runs;
}

}  // namespace

// 1: forward kinematics and the analytical solver invert each other across
// the full joint range.
TEST(Acceptance, Criterion1AnalyticalRoundTrip) {
  KinematicModel m;
  Rng rng(2026);
  Stopwatch clock;
  double max_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    JointVector q = testutil::random_in_range(rng, m);
    PlanarPose pose = forward_kinematics(m, q);
    JointVector back = analytical_ik(m, pose, KneeBranch::positive);
    for (int j = 0; j < 3; ++j)
      max_err = std::max(max_err, std::abs(wrap_angle(back[j] - q[j])));
  }
  double secs = clock.seconds();
  EXPECT_LT(max_err, 1e-9);
  EXPECT_LT(secs, 5.0);
  report(1, strf("round trip over 1000 poses: max joint error %s rad "
                 "(< 1e-9), %s s (< 5)",
                 short_num(max_err).c_str(), short_num(secs).c_str()));
}

// 2: analytic Jacobian against central finite differences, h = 1e-6.
TEST(Acceptance, Criterion2JacobianMatchesFiniteDifferences) {
  KinematicModel m;
  Rng rng(2027);
  const double h = 1e-6;
  double max_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    JointVector q = testutil::random_in_range(rng, m);
    Jacobian2x3 J = jacobian(m, q);
    for (int j = 0; j < 3; ++j) {
      JointVector qp = q, qm = q;
      qp[j] += h;
      qm[j] -= h;
      PlanarPose pp = forward_kinematics(m, qp);
      PlanarPose pm = forward_kinematics(m, qm);
      max_err = std::max(max_err, std::abs(J(0, j) - (pp.x - pm.x) / (2 * h)));
      max_err = std::max(max_err, std::abs(J(1, j) - (pp.y - pm.y) / (2 * h)));
    }
  }
  EXPECT_LT(max_err, 1e-6);
  report(2, strf("max Jacobian entry error %s over 1000 poses (< 1e-6)",
                 short_num(max_err).c_str()));
}

// 3: the reference swing reproduces its boundary states at t0/tf, and the
// normalized unit quintic has the canonical (10, -15, 6) shape.
TEST(Acceptance, Criterion3ReferenceTrajectoryBoundary) {
  BoundaryConditions bc = table3_boundary();
  TrajectoryPlan plan = generate_plan(bc, 101);
  const TrajectorySample& a = plan.samples.front();
  const TrajectorySample& z = plan.samples.back();
  double dev = 0.0;
  for (double d : {a.x - bc.x.p0, a.vx - bc.x.v0, a.ax - bc.x.a0,
                   a.y - bc.y.p0, a.vy - bc.y.v0, a.ay - bc.y.a0,
                   z.x - bc.x.pf, z.vx - bc.x.vf, z.ax - bc.x.af,
                   z.y - bc.y.pf, z.vy - bc.y.vf, z.ay - bc.y.af})
    dev = std::max(dev, std::abs(d));
  EXPECT_EQ(a.t, bc.t0);
  EXPECT_EQ(z.t, bc.tf);
  EXPECT_LT(dev, 1e-9);

  QuinticCoefficients s = solve_quintic(0.0, 1.0, {0, 0, 0, 1, 0, 0});
  const double want[6] = {0, 0, 0, 10, -15, 6};
  double cdev = 0.0;
  for (int i = 0; i < 6; ++i) cdev = std::max(cdev, std::abs(s.s[i] - want[i]));
  EXPECT_LT(cdev, 1e-12);
  report(3, strf("boundary-state deviation %s (< 1e-9); normalized quintic "
                 "vs (10,-15,6): max coefficient delta %s (< 1e-12)",
                 short_num(dev).c_str(), short_num(cdev).c_str()));
}

// 4: barrier-method optimizer tracks the reference motion.
TEST(Acceptance, Criterion4BarrierOptimizerRmse) {
  SolveRequest req = testutil::table3_request();
  SolveResult res = optimize_ik_solve(req);
  double r = rmse(res.joint_trajectory, req.targets, req.model);
  EXPECT_LT(r, 1e-4);
  EXPECT_LT(res.elapsed_s, 60.0);
  report(4, strf("opt rmse %s m (< 1e-4), solve time %s s (< 60)",
                 short_num(r).c_str(), short_num(res.elapsed_s).c_str()));
}

// 5: GA accuracy with default parameters and a fixed seed; elitism keeps the
// best fitness non-increasing across generations on every target.
TEST(Acceptance, Criterion5GaRmseAndMonotoneFitness) {
  SolveRequest req = testutil::table3_request();
  long rises = 0;
  double worst_rise = 0.0;
  std::size_t monitored = 0;
  SolveResult res =
      mooga_solve(req, [&](std::size_t, const std::vector<double>& hist) {
        ++monitored;
        for (std::size_t g = 1; g < hist.size(); ++g)
          if (hist[g] > hist[g - 1]) {
            ++rises;
            worst_rise = std::max(worst_rise, hist[g] - hist[g - 1]);
          }
      });
  double r = rmse(res.joint_trajectory, req.targets, req.model);
  EXPECT_LT(r, 1e-3);
  EXPECT_EQ(rises, 0);
  EXPECT_EQ(monitored, req.targets.size());
  report(5, strf("mooga rmse %s m (< 1e-3); best fitness non-increasing on "
                 "all %zu targets (%ld rises, worst +%s)",
                 short_num(r).c_str(), monitored, rises,
                 short_num(worst_rise).c_str()));
}

// 6: Newton and damped least squares both converge on every sample, the
// damped solution respects the joint limits, and with vanishing damping the
// damped step collapses onto the raw Newton step.
TEST(Acceptance, Criterion6NewtonAndDampedLeastSquares) {
  SolveRequest req = testutil::table3_request();
  SolveResult newton = mppi_solve(req);
  SolveResult damped = lmdls_solve(req);
  double newton_max = newton.max_error();
  double damped_max = damped.max_error();
  EXPECT_LT(newton_max, 1e-5);
  EXPECT_LT(damped_max, 1e-5);
  const KinematicModel m = req.effective_model();
  long outside = 0;
  for (const auto& q : damped.joint_trajectory)
    if (!q.in_range(m)) ++outside;
  EXPECT_EQ(outside, 0);

  DampingParams dp;
  dp.a = 1e-12;
  dp.lambda_min = 1e-12;
  Rng rng(2028);
  double max_diff = 0.0;
  int checked = 0;
  for (int draws = 0; draws < 4000 && checked < 200; ++draws) {
    JointVector q = testutil::random_in_range(rng, m);
    Jacobian2x3 J = jacobian(m, q);
    if (std::abs((J * J.transpose()).determinant()) < 1e-3) continue;
    Eigen::Vector2d e(rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05));
    Eigen::Vector3d diff =
        lmdls_step(m, q, e, lmdls_lambdas(m, q, dp)) - mppi_step(m, q, e);
    max_diff = std::max(max_diff, diff.cwiseAbs().maxCoeff());
    ++checked;
  }
  EXPECT_EQ(checked, 200);
  EXPECT_LE(max_diff, 1e-8);
  report(6, strf("max per-sample error: newton %s m, damped %s m (< 1e-5); "
                 "%ld damped samples outside limits (= 0); vanishing-damping "
                 "step gap %s over %d poses (<= 1e-8)",
                 short_num(newton_max).c_str(), short_num(damped_max).c_str(),
                 outside, short_num(max_diff).c_str(), checked));
}

// 7: every single-joint CCD update is distance non-increasing over a full
// reference-motion run, and the final trajectory stays coarsely accurate.
TEST(Acceptance, Criterion7CcdMonotoneDescent) {
  SolveRequest req = testutil::table3_request();
  long updates = 0, rises = 0;
  double worst_rise = 0.0;
  SolveResult res = ccd_solve(req, [&](int, double before, double after) {
    ++updates;
    if (after > before + 1e-12) {
      ++rises;
      worst_rise = std::max(worst_rise, after - before);
    }
  });
  double r = rmse(res.joint_trajectory, req.targets, req.model);
  EXPECT_GT(updates, 0);
  EXPECT_EQ(rises, 0);
  EXPECT_LT(r, 0.2);
  report(7, strf("%ld joint updates, %ld increased the distance (worst +%s); "
                 "rmse %s m (< 0.2)",
                 updates, rises, short_num(worst_rise).c_str(),
                 short_num(r).c_str()));
}

// 8: network gradient check, dataset size/knee-sign, training budget, and the
// two accuracy clauses. A 2-10-3 sigmoid network cannot represent this IK map
// to 5e-3; the two rmse clauses measure the honest representability floor.
TEST(Acceptance, Criterion8NeuralNetwork) {
  Mlp net = Mlp::init(5);
  Rng rng(2029);
  Eigen::Matrix<double, Eigen::Dynamic, 2> Xn(10, 2);
  Eigen::Matrix<double, Eigen::Dynamic, 3> Yn(10, 3);
  for (Eigen::Index i = 0; i < 10; ++i) {
    for (int j = 0; j < 2; ++j) Xn(i, j) = rng.uniform(-1.0, 1.0);
    for (int j = 0; j < 3; ++j) Yn(i, j) = rng.uniform(-1.0, 1.0);
  }
  Eigen::VectorXd grad;
  detail::mlp_mse(net, Xn, Yn, &grad);
  Eigen::VectorXd packed = detail::mlp_pack(net);
  Eigen::VectorXd fd(Mlp::kParamCount);
  const double h = 1e-6;
  for (int k = 0; k < Mlp::kParamCount; ++k) {
    Eigen::VectorXd p = packed;
    Mlp probe = net;
    p[k] = packed[k] + h;
    detail::mlp_unpack(p, probe);
    double up = detail::mlp_mse(probe, Xn, Yn);
    p[k] = packed[k] - h;
    detail::mlp_unpack(p, probe);
    double dn = detail::mlp_mse(probe, Xn, Yn);
    fd[k] = (up - dn) / (2 * h);
  }
  double rel = (grad - fd).norm() / std::max({grad.norm(), fd.norm(), 1e-12});
  EXPECT_LT(rel, 1e-6);

  const NnPipeline& pipe = nn_pipeline();
  long long n = static_cast<long long>(pipe.data.size());
  double min_knee = pipe.data.outputs.col(1).minCoeff();
  EXPECT_GE(n, 100000);
  EXPECT_GE(min_knee, 0.0);
  EXPECT_LT(pipe.hist.train_time_s, 900.0);

  KinematicModel m;
  const Dataset& d = pipe.data;
  double acc = 0.0;
  for (Eigen::Index i = d.n_train + d.n_val; i < d.size(); ++i) {
    PlanarPose target{d.inputs(i, 0), d.inputs(i, 1)};
    PlanarPose p = forward_kinematics(m, pipe.mlp.infer(target));
    double dx = p.x - target.x, dy = p.y - target.y;
    acc += dx * dx + dy * dy;
  }
  double test_rmse = std::sqrt(acc / static_cast<double>(d.n_test));
  EXPECT_LT(test_rmse, 5e-3);

  SolveRequest req = testutil::table3_request();
  SolveResult res = nn_solve(req, pipe.mlp);
  double traj_rmse = rmse(res.joint_trajectory, req.targets, req.model);
  EXPECT_LT(traj_rmse, 5e-3);

  double val_floor = pipe.hist.val_mse_best.empty()
                         ? std::numeric_limits<double>::quiet_NaN()
                         : pipe.hist.val_mse_best.back();
  report(8, strf("grad rel error %s (< 1e-6); dataset %lld knee-positive "
                 "rows, min knee %s rad (>= 100000, >= 0); train %s s over "
                 "%d epochs, best val mse %s (< 900 s); test-split rmse %s m "
                 "(< 5e-3); reference-motion rmse %s m (< 5e-3)",
                 short_num(rel).c_str(), n, short_num(min_knee).c_str(),
                 short_num(pipe.hist.train_time_s).c_str(),
                 pipe.hist.epochs_run, short_num(val_floor).c_str(),
                 short_num(test_rmse).c_str(), short_num(traj_rmse).c_str()));
}

// 9: the comfort index diverges when any sample touches a joint limit, and
// every default bench row except CCD stays finite.
TEST(Acceptance, Criterion9ComfortIndexBehaviour) {
  KinematicModel m;
  std::vector<JointVector> traj(8);
  std::vector<double> times(8);
  for (int i = 0; i < 8; ++i) {
    times[i] = 0.01 * i;
    for (int j = 0; j < 3; ++j)
      traj[static_cast<std::size_t>(i)][j] =
          m.joint_limits[j].mid() +
          0.05 * m.joint_limits[j].width() * std::sin(0.7 * i + j);
  }
  traj[4].t1 = m.joint_limits[0].hi;
  ComfortWeights w;
  double ic = comfort_index(m, traj, times, w);
  EXPECT_TRUE(std::isinf(ic) && ic > 0) << "I_c = " << ic;

  const BenchRuns& b = bench_runs();
  EXPECT_EQ(b.rows1.size(), 6u);
  std::string cells;
  long non_finite = 0;
  for (const ComparisonRow& row : b.rows1) {
    EXPECT_FALSE(row.failed) << row.method << ": " << row.error;
    if (row.method != "ccd" && !std::isfinite(row.comfort_index))
      ++non_finite;
    cells += strf("%s=%s ", row.method.c_str(),
                  short_num(row.comfort_index).c_str());
  }
  EXPECT_EQ(non_finite, 0);
  report(9, strf("limit-touch trajectory I_c = %s (infinite); bench I_c: %s"
                 "(every non-ccd row finite)",
                 short_num(ic).c_str(), cells.c_str()));
}

// 10: identical seeds reproduce the rmse and comfort columns byte for byte;
// only the wall-clock column may differ between runs.
TEST(Acceptance, Criterion10BenchDeterminism) {
  const BenchRuns& b = bench_runs();
  auto l1 = read_lines(b.dir1 / "comparison.csv");
  auto l2 = read_lines(b.dir2 / "comparison.csv");
  EXPECT_EQ(l1.size(), 7u);
  EXPECT_EQ(l2.size(), 7u);
  if (l1.empty() || l2.empty()) {
    ADD_FAILURE() << "comparison.csv missing or empty";
  } else {
    EXPECT_EQ(l1[0], std::string("method,time_s,rmse_m,comfort_index"));
    EXPECT_EQ(l1[0], l2[0]);
  }
  long mismatches = 0;
  std::size_t rows = std::min(l1.size(), l2.size());
  for (std::size_t i = 1; i < rows; ++i) {
    auto c1 = split_csv(l1[i]);
    auto c2 = split_csv(l2[i]);
    if (c1.size() != 4 || c2.size() != 4 || c1[0] != c2[0] ||
        c1[2] != c2[2] || c1[3] != c2[3])
      ++mismatches;
  }
  EXPECT_EQ(mismatches, 0);
  for (std::size_t i = 0; i < b.rows1.size() && i < b.rows2.size(); ++i) {
    EXPECT_EQ(b.rows1[i].rmse, b.rows2[i].rmse) << b.rows1[i].method;
    EXPECT_EQ(b.rows1[i].comfort_index, b.rows2[i].comfort_index)
        << b.rows1[i].method;
  }
  report(10, strf("%zu data rows: method/rmse_m/comfort_index cells "
                  "byte-identical across reruns (%ld mismatches)",
                  rows > 0 ? rows - 1 : 0, mismatches));
}
