#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "legik/csv.hpp"
#include "legik/kinematics.hpp"
#include "legik/model.hpp"
#include "legik/rng.hpp"
#include "legik/solvers/common.hpp"

namespace legik {

// 2-10-3 multilayer perceptron: logistic sigmoid hidden layer, linear output,
// with the [-1,1] min/max normalization baked into the model so a saved file
// is self-contained.
struct Mlp {
  Eigen::Matrix<double, 10, 2> W1 = Eigen::Matrix<double, 10, 2>::Zero();
  Eigen::Matrix<double, 10, 1> b1 = Eigen::Matrix<double, 10, 1>::Zero();
  Eigen::Matrix<double, 3, 10> W2 = Eigen::Matrix<double, 3, 10>::Zero();
  Eigen::Vector3d b2 = Eigen::Vector3d::Zero();
  Eigen::Vector2d in_lo = Eigen::Vector2d::Constant(-1.0);
  Eigen::Vector2d in_hi = Eigen::Vector2d::Constant(1.0);
  Eigen::Vector3d out_lo = Eigen::Vector3d::Constant(-1.0);
  Eigen::Vector3d out_hi = Eigen::Vector3d::Constant(1.0);

  static constexpr int kParamCount = 20 + 10 + 30 + 3;

  // Uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)], seeded.
  static Mlp init(std::uint64_t seed) {
    Rng rng(seed);
    Mlp m;
    double s1 = 1.0 / std::sqrt(2.0), s2 = 1.0 / std::sqrt(10.0);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 2; ++j) m.W1(i, j) = rng.uniform(-s1, s1);
    for (int i = 0; i < 10; ++i) m.b1[i] = rng.uniform(-s1, s1);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 10; ++j) m.W2(i, j) = rng.uniform(-s2, s2);
    for (int i = 0; i < 3; ++i) m.b2[i] = rng.uniform(-s2, s2);
    return m;
  }

  Eigen::Vector2d normalize_in(const Eigen::Vector2d& x) const {
    return 2.0 * (x - in_lo).cwiseQuotient(in_hi - in_lo) -
           Eigen::Vector2d::Ones();
  }
  Eigen::Vector3d denormalize_out(const Eigen::Vector3d& yn) const {
    return (yn + Eigen::Vector3d::Ones())
               .cwiseProduct(0.5 * (out_hi - out_lo)) + out_lo;
  }

  // Normalized-space forward pass.
  Eigen::Vector3d raw_forward(const Eigen::Vector2d& xn) const {
    Eigen::Matrix<double, 10, 1> h = W1 * xn + b1;
    for (int i = 0; i < 10; ++i) h[i] = 1.0 / (1.0 + std::exp(-h[i]));
    return W2 * h + b2;
  }

  JointVector infer(const PlanarPose& target,
                    bool* extrapolated = nullptr) const {
    Eigen::Vector2d x(target.x, target.y);
    if (extrapolated)
      *extrapolated = x[0] < in_lo[0] || x[0] > in_hi[0] || x[1] < in_lo[1] ||
                      x[1] > in_hi[1];
    return JointVector::from(denormalize_out(raw_forward(normalize_in(x))));
  }

  void save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write model: " + path);
    f << "legik-mlp 2 10 3\n";
    auto dump = [&f](const double* p, int n) {
      for (int i = 0; i < n; ++i) f << (i ? " " : "") << fmt_double(p[i]);
      f << "\n";
    };
    // Eigen default storage is column-major; serialize row-major explicitly.
    for (int i = 0; i < 10; ++i) f << fmt_double(W1(i, 0)) << " " << fmt_double(W1(i, 1)) << (i == 9 ? "\n" : " ");
    dump(b1.data(), 10);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 10; ++j)
        f << fmt_double(W2(i, j)) << (i == 2 && j == 9 ? "\n" : " ");
    dump(b2.data(), 3);
    dump(in_lo.data(), 2);
    dump(in_hi.data(), 2);
    dump(out_lo.data(), 3);
    dump(out_hi.data(), 3);
  }

  static Mlp load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read model: " + path);
    std::string magic;
    int ni, nh, no;
    f >> magic >> ni >> nh >> no;
    if (magic != "legik-mlp" || ni != 2 || nh != 10 || no != 3)
      throw std::runtime_error("not a legik-mlp 2-10-3 model file: " + path);
    Mlp m;
    for (int i = 0; i < 10; ++i) f >> m.W1(i, 0) >> m.W1(i, 1);
    for (int i = 0; i < 10; ++i) f >> m.b1[i];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 10; ++j) f >> m.W2(i, j);
    for (int i = 0; i < 3; ++i) f >> m.b2[i];
    f >> m.in_lo[0] >> m.in_lo[1] >> m.in_hi[0] >> m.in_hi[1];
    for (int i = 0; i < 3; ++i) f >> m.out_lo[i];
    for (int i = 0; i < 3; ++i) f >> m.out_hi[i];
    if (!f) throw std::runtime_error("truncated model file: " + path);
    return m;
  }
};

struct Dataset {
  Eigen::Matrix<double, Eigen::Dynamic, 2> inputs;   // (x, y) meters
  Eigen::Matrix<double, Eigen::Dynamic, 3> outputs;  // joint angles, radians
  Eigen::Index n_train = 0, n_val = 0, n_test = 0;

  Eigen::Index size() const { return inputs.rows(); }

  void split_70_15_15() {
    Eigen::Index n = size();
    n_train = static_cast<Eigen::Index>(std::llround(0.70 * static_cast<double>(n)));
    n_val = static_cast<Eigen::Index>(std::llround(0.15 * static_cast<double>(n)));
    n_test = n - n_train - n_val;
  }
};

enum class DatasetFilter { none, knee_positive };

namespace detail {

// Knee-positive analytical solution at a prescribed FK orientation psi;
// returns feasibility against the joint ranges.
inline bool ik_at_psi(const KinematicModel& m, double x, double y, double psi,
                      JointVector* out) {
  double dx = x - m.L3 * std::cos(psi);
  double dy = y - m.L3 * std::sin(psi);
  double dd = dx * dx + dy * dy;
  double c2 = (dd - m.L1 * m.L1 - m.L2 * m.L2) / (2.0 * m.L1 * m.L2);
  if (std::abs(c2) > 1.0) return false;
  double s2 = std::sqrt(1.0 - c2 * c2);
  JointVector q;
  q.t2 = std::atan2(s2, c2);
  q.t1 = std::atan2(dy, dx) + std::atan2(m.L2 * s2, m.L1 + m.L2 * c2);
  q.t3 = psi - q.t1 + q.t2;
  if (!q.in_range(m)) return false;
  if (out) *out = q;
  return true;
}

// Canonical fiber representative for a pose: the knee-positive solution at
// the midpoint of the feasible-orientation envelope (first/last feasible psi
// on a fixed grid). Returns false when the pose has no feasible orientation
// or the midpoint itself is infeasible (a ~2e-4 fraction; callers drop those).
inline bool canonical_knee_positive(const KinematicModel& m, double x, double y,
                                    JointVector* out) {
  constexpr int kGrid = 721;
  const double lo = -kPi, hi = 1.5 * kPi;  // overshoot covers seam-crossing arcs
  double first = std::numeric_limits<double>::quiet_NaN();
  double last = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < kGrid; ++i) {
    double psi = lo + (hi - lo) * static_cast<double>(i) / (kGrid - 1);
    if (ik_at_psi(m, x, y, psi, nullptr)) {
      if (std::isnan(first)) first = psi;
      last = psi;
    }
  }
  if (std::isnan(first)) return false;
  return ik_at_psi(m, x, y, 0.5 * (first + last), out);
}

}  // namespace detail

// Monte-Carlo dataset from FK. `knee_positive` re-solves each sampled pose to
// its canonical knee-positive representative, collapsing the redundant
// orientation fiber so the regression target is single-valued; records are
// stored as (FK(q), q) so FK(output) == input holds exactly either way.
inline Dataset generate_dataset(const KinematicModel& m, std::size_t n,
                                std::uint64_t seed,
                                DatasetFilter filter = DatasetFilter::knee_positive) {
  if (n == 0) throw std::invalid_argument("dataset size must be positive");
  auto samples = sample_workspace(m, n, seed);
  std::vector<JointVector> qs;
  qs.reserve(n);
  for (const auto& s : samples) {
    if (filter == DatasetFilter::none) {
      qs.push_back(s.q);
      continue;
    }
    JointVector q;
    if (detail::canonical_knee_positive(m, s.pose.x, s.pose.y, &q))
      qs.push_back(q);
  }
  Dataset d;
  d.inputs.resize(static_cast<Eigen::Index>(qs.size()), 2);
  d.outputs.resize(static_cast<Eigen::Index>(qs.size()), 3);
  for (Eigen::Index i = 0; i < d.inputs.rows(); ++i) {
    const auto& q = qs[static_cast<std::size_t>(i)];
    auto p = forward_kinematics(m, q);
    d.inputs(i, 0) = p.x;
    d.inputs(i, 1) = p.y;
    d.outputs(i, 0) = q.t1;
    d.outputs(i, 1) = q.t2;
    d.outputs(i, 2) = q.t3;
  }
  d.split_70_15_15();
  return d;
}

struct TrainConfig {
  int epochs = 400;
  double learning_rate = 0.05;
  double momentum = 0.9;
  int batch_size = 64;
  int patience = 40;  // epochs without validation improvement before stopping
  std::uint64_t seed = 1;

  void validate() const {
    if (epochs < 0) throw std::invalid_argument("epochs < 0");
    if (!(learning_rate > 0)) throw std::invalid_argument("learning rate <= 0");
    if (batch_size < 1) throw std::invalid_argument("batch size < 1");
  }
};

struct TrainHistory {
  std::vector<double> train_mse;     // per epoch, on normalized outputs
  std::vector<double> val_mse_best;  // best-so-far validation curve
  int epochs_run = 0;
  double train_time_s = 0.0;
};

namespace detail {

// MSE over normalized outputs (mean across all entries) and its gradient,
// written against the packed layout [W1 row-major, b1, W2 row-major, b2].
inline double mlp_mse(const Mlp& m,
                      const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 2>>& Xn,
                      const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 3>>& Yn,
                      Eigen::VectorXd* grad = nullptr) {
  const Eigen::Index n = Xn.rows();
  Eigen::MatrixXd H = (Xn * m.W1.transpose()).rowwise() + m.b1.transpose();
  H = H.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  Eigen::MatrixXd E = (H * m.W2.transpose()).rowwise() + m.b2.transpose();
  E -= Yn;
  double loss = E.squaredNorm() / static_cast<double>(n * 3);
  if (grad) {
    Eigen::MatrixXd dY = (2.0 / static_cast<double>(n * 3)) * E;  // n x 3
    Eigen::Matrix<double, 3, 10> gW2 = dY.transpose() * H;
    Eigen::Vector3d gb2 = dY.colwise().sum();
    Eigen::MatrixXd dH =
        (dY * m.W2).cwiseProduct(H.cwiseProduct((1.0 - H.array()).matrix()));
    Eigen::Matrix<double, 10, 2> gW1 = dH.transpose() * Xn;
    Eigen::Matrix<double, 10, 1> gb1 = dH.colwise().sum();
    grad->resize(Mlp::kParamCount);
    int at = 0;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 2; ++j) (*grad)[at++] = gW1(i, j);
    for (int i = 0; i < 10; ++i) (*grad)[at++] = gb1[i];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 10; ++j) (*grad)[at++] = gW2(i, j);
    for (int i = 0; i < 3; ++i) (*grad)[at++] = gb2[i];
  }
  return loss;
}

inline Eigen::VectorXd mlp_pack(const Mlp& m) {
  Eigen::VectorXd v(Mlp::kParamCount);
  int at = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 2; ++j) v[at++] = m.W1(i, j);
  for (int i = 0; i < 10; ++i) v[at++] = m.b1[i];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 10; ++j) v[at++] = m.W2(i, j);
  for (int i = 0; i < 3; ++i) v[at++] = m.b2[i];
  return v;
}

inline void mlp_unpack(const Eigen::VectorXd& v, Mlp& m) {
  int at = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 2; ++j) m.W1(i, j) = v[at++];
  for (int i = 0; i < 10; ++i) m.b1[i] = v[at++];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 10; ++j) m.W2(i, j) = v[at++];
  for (int i = 0; i < 3; ++i) m.b2[i] = v[at++];
}

}  // namespace detail

// Mini-batch gradient descent with momentum and validation early stopping.
// Normalization parameters are fitted on the training split only, then the
// model achieving the best validation MSE is returned in `mlp`.
inline TrainHistory train(Mlp& mlp, const Dataset& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.size() == 0) throw std::invalid_argument("empty dataset");
  if (data.n_train <= 0) throw std::invalid_argument("empty training split");
  detail::WallTimer timer;
  if (cfg.epochs == 0) {
    TrainHistory hist;
    hist.train_time_s = timer.seconds();
    return hist;  // zero-epoch contract: the network is left untouched
  }

  auto train_in = data.inputs.topRows(data.n_train);
  auto train_out = data.outputs.topRows(data.n_train);
  mlp.in_lo = train_in.colwise().minCoeff();
  mlp.in_hi = train_in.colwise().maxCoeff();
  mlp.out_lo = train_out.colwise().minCoeff();
  mlp.out_hi = train_out.colwise().maxCoeff();
  // A constant column would make the min/max map 0/0; widen it to unit
  // half-width so such a target trains to the constant instead of NaN.
  auto widen = [](double& lo, double& hi) {
    if (!(hi - lo > 0)) {
      double mid = 0.5 * (lo + hi);
      lo = mid - 1.0;
      hi = mid + 1.0;
    }
  };
  for (int j = 0; j < 2; ++j) widen(mlp.in_lo[j], mlp.in_hi[j]);
  for (int j = 0; j < 3; ++j) widen(mlp.out_lo[j], mlp.out_hi[j]);

  Eigen::Matrix<double, Eigen::Dynamic, 2> Xn(data.size(), 2);
  Eigen::Matrix<double, Eigen::Dynamic, 3> Yn(data.size(), 3);
  for (int j = 0; j < 2; ++j)
    Xn.col(j) = 2.0 * (data.inputs.col(j).array() - mlp.in_lo[j]) /
                    (mlp.in_hi[j] - mlp.in_lo[j]) - 1.0;
  for (int j = 0; j < 3; ++j)
    Yn.col(j) = 2.0 * (data.outputs.col(j).array() - mlp.out_lo[j]) /
                    (mlp.out_hi[j] - mlp.out_lo[j]) - 1.0;

  auto Xtr = Xn.topRows(data.n_train);
  auto Ytr = Yn.topRows(data.n_train);
  auto Xva = Xn.middleRows(data.n_train, data.n_val);
  auto Yva = Yn.middleRows(data.n_train, data.n_val);

  Rng rng(cfg.seed);
  TrainHistory hist;
  Eigen::VectorXd vel = Eigen::VectorXd::Zero(Mlp::kParamCount);
  Eigen::VectorXd params = detail::mlp_pack(mlp);
  Mlp best = mlp;
  double best_val = data.n_val > 0 ? detail::mlp_mse(mlp, Xva, Yva) : 0.0;
  int stall = 0;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(data.n_train));
  for (Eigen::Index i = 0; i < data.n_train; ++i)
    order[static_cast<std::size_t>(i)] = i;

  Eigen::Matrix<double, Eigen::Dynamic, 2> bx(cfg.batch_size, 2);
  Eigen::Matrix<double, Eigen::Dynamic, 3> by(cfg.batch_size, 3);
  Eigen::VectorXd grad;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fisher-Yates shuffle from the seeded stream keeps runs reproducible.
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.index(i)]);
    for (Eigen::Index start = 0; start < data.n_train; start += cfg.batch_size) {
      Eigen::Index len = std::min<Eigen::Index>(cfg.batch_size,
                                                data.n_train - start);
      bx.resize(len, 2);
      by.resize(len, 3);
      for (Eigen::Index r = 0; r < len; ++r) {
        bx.row(r) = Xtr.row(order[static_cast<std::size_t>(start + r)]);
        by.row(r) = Ytr.row(order[static_cast<std::size_t>(start + r)]);
      }
      detail::mlp_mse(mlp, bx, by, &grad);
      vel = cfg.momentum * vel - cfg.learning_rate * grad;
      params += vel;
      detail::mlp_unpack(params, mlp);
    }
    double train_loss = detail::mlp_mse(mlp, Xtr, Ytr);
    if (!std::isfinite(train_loss))
      throw std::runtime_error(
          "training diverged (loss not finite) at epoch " +
          std::to_string(epoch) + "; lower the learning rate");
    hist.train_mse.push_back(train_loss);
    ++hist.epochs_run;
    if (data.n_val > 0) {
      double val = detail::mlp_mse(mlp, Xva, Yva);
      if (val < best_val) {
        best_val = val;
        best = mlp;
        stall = 0;
      } else {
        ++stall;
      }
      hist.val_mse_best.push_back(best_val);
      if (cfg.patience > 0 && stall >= cfg.patience) break;
    }
  }
  if (data.n_val > 0 && cfg.epochs > 0) mlp = best;
  hist.train_time_s = timer.seconds();
  return hist;
}

// Inference over a target list under the uniform solver contract.
inline SolveResult nn_solve(const SolveRequest& req, const Mlp& mlp,
                            bool clamp_to_range = false) {
  req.validate();
  const KinematicModel m = req.effective_model();
  detail::WallTimer timer;
  SolveResult res;
  for (const auto& target : req.targets) {
    JointVector q = mlp.infer(target);
    if (clamp_to_range)
      for (int i = 0; i < 3; ++i)
        q[i] = std::clamp(q[i], m.joint_limits[i].lo, m.joint_limits[i].hi);
    auto p = forward_kinematics(m, q);
    bool ok = std::hypot(p.x - target.x, p.y - target.y) <
              req.options.position_tolerance;
    detail::record(res, m, q, target, 0, ok);
  }
  res.elapsed_s = timer.seconds();
  return res;
}

}  // namespace legik
