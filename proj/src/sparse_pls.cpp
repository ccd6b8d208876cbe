#include "bootpls/sparse_pls.h"

#include "bootpls/bootstrap.h"
#include "bootpls/errors.h"
#include "bootpls/folds.h"
#include "bootpls/parallel.h"
#include "bootpls/seeding.h"
#include "bootpls/stopping.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bootpls {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Strict "better" ordering for (mse, k, eta, grid position).
bool better(double mse, int k, double eta, std::size_t pos, double best_mse, int best_k, double best_eta,
            std::size_t best_pos) {
  if (mse != best_mse) return mse < best_mse;
  if (k != best_k) return k < best_k;
  if (eta != best_eta) return eta < best_eta;
  return pos < best_pos;
}
}  // namespace

void validate(const SparsityConfig& cfg) {
  require(!cfg.eta_grid.empty(), "eta grid must not be empty");
  for (double e : cfg.eta_grid) require(e >= 0.0 && e < 1.0, "eta values must lie in [0, 1)");
  require(cfg.k_max >= 1, "k_max must be positive");
  require(cfg.folds >= 2, "at least two folds are required");
}

Eigen::VectorXd sparse_weight(const Eigen::VectorXd& z, double eta) {
  require(eta >= 0.0 && eta < 1.0, "eta must lie in [0, 1)");
  const double zmax = z.cwiseAbs().maxCoeff();
  if (!(zmax > 0.0)) fail(ErrorKind::DegenerateDirection, "sparse_weight: zero direction");
  const double threshold = eta * zmax;
  Eigen::VectorXd w(z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    const double excess = std::abs(z(j)) - threshold;
    w(j) = excess > 0.0 ? std::copysign(excess, z(j)) : 0.0;
  }
  const double norm = w.norm();
  if (!(norm > 0.0)) fail(ErrorKind::EmptySupport, "sparse_weight: threshold removed every predictor");
  return w / norm;
}

SplsPath::SplsPath(const Dataset& data, double eta)
    : data_(data), eta_(eta), beta_std_(Eigen::VectorXd::Zero(data.p())) {
  require(eta >= 0.0 && eta < 1.0, "eta must lie in [0, 1)");
  scale_ = data_.x.norm() * data_.y.norm();
}

bool SplsPath::extend() {
  const int k = size() + 1;
  const Eigen::VectorXd resid = data_.y - data_.x * beta_std_;
  const Eigen::VectorXd z = data_.x.transpose() * resid;
  if (!(z.norm() > kDegenerateTol * scale_)) return false;
  const Eigen::VectorXd w = sparse_weight(z, eta_);

  std::vector<int> active = active_;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (w(j) != 0.0) active.push_back(static_cast<int>(j));
  }
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());

  const Dataset sub = data_.columns(active);
  PlsPath inner(sub);
  const int k_eff = std::min<int>(k, static_cast<int>(active.size()));
  if (!inner.extend_to(k_eff)) return false;

  SparseFit fit;
  fit.active = active;
  fit.inner = inner.fit(k_eff);
  fit.eta = eta_;
  fit.k = k_eff;
  Eigen::VectorXd beta_std = Eigen::VectorXd::Zero(data_.p());
  for (std::size_t a = 0; a < active.size(); ++a) beta_std(active[a]) = fit.inner.beta_std(static_cast<Eigen::Index>(a));
  to_raw_scale(beta_std, data_.col_means, data_.col_sds, data_.y_mean, data_.scaled, fit.beta, fit.intercept);

  beta_std_ = beta_std;
  active_ = std::move(active);
  fits_.push_back(std::move(fit));
  return true;
}

bool SplsPath::extend_to(int k) {
  while (size() < k) {
    if (!extend()) return false;
  }
  return true;
}

SparseFit spls_fit(const Dataset& data, double eta, int k) {
  require(k >= 1, "spls_fit: K must be positive");
  if (k > std::min<Eigen::Index>(data.n() - 1, data.p())) {
    fail(ErrorKind::TooManyComponents, "K exceeds min(n-1, p)");
  }
  SplsPath path(data, eta);
  if (!path.extend_to(k)) {
    fail(ErrorKind::TooManyComponents, "sparse PLS stopped after " + std::to_string(path.size()) + " steps");
  }
  return path.fit(k);
}

Eigen::VectorXd predict(const SparseFit& fit, const Eigen::MatrixXd& x_new) {
  if (x_new.cols() != fit.beta.size()) fail(ErrorKind::DimensionMismatch, "predict: column count mismatch");
  return (x_new * fit.beta).array() + fit.intercept;
}

namespace {

// Held-out MSE per k (1..k_max) for one training/test split; +inf beyond
// the steps the path could build.
Eigen::VectorXd fold_errors(const Dataset& data, const FoldSplit& split, double eta, int k_max) {
  Eigen::VectorXd out = Eigen::VectorXd::Constant(k_max, kInf);
  try {
    SplsPath path(data.rows(split.train), eta);
    path.extend_to(k_max);
    const Eigen::MatrixXd xt = select_rows(data.raw_x, split.test);
    const Eigen::VectorXd yt = select_rows(data.raw_y, split.test);
    for (int k = 1; k <= path.size(); ++k) {
      out(k - 1) = (yt - predict(path.fit(k), xt)).squaredNorm() / static_cast<double>(split.test.size());
    }
  } catch (const Error&) {
  }
  return out;
}

}  // namespace

TuneCvResult tune_cv(const Dataset& data, const SparsityConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  const int n = static_cast<int>(data.n());
  const auto labels = fold_assignment(n, cfg.folds, seed);
  const int n_eta = static_cast<int>(cfg.eta_grid.size());
  const int k_max = cfg.k_max;

  std::vector<FoldSplit> splits;
  for (int f = 0; f < cfg.folds; ++f) splits.push_back(fold_split(labels, f));

  // errors[f * n_eta + e] holds the per-k held-out MSE.
  std::vector<Eigen::VectorXd> errors(static_cast<std::size_t>(cfg.folds * n_eta));
  parallel_for(errors.size(), [&](std::size_t cell) {
    const int f = static_cast<int>(cell) / n_eta;
    const int e = static_cast<int>(cell) % n_eta;
    errors[cell] = fold_errors(data, splits[static_cast<std::size_t>(f)], cfg.eta_grid[static_cast<std::size_t>(e)], k_max);
  });

  TuneCvResult res;
  double best_mse = kInf;
  int best_k = std::numeric_limits<int>::max();
  double best_eta = kInf;
  std::size_t best_pos = std::numeric_limits<std::size_t>::max();
  for (int e = 0; e < n_eta; ++e) {
    for (int k = 1; k <= k_max; ++k) {
      double sum = 0.0;
      for (int f = 0; f < cfg.folds; ++f) sum += errors[static_cast<std::size_t>(f * n_eta + e)](k - 1);
      const double mse = std::isfinite(sum) ? sum / cfg.folds : kInf;
      const double eta = cfg.eta_grid[static_cast<std::size_t>(e)];
      res.table.push_back({eta, k, mse});
      ++res.cv_evaluations;
      if (std::isfinite(mse) && better(mse, k, eta, static_cast<std::size_t>(e), best_mse, best_k, best_eta, best_pos)) {
        best_mse = mse;
        best_k = k;
        best_eta = eta;
        best_pos = static_cast<std::size_t>(e);
      }
    }
  }
  if (!std::isfinite(best_mse)) fail(ErrorKind::TooManyComponents, "no grid cell could be evaluated");
  res.eta = best_eta;
  res.k = best_k;
  return res;
}

double spls_cv_mse(const Dataset& data, double eta, int k, const std::vector<int>& folds) {
  const int n_folds = *std::max_element(folds.begin(), folds.end()) + 1;
  double sum = 0.0;
  for (int f = 0; f < n_folds; ++f) {
    const FoldSplit split = fold_split(folds, f);
    if (split.test.empty()) continue;
    sum += fold_errors(data, split, eta, k)(k - 1);
  }
  return std::isfinite(sum) ? sum / n_folds : kInf;
}

TuneBootResult tune_bootyt(const Dataset& data, const SparsityConfig& cfg, int replicates, double alpha,
                           std::uint64_t seed, bool jackknife) {
  validate(cfg);
  require(replicates >= 100, "tune_bootyt: R must be at least 100");
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  const int n = static_cast<int>(data.n());
  const int n_eta = static_cast<int>(cfg.eta_grid.size());

  std::vector<EtaOutcome> outcomes(static_cast<std::size_t>(n_eta));
  parallel_for(outcomes.size(), [&](std::size_t e) {
    EtaOutcome& out = outcomes[e];
    out.eta = cfg.eta_grid[e];
    const ResamplePlan plan = resample_pairs(n, replicates, derive_seed(seed, Stream::Eta, e));
    SplsPath path(data, out.eta);
    const int k_max = std::min<int>(cfg.k_max, static_cast<int>(std::min<Eigen::Index>(data.n() - 1, data.p())));
    out.k_opt = k_max;
    out.reason = "reached k_max";
    for (int k = 1; k <= k_max; ++k) {
      if (!path.extend_to(k) || path.fit(k).k < k) {
        out.k_opt = k - 1;
        out.reason = "component " + std::to_string(k) + " unavailable";
        break;
      }
      ComponentTest test;
      try {
        test = test_components(data.y, path.fit(k).inner.scores, plan, alpha, ComponentRegression::Linear,
                               jackknife, ExecPolicy::Serial);
      } catch (const Error& err) {
        if (err.kind() == ErrorKind::TooFewReplicates) throw;
        out.k_opt = k - 1;
        out.reason = std::string("component test failed: ") + err.what();
        break;
      }
      out.ci_tests += k;
      if (!test.all_significant()) {
        out.k_opt = k - 1;
        out.reason = "interval covers zero at k = " + std::to_string(k);
        break;
      }
    }
    if (out.k_opt == 0) out.reason = "dropped: " + out.reason;
  });

  const auto labels = fold_assignment(n, cfg.folds, seed);
  TuneBootResult res;
  double best_mse = kInf;
  int best_k = std::numeric_limits<int>::max();
  double best_eta = kInf;
  std::size_t best_pos = std::numeric_limits<std::size_t>::max();
  for (std::size_t e = 0; e < outcomes.size(); ++e) {
    EtaOutcome& out = outcomes[e];
    if (out.k_opt == 0) {
      out.cv_mse = kInf;
      continue;
    }
    out.cv_mse = spls_cv_mse(data, out.eta, out.k_opt, labels);
    ++res.cv_evaluations;
    if (std::isfinite(out.cv_mse) && better(out.cv_mse, out.k_opt, out.eta, e, best_mse, best_k, best_eta, best_pos)) {
      best_mse = out.cv_mse;
      best_k = out.k_opt;
      best_eta = out.eta;
      best_pos = e;
    }
  }
  res.per_eta = std::move(outcomes);
  if (!std::isfinite(best_mse)) fail(ErrorKind::NoValidEta, "every eta selected zero components");
  res.eta = best_eta;
  res.k = best_k;
  return res;
}

}  // namespace bootpls
