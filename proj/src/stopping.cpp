#include "bootpls/stopping.h"

#include "bootpls/errors.h"
#include "bootpls/folds.h"
#include "bootpls/logistic.h"
#include "bootpls/pls.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bootpls {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kGuardRatio = 1e4;

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& scores) {
  Eigen::MatrixXd d(scores.rows(), scores.cols() + 1);
  d.col(0).setOnes();
  d.rightCols(scores.cols()) = scores;
  return d;
}

// Least squares from normal equations; nullopt when the Gram matrix is
// numerically singular (e.g. a resample with too few distinct rows).
std::optional<Eigen::VectorXd> solve_normal(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success) return std::nullopt;
  const Eigen::VectorXd dvec = ldlt.vectorD();
  const double dmax = dvec.cwiseAbs().maxCoeff();
  if (!(dvec.minCoeff() > 1e-12 * dmax)) return std::nullopt;
  Eigen::VectorXd sol = ldlt.solve(rhs);
  if (!sol.allFinite()) return std::nullopt;
  return sol;
}

bool guarded_out(const Eigen::VectorXd& coef, const Eigen::VectorXd& reference) {
  for (Eigen::Index j = 0; j < coef.size(); ++j) {
    if (reference(j) != 0.0 && std::abs(coef(j)) > kGuardRatio * std::abs(reference(j))) return true;
  }
  return false;
}

Eigen::VectorXd logistic_replicate(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& reference) {
  try {
    const LogisticFit f = fit_logistic(design, y, &reference);
    if (!f.converged || !f.coef.allFinite() || guarded_out(f.coef, reference)) {
      return Eigen::VectorXd::Constant(design.cols(), kNaN);
    }
    return f.coef;
  } catch (const Error&) {
    return Eigen::VectorXd::Constant(design.cols(), kNaN);
  }
}

}  // namespace

bool ComponentTest::all_significant() const {
  return std::all_of(intervals.begin(), intervals.end(),
                     [](const ConfidenceInterval& ci) { return ci.excludes_zero(); });
}

ComponentTest test_components(const Eigen::VectorXd& y, const Eigen::MatrixXd& scores,
                              const ResamplePlan& plan, double alpha, ComponentRegression regression,
                              bool jackknife, ExecPolicy policy) {
  const Eigen::Index n = scores.rows();
  const Eigen::Index k = scores.cols();
  if (y.size() != n || plan.n != n) fail(ErrorKind::DimensionMismatch, "test_components: size mismatch");
  require(k >= 1, "test_components: at least one component is required");

  const Eigen::MatrixXd design = with_intercept(scores);
  const Eigen::Index q = design.cols();

  Eigen::VectorXd original;
  Eigen::MatrixXd reps;
  std::optional<Eigen::MatrixXd> jack;

  if (regression == ComponentRegression::Linear) {
    const Eigen::MatrixXd gram = design.transpose() * design;
    const Eigen::VectorXd rhs = design.transpose() * y;
    auto sol = solve_normal(gram, rhs);
    if (!sol) fail(ErrorKind::DegenerateDirection, "component scores are collinear");
    original = *sol;

    reps = map_replicates(
        plan.replicates, q,
        [&](int r) -> Eigen::VectorXd {
          const auto idx = plan.row(r);
          const Eigen::MatrixXd d = select_rows(design, idx);
          const Eigen::VectorXd yy = select_rows(y, idx);
          auto s = solve_normal(d.transpose() * d, d.transpose() * yy);
          return s ? *s : Eigen::VectorXd::Constant(q, kNaN);
        },
        policy);

    if (jackknife) {
      jack = map_replicates(
          static_cast<int>(n), q,
          [&](int i) -> Eigen::VectorXd {
            const Eigen::VectorXd di = design.row(i).transpose();
            auto s = solve_normal(gram - di * di.transpose(), rhs - di * y(i));
            return s ? *s : Eigen::VectorXd::Constant(q, kNaN);
          },
          policy);
    }
  } else {
    original = fit_logistic(design, y).coef;
    reps = map_replicates(
        plan.replicates, q,
        [&](int r) -> Eigen::VectorXd {
          const auto idx = plan.row(r);
          return logistic_replicate(select_rows(design, idx), select_rows(y, idx), original);
        },
        policy);
    if (jackknife) {
      jack = map_replicates(
          static_cast<int>(n), q,
          [&](int i) -> Eigen::VectorXd {
            std::vector<int> idx;
            idx.reserve(static_cast<std::size_t>(n - 1));
            for (Eigen::Index r = 0; r < n; ++r) {
              if (r != i) idx.push_back(static_cast<int>(r));
            }
            return logistic_replicate(select_rows(design, idx), select_rows(y, idx), original);
          },
          policy);
    }
  }

  ComponentTest out;
  for (Eigen::Index r = 0; r < reps.rows(); ++r) {
    if (!reps.row(r).allFinite()) ++out.excluded;
  }
  for (Eigen::Index j = 1; j < q; ++j) {
    BootstrapDistribution dist;
    dist.replicates = reps.col(j);
    dist.original = original(j);
    if (jack) dist.jackknife = Eigen::VectorXd(jack->col(j));
    out.intervals.push_back(bca_interval(dist, alpha));
  }
  return out;
}

LinearComponentTester::LinearComponentTester(const Eigen::VectorXd& y, const ResamplePlan& plan,
                                             int max_components, bool jackknife)
    : y_(y), replicates_(plan.replicates), jackknife_(jackknife) {
  const Eigen::Index n = y.size();
  if (plan.n != n) fail(ErrorKind::DimensionMismatch, "resample plan and response sizes differ");
  require(max_components >= 1, "at least one component is required");
  const int qmax = max_components + 1;
  counts_ = Eigen::MatrixXd::Zero(replicates_, n);
  for (int r = 0; r < replicates_; ++r) {
    for (int i : plan.row(r)) counts_(r, i) += 1.0;
  }
  design_.resize(n, qmax);
  gram_.assign(static_cast<std::size_t>(replicates_), Eigen::MatrixXd(qmax, qmax));
  rhs_.resize(replicates_, qmax);
  add_component(Eigen::VectorXd::Ones(n));
}

void LinearComponentTester::add_component(const Eigen::VectorXd& t) {
  if (t.size() != y_.size()) fail(ErrorKind::DimensionMismatch, "score length differs from response");
  require(q_ < design_.cols(), "component capacity exceeded");
  design_.col(q_) = t;
  const int q = q_ + 1;
  const Eigen::MatrixXd cross = counts_ * (design_.leftCols(q).array().colwise() * t.array()).matrix();
  const Eigen::VectorXd ty = counts_ * t.cwiseProduct(y_);
  for (int r = 0; r < replicates_; ++r) {
    Eigen::MatrixXd& g = gram_[static_cast<std::size_t>(r)];
    g.row(q_).head(q) = cross.row(r);
    g.col(q_).head(q) = cross.row(r).transpose();
  }
  rhs_.col(q_) = ty;
  q_ = q;
}

ComponentTest LinearComponentTester::test(double alpha, ExecPolicy policy) const {
  require(q_ >= 2, "test: no component has been added");
  const int q = q_;
  const Eigen::Index n = y_.size();
  const Eigen::MatrixXd design = design_.leftCols(q);
  const Eigen::MatrixXd gram = design.transpose() * design;
  const Eigen::VectorXd rhs = design.transpose() * y_;
  const auto sol = solve_normal(gram, rhs);
  if (!sol) fail(ErrorKind::DegenerateDirection, "component scores are collinear");

  const Eigen::MatrixXd reps = map_replicates(
      replicates_, q,
      [&](int r) -> Eigen::VectorXd {
        auto s = solve_normal(gram_[static_cast<std::size_t>(r)].topLeftCorner(q, q),
                              rhs_.row(r).head(q).transpose());
        return s ? *s : Eigen::VectorXd::Constant(q, kNaN);
      },
      policy);

  std::optional<Eigen::MatrixXd> jack;
  if (jackknife_) {
    jack = map_replicates(
        static_cast<int>(n), q,
        [&](int i) -> Eigen::VectorXd {
          const Eigen::VectorXd di = design.row(i).transpose();
          auto s = solve_normal(gram - di * di.transpose(), rhs - di * y_(i));
          return s ? *s : Eigen::VectorXd::Constant(q, kNaN);
        },
        policy);
  }

  ComponentTest out;
  for (Eigen::Index r = 0; r < reps.rows(); ++r) {
    if (!reps.row(r).allFinite()) ++out.excluded;
  }
  for (Eigen::Index j = 1; j < q; ++j) {
    BootstrapDistribution dist;
    dist.replicates = reps.col(j);
    dist.original = (*sol)(j);
    if (jack) dist.jackknife = Eigen::VectorXd(jack->col(j));
    out.intervals.push_back(bca_interval(dist, alpha));
  }
  return out;
}

BootYtSelection bootyt_select_k(ComponentPath& path, const Eigen::VectorXd& y,
                                const StoppingConfig& cfg, ComponentRegression regression,
                                std::uint64_t seed) {
  require(cfg.k_max >= 1, "k_max must be positive");
  require(cfg.replicates >= 1, "R must be positive");
  require(cfg.alpha > 0.0 && cfg.alpha < 1.0, "alpha must lie in (0, 1)");

  BootYtSelection sel;
  const int n = static_cast<int>(y.size());
  const ResamplePlan plan = resample_pairs(n, cfg.replicates, seed);
  const int k_max = std::min(cfg.k_max, path.max_components());
  std::optional<LinearComponentTester> linear;
  if (regression == ComponentRegression::Linear && k_max >= 1) linear.emplace(y, plan, k_max, cfg.jackknife);

  for (int k = 1; k <= k_max; ++k) {
    if (!path.extend_to(k)) {
      sel.k = k - 1;
      sel.stop_reason = "component " + std::to_string(k) + " unavailable";
      return sel;
    }
    ComponentTest test;
    try {
      if (linear) {
        linear->add_component(path.scores().col(k - 1));
        test = linear->test(cfg.alpha);
      } else {
        test = test_components(y, path.scores().leftCols(k), plan, cfg.alpha, regression, cfg.jackknife);
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::TooFewReplicates) throw;
      sel.k = k - 1;
      sel.stop_reason = std::string("component test failed: ") + e.what();
      return sel;
    }
    sel.ci_tests += k;
    for (int j = 0; j < k; ++j) sel.trace.push_back({k, j + 1, test.intervals[static_cast<std::size_t>(j)]});
    if (!test.all_significant()) {
      sel.k = k - 1;
      sel.stop_reason = "interval covers zero at k = " + std::to_string(k);
      return sel;
    }
  }
  sel.k = k_max;
  sel.stop_reason = "reached k_max";
  return sel;
}

BootYtSelection bootyt_select_k(const Dataset& data, const StoppingConfig& cfg, std::uint64_t seed) {
  PlsComponentPath path(data);
  return bootyt_select_k(path, data.y, cfg, ComponentRegression::Linear, seed);
}

Q2Selection q2_select_k(const Dataset& data, const StoppingConfig& cfg, std::uint64_t seed) {
  require(cfg.k_max >= 1, "k_max must be positive");
  const int n = static_cast<int>(data.n());
  const auto labels = fold_assignment(n, cfg.folds, seed);

  PlsPath full(data);
  const int k_max = std::min(cfg.k_max, full.max_components());
  full.extend_to(k_max);
  int k_avail = full.size();

  // press(k-1) accumulates squared held-out errors of the k-component model.
  Eigen::VectorXd press = Eigen::VectorXd::Zero(k_avail);
  for (int f = 0; f < cfg.folds; ++f) {
    const FoldSplit split = fold_split(labels, f);
    if (split.test.empty()) continue;
    int fold_avail = 0;
    try {
      PlsPath path(data.rows(split.train));
      path.extend_to(k_avail);
      fold_avail = path.size();
      const Eigen::MatrixXd xt = select_rows(data.raw_x, split.test);
      const Eigen::VectorXd yt = select_rows(data.raw_y, split.test);
      for (int k = 1; k <= fold_avail; ++k) press(k - 1) += (yt - predict(path.fit(k), xt)).squaredNorm();
    } catch (const Error&) {
      fold_avail = 0;
    }
    k_avail = std::min(k_avail, fold_avail);
  }

  Q2Selection sel;
  sel.k = 0;
  double rss_prev = data.y.squaredNorm();
  for (int k = 1; k <= k_avail; ++k) {
    const double q2 = 1.0 - press(k - 1) / rss_prev;
    sel.q2.push_back(q2);
    sel.press.push_back(press(k - 1));
    if (!(q2 >= cfg.q2_threshold)) break;
    sel.k = k;
    rss_prev = (data.y - data.x * full.beta_std(k)).squaredNorm();
  }
  if (sel.k == 0) {
    sel.k = 1;
    sel.forced = true;
  }
  return sel;
}

int BootYtCriterion::select(const Dataset& data, ComponentPath& path, std::uint64_t seed) const {
  const Eigen::VectorXd y = regression_ == ComponentRegression::Logistic ? data.response() : data.y;
  return bootyt_select_k(path, y, cfg_, regression_, seed).k;
}

int Q2Criterion::select(const Dataset& data, ComponentPath& path, std::uint64_t seed) const {
  const int k = q2_select_k(data, cfg_, seed).k;
  path.extend_to(k);
  return std::min(k, path.size());
}

int ConstantCriterion::select(const Dataset&, ComponentPath& path, std::uint64_t) const {
  path.extend_to(k_);
  return std::min(k_, path.size());
}

}  // namespace bootpls
