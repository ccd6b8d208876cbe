#include "bootpls/selection.h"

#include "bootpls/errors.h"
#include "bootpls/seeding.h"

#include <algorithm>
#include <limits>
#include <optional>

namespace bootpls {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Estimate {
  int k = 0;
  Eigen::VectorXd beta;
};

// Criterion choice of K and the K-component coefficients on one dataset.
// `exact_k` > 0 demands exactly that many components.
std::optional<Estimate> estimate(const Dataset& data, const ComponentModel& model,
                                 const ComponentCriterion& criterion, int exact_k, std::uint64_t seed) {
  try {
    auto path = model.start(data);
    Estimate est;
    est.k = criterion.select(data, *path, seed);
    if (exact_k > 0 && est.k != exact_k) return std::nullopt;
    if (est.k > 0 && !path->usable(est.k)) return std::nullopt;
    est.beta = est.k == 0 ? Eigen::VectorXd::Zero(data.p()) : path->coefficients(est.k);
    if (!est.beta.allFinite()) return std::nullopt;
    return est;
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Rows of [beta', K] per replicate; NaN rows mark excluded replicates.
template <class Sample>
Eigen::MatrixXd replicate_matrix(int count, const Dataset& data, const ComponentModel& model,
                                 const ComponentCriterion& criterion, int exact_k,
                                 const Eigen::VectorXd& reference, Stream stream, std::uint64_t seed,
                                 ExecPolicy policy, Sample&& sample) {
  const Eigen::Index p = data.p();
  return map_replicates(
      count, p + 1,
      [&](int r) -> Eigen::VectorXd {
        Eigen::VectorXd row = Eigen::VectorXd::Constant(p + 1, kNaN);
        std::optional<Estimate> est;
        try {
          est = estimate(sample(r), model, criterion, exact_k,
                         derive_seed(seed, stream, static_cast<std::uint64_t>(r)));
        } catch (const Error&) {
          est.reset();
        }
        if (!est) return row;
        if (est->k > 0 && !model.keep(est->beta, reference)) return row;
        row.head(p) = est->beta;
        row(p) = est->k;
        return row;
      },
      policy);
}

SelectionResult run_selection(const Dataset& data, const ComponentModel& model,
                              const ComponentCriterion& criterion, int exact_k, const SelectionConfig& cfg,
                              std::uint64_t seed) {
  require(cfg.replicates >= 1, "R must be positive");
  require(cfg.alpha > 0.0 && cfg.alpha < 1.0, "alpha must lie in (0, 1)");
  const int n = static_cast<int>(data.n());
  const Eigen::Index p = data.p();

  SelectionResult res;
  res.replicates = cfg.replicates;

  const auto original = estimate(data, model, criterion, exact_k, derive_seed(seed, Stream::Original));
  if (!original) {
    fail(exact_k > 0 ? ErrorKind::TooManyComponents : ErrorKind::DegenerateDirection,
         "the model cannot be fitted on the full data");
  }
  res.k_original = original->k;
  res.original_beta = original->beta;

  const ResamplePlan plan = resample_pairs(n, cfg.replicates, seed);
  const Eigen::MatrixXd reps = replicate_matrix(
      cfg.replicates, data, model, criterion, exact_k, original->beta, Stream::Inner, seed, cfg.policy,
      [&](int r) { return data.rows(plan.row(r)); });

  std::optional<Eigen::MatrixXd> jack;
  if (cfg.jackknife) {
    jack = replicate_matrix(n, data, model, criterion, exact_k, original->beta, Stream::Jackknife, seed,
                            cfg.policy, [&](int i) { return data.without_row(i); });
  }

  for (Eigen::Index r = 0; r < reps.rows(); ++r) {
    if (!reps.row(r).allFinite()) {
      ++res.excluded;
    } else {
      ++res.k_histogram[static_cast<int>(reps(r, p))];
    }
  }

  for (Eigen::Index j = 0; j < p; ++j) {
    BootstrapDistribution dist;
    dist.replicates = reps.col(j);
    dist.original = original->beta(j);
    if (jack) dist.jackknife = Eigen::VectorXd(jack->col(j));
    const ConfidenceInterval ci = bca_interval(dist, cfg.alpha);
    res.per_predictor_ci.push_back(ci);
    if (ci.excludes_zero()) res.support.push_back(static_cast<int>(j));
  }

  res.final_fit.beta = Eigen::VectorXd::Zero(p);
  res.final_fit.intercept = data.response().mean();
  if (res.support.empty()) {
    res.status = SelectionStatus::EmptySupport;
    return res;
  }

  const Dataset sub = data.columns(res.support);
  auto path = model.start(sub);
  int k_sel = 0;
  if (exact_k > 0) {
    k_sel = ConstantCriterion(std::min<int>(exact_k, static_cast<int>(res.support.size())))
                .select(sub, *path, derive_seed(seed, Stream::Final));
  } else {
    k_sel = criterion.select(sub, *path, derive_seed(seed, Stream::Final));
  }
  res.final_fit.k = k_sel;
  if (k_sel > 0) {
    const Eigen::VectorXd b = path->coefficients(k_sel);
    for (std::size_t a = 0; a < res.support.size(); ++a) {
      res.final_fit.beta(res.support[a]) = b(static_cast<Eigen::Index>(a));
    }
    res.final_fit.intercept = path->intercept(k_sel);
  }
  return res;
}

}  // namespace

std::string_view to_string(SelectionStatus status) {
  return status == SelectionStatus::Ok ? "ok" : "EmptySupport";
}

SelectionResult dynamic_select(const Dataset& data, const ComponentModel& model,
                               const ComponentCriterion& criterion, const SelectionConfig& cfg,
                               std::uint64_t seed) {
  return run_selection(data, model, criterion, 0, cfg, seed);
}

SelectionResult static_select(const Dataset& data, const ComponentModel& model, int k,
                              const SelectionConfig& cfg, std::uint64_t seed) {
  require(k >= 1, "static_select: K must be positive");
  if (k > std::min<Eigen::Index>(data.n() - 1, data.p())) {
    fail(ErrorKind::TooManyComponents, "K exceeds min(n-1, p)");
  }
  return run_selection(data, model, ConstantCriterion(k), k, cfg, seed);
}

SelectionResult dynamic_select(const Dataset& data, const StoppingConfig& cfg, int replicates, double alpha,
                               std::uint64_t seed) {
  SelectionConfig sc;
  sc.replicates = replicates;
  sc.alpha = alpha;
  sc.jackknife = cfg.jackknife;
  return dynamic_select(data, PlsModel{}, BootYtCriterion(cfg, ComponentRegression::Linear), sc, seed);
}

SelectionResult static_select(const Dataset& data, int k, int replicates, double alpha, std::uint64_t seed) {
  SelectionConfig sc;
  sc.replicates = replicates;
  sc.alpha = alpha;
  return static_select(data, PlsModel{}, k, sc, seed);
}

StabilityReport stability_report(const std::vector<ModelKey>& models) {
  require(!models.empty(), "stability_report: empty result list");
  std::map<std::vector<int>, int> supports;
  std::map<ModelKey, int> keyed;
  for (const auto& m : models) {
    ++supports[m.support];
    ++keyed[m];
  }
  StabilityReport rep;
  rep.distinct_supports = static_cast<int>(supports.size());
  rep.distinct_models = static_cast<int>(keyed.size());
  const double total = static_cast<double>(models.size());

  // std::map iterates in (support, K) order, so the first maximum wins ties.
  int best = 0;
  for (const auto& [support, count] : supports) {
    if (count > best) {
      best = count;
      rep.modal_support = support;
    }
  }
  rep.support_rate = 100.0 * best / total;
  best = 0;
  for (const auto& [key, count] : keyed) {
    if (count > best) {
      best = count;
      rep.modal_model = key;
    }
  }
  rep.model_rate = 100.0 * best / total;
  return rep;
}

StabilityReport stability_report(const std::vector<SelectionResult>& results) {
  std::vector<ModelKey> models;
  models.reserve(results.size());
  for (const auto& r : results) models.push_back({r.support, r.final_fit.k});
  return stability_report(models);
}

}  // namespace bootpls
