#include "bootpls/bootstrap.h"

#include "bootpls/errors.h"
#include "bootpls/seeding.h"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bootpls {

std::string_view to_string(IntervalMethod method) {
  switch (method) {
    case IntervalMethod::Bca: return "BCa";
    case IntervalMethod::BcaNoAcceleration: return "BCa(a=0)";
    case IntervalMethod::Percentile: return "percentile";
  }
  return "unknown";
}

std::vector<int> resample_row(int n, std::uint64_t seed, int r) {
  Rng rng(derive_seed(seed, Stream::Outer, static_cast<std::uint64_t>(r)));
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<int> row(static_cast<std::size_t>(n));
  for (int& v : row) v = pick(rng);
  return row;
}

ResamplePlan resample_pairs(int n, int replicates, std::uint64_t seed) {
  require(n >= 2, "resample_pairs: n must be at least 2");
  require(replicates >= 1, "resample_pairs: R must be positive");
  ResamplePlan plan;
  plan.n = n;
  plan.replicates = replicates;
  plan.seed = seed;
  plan.indices.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(replicates));
  for (int r = 0; r < replicates; ++r) {
    const auto row = resample_row(n, seed, r);
    std::copy(row.begin(), row.end(), plan.indices.begin() + static_cast<std::ptrdiff_t>(r) * n);
  }
  return plan;
}

int BootstrapDistribution::finite_count() const {
  return static_cast<int>(replicates.array().isFinite().count());
}

int min_finite_replicates(int replicates) {
  const int half = (replicates + 1) / 2;
  return std::min(replicates, std::max(50, half));
}

double quantile_linear(std::span<const double> sorted, double q) {
  require(!sorted.empty(), "quantile of an empty sample");
  q = std::clamp(q, 0.0, 1.0);
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

std::optional<double> jackknife_acceleration(const Eigen::VectorXd& jackknife) {
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(jackknife.size()));
  for (double v : jackknife) {
    if (std::isfinite(v)) vals.push_back(v);
  }
  if (vals.size() < 2) return std::nullopt;
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= static_cast<double>(vals.size());
  double s2 = 0.0, s3 = 0.0;
  for (double v : vals) {
    const double d = mean - v;
    s2 += d * d;
    s3 += d * d * d;
  }
  const double denom = 6.0 * std::pow(s2, 1.5);
  if (!(denom > 0.0) || !std::isfinite(denom)) return std::nullopt;
  return s3 / denom;
}

namespace {

std::vector<double> sorted_finite(const BootstrapDistribution& dist, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(dist.replicates.size()));
  for (double v : dist.replicates) {
    if (std::isfinite(v)) vals.push_back(v);
  }
  const int need = min_finite_replicates(static_cast<int>(dist.replicates.size()));
  if (vals.empty() || static_cast<int>(vals.size()) < need) {
    fail(ErrorKind::TooFewReplicates, std::to_string(vals.size()) + " finite replicates, " +
                                          std::to_string(need) + " required");
  }
  std::sort(vals.begin(), vals.end());
  return vals;
}

}  // namespace

ConfidenceInterval percentile_interval(const BootstrapDistribution& dist, double alpha) {
  const auto vals = sorted_finite(dist, alpha);
  ConfidenceInterval ci;
  ci.level = 1.0 - alpha;
  ci.method = IntervalMethod::Percentile;
  ci.lo = quantile_linear(vals, alpha / 2.0);
  ci.hi = quantile_linear(vals, 1.0 - alpha / 2.0);
  return ci;
}

ConfidenceInterval bca_interval(const BootstrapDistribution& dist, double alpha) {
  const auto vals = sorted_finite(dist, alpha);
  const int rf = static_cast<int>(vals.size());

  ConfidenceInterval ci;
  ci.level = 1.0 - alpha;

  int below = static_cast<int>(std::lower_bound(vals.begin(), vals.end(), dist.original) - vals.begin());
  if (rf >= 2) {
    const int clamped = std::clamp(below, 1, rf - 1);
    ci.z0_clamped = clamped != below;
    below = clamped;
  }
  ci.z0 = normal_quantile(static_cast<double>(below) / static_cast<double>(rf));

  std::optional<double> acc;
  if (dist.jackknife) acc = jackknife_acceleration(*dist.jackknife);
  ci.a = acc.value_or(0.0);
  ci.method = acc ? IntervalMethod::Bca : IntervalMethod::BcaNoAcceleration;

  double q_lo = alpha / 2.0;
  double q_hi = 1.0 - alpha / 2.0;
  if (ci.z0 != 0.0 || ci.a != 0.0) {
    auto adjust = [&](double z) {
      const double s = ci.z0 + z;
      return normal_cdf(ci.z0 + s / (1.0 - ci.a * s));
    };
    const double adj_lo = adjust(normal_quantile(q_lo));
    const double adj_hi = adjust(normal_quantile(q_hi));
    if (!std::isfinite(adj_lo) || !std::isfinite(adj_hi)) {
      ci.method = IntervalMethod::Percentile;
    } else {
      q_lo = adj_lo;
      q_hi = adj_hi;
    }
  }
  ci.lo = quantile_linear(vals, q_lo);
  ci.hi = quantile_linear(vals, q_hi);
  if (ci.lo > ci.hi) std::swap(ci.lo, ci.hi);
  return ci;
}

}  // namespace bootpls
