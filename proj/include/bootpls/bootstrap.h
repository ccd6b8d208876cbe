#pragma once

#include "bootpls/parallel.h"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace bootpls {

/// R x n matrix of row indices drawn uniformly with replacement.
/// Row r depends only on (seed, r).
struct ResamplePlan {
  int n = 0;
  int replicates = 0;
  std::uint64_t seed = 0;
  std::vector<int> indices;  // row-major, replicates x n

  std::span<const int> row(int r) const {
    return {indices.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(n),
            static_cast<std::size_t>(n)};
  }
};

ResamplePlan resample_pairs(int n, int replicates, std::uint64_t seed);

/// Draws a single replicate's indices; identical to resample_pairs(n, R, seed).row(r).
std::vector<int> resample_row(int n, std::uint64_t seed, int r);

/// Replicate values of a scalar statistic. Non-finite replicates are
/// excluded from interval construction.
struct BootstrapDistribution {
  Eigen::VectorXd replicates;
  double original = 0.0;
  std::optional<Eigen::VectorXd> jackknife;

  int finite_count() const;
};

enum class IntervalMethod { Bca, BcaNoAcceleration, Percentile };

std::string_view to_string(IntervalMethod method);

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  IntervalMethod method = IntervalMethod::Percentile;
  double z0 = 0.0;
  double a = 0.0;
  bool z0_clamped = false;

  bool contains(double v) const { return lo <= v && v <= hi; }
  bool excludes_zero() const { return !contains(0.0); }
};

/// Minimum finite replicates for an interval: max(50, R/2), capped at R.
int min_finite_replicates(int replicates);

/// Linear-interpolation quantile (h = (N-1)q, interpolating between order
/// statistics). `sorted` must be ascending.
double quantile_linear(std::span<const double> sorted, double q);

double normal_cdf(double x);
double normal_quantile(double p);

/// Acceleration from jackknife values; nullopt when the spread is zero.
std::optional<double> jackknife_acceleration(const Eigen::VectorXd& jackknife);

ConfidenceInterval percentile_interval(const BootstrapDistribution& dist, double alpha);

/// Bias-corrected and accelerated interval. Uses a = 0 (method
/// BcaNoAcceleration) when no jackknife is supplied or its spread is zero.
/// The count of replicates below the original is clamped to [1, R-1]
/// before inversion; `z0_clamped` records when that happened.
ConfidenceInterval bca_interval(const BootstrapDistribution& dist, double alpha);

/// Evaluates a vector statistic for replicates [0, R) into an R x dim matrix
/// using indexed writes, so the result does not depend on evaluation order.
template <class Statistic>
Eigen::MatrixXd map_replicates(int replicates, Eigen::Index dim, Statistic&& stat,
                               ExecPolicy policy = default_policy()) {
  Eigen::MatrixXd out(replicates, dim);
  parallel_for(
      static_cast<std::size_t>(replicates),
      [&](std::size_t r) { out.row(static_cast<Eigen::Index>(r)) = stat(static_cast<int>(r)).transpose(); },
      policy);
  return out;
}

}  // namespace bootpls
