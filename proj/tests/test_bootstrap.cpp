#include "bootpls/bootstrap.h"
#include "bootpls/errors.h"

#include "helpers.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace bootpls;

TEST(ResamplePairs, Deterministic) {
  const ResamplePlan a = resample_pairs(17, 30, 99);
  const ResamplePlan b = resample_pairs(17, 30, 99);
  EXPECT_EQ(a.indices, b.indices);
  EXPECT_NE(a.indices, resample_pairs(17, 30, 100).indices);
  const auto row = resample_row(17, 99, 12);
  EXPECT_TRUE(std::equal(row.begin(), row.end(), a.row(12).begin()));
  // a longer plan extends a shorter one
  const ResamplePlan longer = resample_pairs(17, 60, 99);
  EXPECT_TRUE(std::equal(a.indices.begin(), a.indices.end(), longer.indices.begin()));
}

TEST(ResamplePairs, RejectsSingleObservation) {
  EXPECT_THROW(resample_pairs(1, 10, 1), Error);
}

TEST(ResamplePairs, UniformIndexFrequency) {
  const int n = 20, r = 5000;
  const ResamplePlan plan = resample_pairs(n, r, 5);
  const double draws = static_cast<double>(n) * r;
  const double hits = static_cast<double>(std::count(plan.indices.begin(), plan.indices.end(), 0));
  const double p = 1.0 / n;
  const double sd = std::sqrt(draws * p * (1.0 - p));
  EXPECT_LT(std::abs(hits - draws * p), 3.0 * sd);
}

TEST(Quantile, LinearInterpolation) {
  const std::vector<double> v{1.0, 2.0, 3.0};
  EXPECT_DOUBLE_EQ(quantile_linear(v, 0.25), 1.5);
  EXPECT_DOUBLE_EQ(quantile_linear(v, 0.75), 2.5);
  EXPECT_DOUBLE_EQ(quantile_linear(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_linear(v, 1.0), 3.0);
}

TEST(Percentile, HandExamples) {
  BootstrapDistribution d;
  d.replicates = Eigen::VectorXd::LinSpaced(3, 1.0, 3.0);
  d.original = 2.0;
  // three replicates need min(R, 50) = 3 finite values
  const auto ci = percentile_interval(d, 0.5);
  EXPECT_DOUBLE_EQ(ci.lo, 1.5);
  EXPECT_DOUBLE_EQ(ci.hi, 2.5);

  d.replicates = Eigen::VectorXd::Constant(100, 4.25);
  d.original = 4.25;
  const auto flat = percentile_interval(d, 0.05);
  EXPECT_EQ(flat.lo, 4.25);
  EXPECT_EQ(flat.hi, 4.25);
}

TEST(Percentile, OneToThousand) {
  BootstrapDistribution d;
  d.replicates = Eigen::VectorXd::LinSpaced(1000, 1.0, 1000.0);
  d.original = 500.5;
  d.jackknife = Eigen::VectorXd::LinSpaced(1000, 1.0, 1000.0);
  const auto pct = percentile_interval(d, 0.05);
  EXPECT_NEAR(pct.lo, 25.975, 1e-9);
  EXPECT_NEAR(pct.hi, 975.025, 1e-9);
  const auto bca = bca_interval(d, 0.05);
  EXPECT_EQ(bca.z0, 0.0);
  EXPECT_EQ(bca.a, 0.0);
  EXPECT_EQ(bca.lo, pct.lo);
  EXPECT_EQ(bca.hi, pct.hi);
}

TEST(Percentile, ShrinksTowardMedianAsAlphaGrows) {
  BootstrapDistribution d;
  d.replicates = fixture::gaussian_vector(400, 3);
  d.original = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (double alpha : {0.01, 0.05, 0.2, 0.5, 0.9, 0.999}) {
    const auto ci = percentile_interval(d, alpha);
    EXPECT_LE(ci.hi - ci.lo, prev);
    prev = ci.hi - ci.lo;
  }
  EXPECT_LT(prev, 0.01);
}

TEST(Bca, ClampsWhenAllReplicatesAboveOriginal) {
  BootstrapDistribution d;
  d.replicates = Eigen::VectorXd::LinSpaced(200, 1.0, 2.0);
  d.original = 0.0;
  const auto ci = bca_interval(d, 0.05);
  EXPECT_TRUE(ci.z0_clamped);
  EXPECT_TRUE(std::isfinite(ci.z0));
  EXPECT_NEAR(ci.z0, normal_quantile(1.0 / 200.0), 1e-12);
  EXPECT_EQ(ci.method, IntervalMethod::BcaNoAcceleration);
  EXPECT_GE(ci.lo, 1.0);
}

TEST(Bca, AccelerationFromJackknife) {
  Eigen::VectorXd jack(4);
  jack << 1, 2, 3, 10;
  // a = sum (m - v)^3 / (6 (sum (m - v)^2)^1.5), m = 4
  const double s2 = 9 + 4 + 1 + 36;
  const double s3 = 27 + 8 + 1 - 216;
  EXPECT_NEAR(*jackknife_acceleration(jack), s3 / (6.0 * std::pow(s2, 1.5)), 1e-15);
  EXPECT_FALSE(jackknife_acceleration(Eigen::VectorXd::Constant(5, 2.0)).has_value());
}

TEST(Bca, AgreesWithDirectFormula) {
  BootstrapDistribution d;
  Eigen::VectorXd v = fixture::gaussian_vector(1000, 17);
  for (auto& x : v) x = std::exp(0.5 * x);
  d.replicates = v;
  d.original = 1.05;
  d.jackknife = fixture::gaussian_vector(30, 18).array().exp();
  const auto ci = bca_interval(d, 0.1);
  EXPECT_EQ(ci.method, IntervalMethod::Bca);

  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  const double below = static_cast<double>(std::count_if(sorted.begin(), sorted.end(), [&](double x) { return x < d.original; }));
  const double z0 = normal_quantile(below / 1000.0);
  const double a = *jackknife_acceleration(*d.jackknife);
  auto adj = [&](double q) {
    const double z = normal_quantile(q);
    return normal_cdf(z0 + (z0 + z) / (1.0 - a * (z0 + z)));
  };
  EXPECT_NEAR(ci.z0, z0, 1e-14);
  EXPECT_NEAR(ci.lo, quantile_linear(sorted, adj(0.05)), 1e-12);
  EXPECT_NEAR(ci.hi, quantile_linear(sorted, adj(0.95)), 1e-12);
}

TEST(Bca, TooFewFiniteReplicates) {
  EXPECT_EQ(min_finite_replicates(1000), 500);
  EXPECT_EQ(min_finite_replicates(60), 50);
  EXPECT_EQ(min_finite_replicates(20), 20);
  BootstrapDistribution d;
  d.replicates = Eigen::VectorXd::LinSpaced(100, 0.0, 1.0);
  for (int i = 0; i < 51; ++i) d.replicates[i] = std::numeric_limits<double>::quiet_NaN();
  try {
    bca_interval(d, 0.05);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooFewReplicates);
  }
  d.replicates[50] = 0.5;
  EXPECT_NO_THROW(bca_interval(d, 0.05));
}

TEST(MapReplicates, SerialEqualsParallel) {
  const Eigen::MatrixXd x = fixture::gaussian(50, 3, 4);
  const ResamplePlan plan = resample_pairs(50, 300, 8);
  auto stat = [&](int r) -> Eigen::VectorXd {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(3);
    for (int i : plan.row(r)) s += x.row(i).transpose();
    return s / 50.0;
  };
  set_thread_count(4);
  const Eigen::MatrixXd a = map_replicates(300, 3, stat, ExecPolicy::Serial);
  const Eigen::MatrixXd b = map_replicates(300, 3, stat, ExecPolicy::OpenMp);
  EXPECT_EQ(a, b);
}
