#include "bootpls/errors.h"
#include "bootpls/pls.h"

#include "helpers.h"

#include <gtest/gtest.h>

using namespace bootpls;

namespace {

Dataset noisy_linear(int n, int p, std::uint64_t seed) {
  const Eigen::MatrixXd x = fixture::gaussian(n, p, seed);
  const Eigen::VectorXd y = x * Eigen::VectorXd::LinSpaced(p, 1.0, -1.0) + fixture::gaussian_vector(n, seed + 1);
  return standardize(x, y);
}

}  // namespace

TEST(PlsWeight, HandExamples) {
  Eigen::MatrixXd x(2, 2);
  x << 1, 0, 0, 1;
  Eigen::VectorXd y(2);
  y << 3, 4;
  const Eigen::VectorXd w = pls_weight(x, y);
  EXPECT_NEAR(w[0], 0.6, 1e-15);
  EXPECT_NEAR(w[1], 0.8, 1e-15);

  Eigen::MatrixXd x1(3, 1);
  x1 << -1, 0, 1;
  Eigen::VectorXd y1(3);
  y1 << -2, 0, 5;
  EXPECT_DOUBLE_EQ(pls_weight(x1, y1)[0], 1.0);
}

TEST(PlsWeight, Degenerate) {
  Eigen::MatrixXd x(3, 1);
  x << -1, 0, 1;
  Eigen::VectorXd y(3);
  y << 1, -2, 1;  // orthogonal to x
  try {
    pls_weight(x, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateDirection);
  }
}

TEST(PlsFit, SinglePredictorIsSimpleRegression) {
  const Eigen::MatrixXd x = fixture::gaussian(25, 1, 3) * 2.0;
  const Eigen::VectorXd y = 1.5 * x.col(0) + fixture::gaussian_vector(25, 4);
  const PlsFit fit = pls_fit(standardize(x, y), 1);
  const Eigen::VectorXd slope = fixture::ols_slopes(x, y);
  EXPECT_NEAR(fit.beta[0], slope[0], 1e-12);
  EXPECT_NEAR(fit.intercept, y.mean() - slope[0] * x.col(0).mean(), 1e-12);
}

TEST(PlsFit, TooManyComponents) {
  const Dataset d = noisy_linear(8, 20, 11);
  try {
    pls_fit(d, 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooManyComponents);
  }
}

TEST(PlsFit, UnitWeightsAndOrthogonalScores) {
  const Dataset d = noisy_linear(40, 12, 21);
  const PlsFit fit = pls_fit(d, 6);
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(fit.weights.col(k).norm(), 1.0, 1e-12);
  const Eigen::MatrixXd g = fit.scores.transpose() * fit.scores;
  const double scale = g.diagonal().maxCoeff();
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < a; ++b) EXPECT_LT(std::abs(g(a, b)) / scale, 1e-10);
  }
}

TEST(PlsFit, InSampleResidualsOrthogonalToScores) {
  const Dataset d = noisy_linear(30, 8, 31);
  const PlsFit fit = pls_fit(d, 3);
  const Eigen::VectorXd resid = d.raw_y - predict(fit, d.raw_x);
  for (int k = 0; k < 3; ++k) {
    EXPECT_LT(std::abs(resid.dot(fit.scores.col(k))), 1e-9 * fit.scores.col(k).norm() * resid.norm() + 1e-12);
  }
}

TEST(PlsFit, MeanRowPredictsResponseMean) {
  const Dataset d = noisy_linear(30, 8, 41);
  const PlsFit fit = pls_fit(d, 4);
  const Eigen::MatrixXd mean_row = d.col_means;
  EXPECT_NEAR(predict(fit, mean_row)[0], d.y_mean, 1e-12);
}

TEST(PlsFit, PredictionMatchesComponentExpansion) {
  const Dataset d = noisy_linear(30, 8, 51);
  const PlsFit fit = pls_fit(d, 3);
  const Eigen::MatrixXd x_new = fixture::gaussian(5, 8, 52);
  // t_new = x_new_std W (P'W)^{-1}; y_hat = y_mean + sum_k c_k t_new_k
  const Eigen::MatrixXd rot = fit.weights * (fit.x_loadings.transpose() * fit.weights).inverse();
  const Eigen::MatrixXd x_std =
      (x_new.rowwise() - fit.col_means).array().rowwise() / fit.col_sds.array();
  const Eigen::MatrixXd t_new = x_std * rot;
  const Eigen::VectorXd expanded = (t_new * fit.y_loadings).array() + fit.y_mean;
  EXPECT_LT((predict(fit, x_new) - expanded).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(PlsPath, PrefixFitsMatchDirectFits) {
  const Dataset d = noisy_linear(30, 10, 61);
  PlsPath path(d);
  ASSERT_TRUE(path.extend_to(5));
  for (int k = 1; k <= 5; ++k) {
    const PlsFit direct = pls_fit(d, k);
    EXPECT_LT((path.fit(k).beta - direct.beta).cwiseAbs().maxCoeff(), 1e-13);
  }
  const PlsFit zero = path.fit(0);
  EXPECT_EQ(zero.k, 0);
  EXPECT_DOUBLE_EQ(zero.intercept, d.y_mean);
  EXPECT_EQ(zero.beta.norm(), 0.0);
}

TEST(PlsPath, StopsAtRankBound) {
  const Dataset d = noisy_linear(6, 3, 71);
  PlsPath path(d);
  EXPECT_TRUE(path.extend_to(3));
  EXPECT_FALSE(path.extend());
  EXPECT_EQ(path.size(), 3);
}
