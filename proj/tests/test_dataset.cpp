#include "bootpls/dataset.h"
#include "bootpls/errors.h"
#include "bootpls/folds.h"
#include "bootpls/seeding.h"

#include "helpers.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

using namespace bootpls;

TEST(Standardize, HandExample) {
  Eigen::MatrixXd x(2, 1);
  x << 1, 3;
  Eigen::VectorXd y(2);
  y << 0, 2;
  const Dataset d = standardize(x, y);
  EXPECT_NEAR(d.x(0, 0), -1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(d.x(1, 0), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_DOUBLE_EQ(d.y[0], -1.0);
  EXPECT_DOUBLE_EQ(d.y[1], 1.0);
  EXPECT_DOUBLE_EQ(d.col_means[0], 2.0);
  EXPECT_NEAR(d.col_sds[0], std::sqrt(2.0), 1e-12);
  EXPECT_DOUBLE_EQ(d.y_mean, 1.0);
}

TEST(Standardize, Idempotent) {
  const Eigen::MatrixXd x = fixture::gaussian(30, 4, 5);
  const Eigen::VectorXd y = fixture::gaussian_vector(30, 6);
  const Dataset once = standardize(x, y);
  const Dataset twice = standardize(once.x, once.y);
  EXPECT_LT((twice.x - once.x).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(twice.col_means.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((twice.col_sds.array() - 1.0).abs().maxCoeff(), 1e-12);
}

TEST(Standardize, CenterOnly) {
  const Eigen::MatrixXd x = fixture::gaussian(20, 3, 7) * 4.0;
  const Dataset d = standardize(x, fixture::gaussian_vector(20, 8), false);
  EXPECT_FALSE(d.scaled);
  EXPECT_LT(d.x.colwise().mean().cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(sample_sd(d.x.col(0)), sample_sd(x.col(0)), 1e-12);
}

TEST(Standardize, Errors) {
  Eigen::MatrixXd x(3, 2);
  x << 1, 5, 2, 5, 3, 5;
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(3, 0, 1);
  try {
    standardize(x, y);
    FAIL() << "expected ZeroVarianceColumn";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroVarianceColumn);
  }
  x(1, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    standardize(x, y);
    FAIL() << "expected NonFiniteInput";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFiniteInput);
  }
}

TEST(Dataset, RowsAndColumnsRestandardize) {
  const Eigen::MatrixXd x = fixture::gaussian(10, 5, 9);
  const Eigen::VectorXd y = fixture::gaussian_vector(10, 10);
  const Dataset d = standardize(x, y);
  const std::vector<int> rows{0, 0, 3, 4, 7, 9};
  const Dataset r = d.rows(rows);
  const Dataset direct = standardize(select_rows(x, rows), select_rows(y, rows));
  EXPECT_LT((r.x - direct.x).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_DOUBLE_EQ(r.y_mean, direct.y_mean);

  const std::vector<int> cols{1, 4};
  const Dataset c = d.columns(cols);
  EXPECT_EQ(c.p(), 2);
  EXPECT_LT((c.x.col(1) - d.x.col(4)).cwiseAbs().maxCoeff(), 1e-14);

  const Dataset w = d.without_row(3);
  EXPECT_EQ(w.n(), 9);
  EXPECT_DOUBLE_EQ(w.raw_x(3, 0), x(4, 0));
}

TEST(Folds, BalancedAndDeterministic) {
  const auto a = fold_assignment(23, 5, 42);
  EXPECT_EQ(a, fold_assignment(23, 5, 42));
  EXPECT_NE(a, fold_assignment(23, 5, 43));
  std::vector<int> sizes(5, 0);
  for (int f : a) ++sizes.at(static_cast<std::size_t>(f));
  EXPECT_LE(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()), 1);
  const FoldSplit s = fold_split(a, 2);
  EXPECT_EQ(s.train.size() + s.test.size(), 23u);
  for (int i : s.test) EXPECT_EQ(a[static_cast<std::size_t>(i)], 2);
}

TEST(Seeding, PathOrderMatters) {
  EXPECT_EQ(derive_seed(1, Stream::Outer, 3), derive_seed(1, {1, 3}));
  EXPECT_NE(derive_seed(1, {1, 3}), derive_seed(1, {3, 1}));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(7, Stream::Inner, i));
  EXPECT_EQ(seen.size(), 1000u);
}
