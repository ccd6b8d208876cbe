#include "bootpls/errors.h"
#include "bootpls/selection.h"

#include "helpers.h"

#include <gtest/gtest.h>

#include <algorithm>

using namespace bootpls;

namespace {

StoppingConfig inner(int k_max = 4) {
  StoppingConfig c;
  c.replicates = 200;
  c.k_max = k_max;
  return c;
}

}  // namespace

TEST(DynamicSelect, PlantedSingleSignal) {
  int found = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    const Eigen::MatrixXd x = fixture::gaussian(60, 10, derive_seed(s, Stream::Data));
    const Eigen::VectorXd y = 5.0 * x.col(0) + 0.01 * fixture::gaussian_vector(60, derive_seed(s, Stream::Noise));
    const SelectionResult r = dynamic_select(standardize(x, y), inner(), 200, 0.05, s);
    if (std::binary_search(r.support.begin(), r.support.end(), 0)) ++found;
  }
  EXPECT_GE(found, 0.95 * seeds);
}

TEST(DynamicSelect, SinglePredictor) {
  const Eigen::MatrixXd x = fixture::gaussian(50, 1, 3);
  const Eigen::VectorXd y = 4.0 * x.col(0) + fixture::gaussian_vector(50, 4);
  const SelectionResult r = dynamic_select(standardize(x, y), inner(), 200, 0.05, 5);
  EXPECT_EQ(r.support, std::vector<int>{0});
  EXPECT_EQ(r.final_fit.k, 1);
  EXPECT_EQ(r.status, SelectionStatus::Ok);
}

TEST(DynamicSelect, NullCalibration) {
  const int seeds = 20, p = 5;
  int empty = 0;
  double total = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const Dataset d = standardize(fixture::gaussian(50, p, derive_seed(s, Stream::Data)),
                                  fixture::gaussian_vector(50, derive_seed(s, Stream::Noise)));
    const SelectionResult r = dynamic_select(d, inner(3), 200, 0.05, s);
    total += static_cast<double>(r.support.size());
    if (r.status == SelectionStatus::EmptySupport) {
      ++empty;
      EXPECT_TRUE(r.support.empty());
      EXPECT_DOUBLE_EQ(r.final_fit.intercept, d.y_mean);
    }
  }
  EXPECT_GT(empty, seeds / 2);
  EXPECT_LE(total / seeds, 3.0 * 0.05 * p);
}

TEST(DynamicSelect, HistogramAccountsForEveryReplicate) {
  const Eigen::MatrixXd x = fixture::gaussian(50, 8, 7);
  const Eigen::VectorXd y = x.col(0) - x.col(1) + fixture::gaussian_vector(50, 8);
  const SelectionResult r = dynamic_select(standardize(x, y), inner(), 150, 0.05, 9);
  int kept = 0;
  for (const auto& [k, count] : r.k_histogram) kept += count;
  EXPECT_EQ(kept + r.excluded, 150);
  EXPECT_EQ(r.replicates, 150);
  EXPECT_EQ(r.per_predictor_ci.size(), 8u);
  EXPECT_EQ(r.final_fit.beta.size(), 8);
  for (Eigen::Index j = 0; j < 8; ++j) {
    if (!std::binary_search(r.support.begin(), r.support.end(), static_cast<int>(j))) {
      EXPECT_EQ(r.final_fit.beta[j], 0.0);
    }
  }
}

TEST(DynamicSelect, SerialEqualsParallel) {
  const Eigen::MatrixXd x = fixture::gaussian(40, 6, 17);
  const Eigen::VectorXd y = x.col(0) + fixture::gaussian_vector(40, 18);
  const Dataset d = standardize(x, y);
  SelectionConfig cfg;
  cfg.replicates = 100;
  const BootYtCriterion crit(inner(), ComponentRegression::Linear);
  set_thread_count(4);
  cfg.policy = ExecPolicy::Serial;
  const SelectionResult a = dynamic_select(d, PlsModel{}, crit, cfg, 3);
  cfg.policy = ExecPolicy::OpenMp;
  const SelectionResult b = dynamic_select(d, PlsModel{}, crit, cfg, 3);
  EXPECT_EQ(a.support, b.support);
  EXPECT_EQ(a.k_histogram, b.k_histogram);
  for (std::size_t j = 0; j < a.per_predictor_ci.size(); ++j) {
    EXPECT_EQ(a.per_predictor_ci[j].lo, b.per_predictor_ci[j].lo);
    EXPECT_EQ(a.per_predictor_ci[j].hi, b.per_predictor_ci[j].hi);
  }
}

TEST(StaticSelect, FixedK) {
  const Eigen::MatrixXd x = fixture::gaussian(50, 8, 21);
  const Eigen::VectorXd y = 3.0 * x.col(2) + fixture::gaussian_vector(50, 22);
  const SelectionResult r = static_select(standardize(x, y), 2, 200, 0.05, 23);
  EXPECT_EQ(r.k_histogram.size(), 1u);
  EXPECT_EQ(r.k_histogram.begin()->first, 2);
  EXPECT_TRUE(std::binary_search(r.support.begin(), r.support.end(), 2));
  EXPECT_THROW(static_select(standardize(x, y), 60, 200, 0.05, 23), Error);
}

TEST(Stability, Counts) {
  const std::vector<int> a{0, 1}, b{0, 2};
  std::vector<ModelKey> same(5, ModelKey{a, 2});
  StabilityReport s = stability_report(same);
  EXPECT_EQ(s.distinct_supports, 1);
  EXPECT_EQ(s.distinct_models, 1);
  EXPECT_DOUBLE_EQ(s.support_rate, 100.0);
  EXPECT_DOUBLE_EQ(s.model_rate, 100.0);

  std::vector<ModelKey> split;
  for (int i = 0; i < 6; ++i) split.push_back({a, 1});
  for (int i = 0; i < 4; ++i) split.push_back({b, 1});
  s = stability_report(split);
  EXPECT_EQ(s.distinct_supports, 2);
  EXPECT_DOUBLE_EQ(s.support_rate, 60.0);
  EXPECT_EQ(s.modal_support, a);

  std::vector<ModelKey> ks;
  for (int i = 0; i < 7; ++i) ks.push_back({a, 2});
  for (int i = 0; i < 3; ++i) ks.push_back({a, 3});
  s = stability_report(ks);
  EXPECT_EQ(s.distinct_supports, 1);
  EXPECT_EQ(s.distinct_models, 2);
  EXPECT_DOUBLE_EQ(s.model_rate, 70.0);
  EXPECT_EQ(s.modal_model.k, 2);
}

TEST(Stability, TieBreak) {
  const std::vector<ModelKey> tie{{{1, 2}, 3}, {{0, 5}, 2}, {{0, 5}, 1}, {{1, 2}, 3}, {{0, 5}, 2}, {{0, 5}, 1}};
  const StabilityReport s = stability_report(tie);
  EXPECT_EQ(s.modal_model.support, (std::vector<int>{0, 5}));
  EXPECT_EQ(s.modal_model.k, 1);
  EXPECT_EQ(s.modal_support, (std::vector<int>{0, 5}));
}
