#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace bootpls {

/// Four hidden N(0, 25) variables; predictors of group l equal h_l plus
/// N(0, 0.1) noise; y = 3 h_1 - 4 h_2 + f with Var(f) = 625 / snr.
struct HiddenGroupDesign {
  int n = 100;
  int p = 200;
  int q = 100;  // spurious predictors
  int r = 5;    // size of the last group
  double snr = 10.0;
  std::uint64_t seed = 1;
};

/// Design with q = qratio * p and r = 10 for p >= 1000, 5 otherwise. Throws
/// BoundaryNotIntegral when q is not an integer.
HiddenGroupDesign hidden_group_design(int n, int p, double qratio, std::uint64_t seed);

/// (0, (p-q)/2, p-q, p-r, p). Throws BoundaryNotIntegral when (p-q)/2 is not
/// an integer and InvalidArgument when the boundaries are not increasing.
std::array<int, 5> group_boundaries(const HiddenGroupDesign& design);

struct SimulatedData {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd y_noiseless;
  std::vector<int> true_support;  // 0-based, ascending
};

SimulatedData gen_hidden_groups(const HiddenGroupDesign& design);

/// y = X[:, support] beta + N(0, sigma^2).
struct LinearResponseDesign {
  Eigen::MatrixXd x_source;
  std::vector<int> support_idx;
  Eigen::VectorXd beta;
  double sigma = 1.0;
};

void validate(const LinearResponseDesign& design);

struct LinearResponse {
  Eigen::VectorXd y;
  Eigen::VectorXd y_noiseless;
};

LinearResponse gen_linear_response(const LinearResponseDesign& design, std::uint64_t seed);

/// Planted four-predictor response used for the noise sweep.
inline const std::vector<int> kPlantedSupport{0, 11, 14, 58};
Eigen::VectorXd planted_beta();
inline constexpr double kPlantedSignalVariance = 202.651;

/// Signal variance over noise variance.
double snr(double signal_variance, double sigma);

/// Synthetic stand-in for an expression matrix: unit-variance columns with a
/// shared factor (loading 0.5), a factor per block of 20 columns (loading
/// 0.6) and idiosyncratic noise, rescaled so that the planted response has
/// population signal variance kPlantedSignalVariance.
struct SurrogatePredictors {
  Eigen::MatrixXd train;
  Eigen::MatrixXd test;
};

SurrogatePredictors surrogate_predictors(std::uint64_t seed, int n_train = 443, int n_test = 123, int p = 100);

/// Population variance of X_sel beta under the surrogate covariance.
double surrogate_signal_variance(const std::vector<int>& support, const Eigen::VectorXd& beta);

/// Fraction of correct include/exclude decisions: (TP + TN) / p.
double accuracy(const std::vector<int>& selected, const std::vector<int>& truth, int p);

/// Between-class over within-class sum of squares per predictor. A zero
/// within-class sum gives +inf (or 0 when the between-class sum is also 0).
/// Throws SingleClass for fewer than two classes.
Eigen::VectorXd bss_wss(const Eigen::MatrixXd& x, const std::vector<int>& labels);

/// Indices of the m largest bss_wss ratios (ties by index).
std::vector<int> top_bss_wss(const Eigen::MatrixXd& x, const std::vector<int>& labels, int m);

/// Mean squared difference between predictions and a target.
double pmse(const Eigen::VectorXd& prediction, const Eigen::VectorXd& target);

/// Fold-mean held-out MSE of ordinary PLS on the given support with k
/// components. Models are trained on `y`; held-out errors are measured
/// against `target` (pass `y` itself for the usual CV error). An empty
/// support or k = 0 predicts the training mean.
double cv_mse(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& target,
              const std::vector<int>& support, int k, int folds, std::uint64_t seed, bool scale = true);

/// Predictions of ordinary PLS on `support` with k components trained on
/// (x, y), evaluated at x_new.
Eigen::VectorXd pls_support_predict(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                    const std::vector<int>& support, int k, const Eigen::MatrixXd& x_new,
                                    bool scale = true);

}  // namespace bootpls
