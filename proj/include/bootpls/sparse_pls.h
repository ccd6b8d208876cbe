#pragma once

#include "bootpls/dataset.h"
#include "bootpls/pls.h"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace bootpls {

struct SparsityConfig {
  std::vector<double> eta_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  int k_max = 10;
  int folds = 10;
};

void validate(const SparsityConfig& cfg);

/// Sparse PLS model: ordinary PLS refitted on the active predictors.
struct SparseFit {
  std::vector<int> active;  // ascending predictor indices
  PlsFit inner;             // PLS on the active columns
  double eta = 0.0;
  int k = 0;                // components of `inner`
  Eigen::VectorXd beta;     // raw-scale coefficients over all p predictors
  double intercept = 0.0;
};

/// Soft-thresholded direction: w_j = sign(z_j) (|z_j| - eta max|z|)_+,
/// normalized to unit length.
Eigen::VectorXd sparse_weight(const Eigen::VectorXd& z, double eta);

/// Builds the sparse fits for k = 1, 2, ... on one dataset. Step k computes
/// the sparse direction of X'(y - X beta_{k-1}), unions its support into the
/// active set and refits PLS with min(k, |A|) components on the active set.
class SplsPath {
 public:
  SplsPath(const Dataset& data, double eta);

  bool extend();
  bool extend_to(int k);
  int size() const { return static_cast<int>(fits_.size()); }
  /// Fit after step k (1-based).
  const SparseFit& fit(int k) const { return fits_.at(static_cast<std::size_t>(k - 1)); }

 private:
  Dataset data_;
  double eta_;
  double scale_;
  Eigen::VectorXd beta_std_;
  std::vector<int> active_;
  std::vector<SparseFit> fits_;
};

/// Sparse PLS with K steps. Throws TooManyComponents when the path stops early.
SparseFit spls_fit(const Dataset& data, double eta, int k);

Eigen::VectorXd predict(const SparseFit& fit, const Eigen::MatrixXd& x_new);

struct CvCell {
  double eta = 0.0;
  int k = 0;
  double mse = 0.0;  // +inf when some fold could not build the model
};

struct TuneCvResult {
  double eta = 0.0;
  int k = 0;
  std::vector<CvCell> table;
  int cv_evaluations = 0;
};

/// Grid search over (eta, K) minimizing fold-mean held-out MSE. Ties go to
/// smaller K, then smaller eta, then grid order.
TuneCvResult tune_cv(const Dataset& data, const SparsityConfig& cfg, std::uint64_t seed);

struct EtaOutcome {
  double eta = 0.0;
  int k_opt = 0;
  std::string reason;  // why k stopped growing, or why eta was dropped
  double cv_mse = 0.0; // +inf when dropped
  int ci_tests = 0;
};

struct TuneBootResult {
  double eta = 0.0;
  int k = 0;
  std::vector<EtaOutcome> per_eta;
  int cv_evaluations = 0;
};

/// For each eta, grows k while the bootstrap intervals of all k component
/// coefficients exclude zero (every component re-tested at each k); then
/// picks the eta whose single selected model has the lowest CV MSE.
/// Throws NoValidEta when every eta selects zero components.
TuneBootResult tune_bootyt(const Dataset& data, const SparsityConfig& cfg, int replicates, double alpha,
                           std::uint64_t seed, bool jackknife = true);

/// Fold-mean held-out MSE of spls(eta, k) for a fixed fold assignment.
double spls_cv_mse(const Dataset& data, double eta, int k, const std::vector<int>& folds);

}  // namespace bootpls
