#pragma once

#include "bootpls/dataset.h"

#include <Eigen/Dense>

namespace bootpls {

/// Relative tolerance under which the covariance direction X'y of a residual
/// pair is treated as zero: ||X'y|| <= kDegenerateTol * ||X0||_F * ||y0||.
inline constexpr double kDegenerateTol = 1e-10;

/// PLS1 fit with K components. Weights, scores and loadings live on the
/// preprocessed scale; `beta` and `intercept` map back to raw predictors.
struct PlsFit {
  Eigen::MatrixXd weights;     // W, p x K, unit-norm columns
  Eigen::MatrixXd scores;      // T, n x K, mutually orthogonal columns
  Eigen::MatrixXd x_loadings;  // P, p x K
  Eigen::VectorXd y_loadings;  // c, length K
  Eigen::VectorXd beta_std;    // coefficients on the preprocessed scale
  Eigen::VectorXd beta;        // coefficients on the raw predictor scale
  double intercept = 0.0;
  int k = 0;

  Eigen::RowVectorXd col_means;
  Eigen::RowVectorXd col_sds;
  double y_mean = 0.0;
  bool scaled = true;
};

/// Unit-norm direction proportional to x_res' y_res. Throws
/// DegenerateDirection when that product vanishes.
Eigen::VectorXd pls_weight(const Eigen::MatrixXd& x_res, const Eigen::VectorXd& y_res);

/// Incremental PLS1 construction. Each extend() adds one component and
/// deflates X and y by OLS on the new score; prefix fits for any k <= size()
/// are available without refitting, since earlier components never change.
class PlsPath {
 public:
  explicit PlsPath(const Dataset& data);

  /// Adds one component; returns false (leaving the path untouched) when the
  /// residual covariance is degenerate or the rank bound is reached.
  bool extend();
  /// Extends until size() == k or the path is exhausted; returns size() >= k.
  bool extend_to(int k);

  int size() const { return k_; }
  int max_components() const { return max_k_; }
  Eigen::Index n() const { return x_res_.rows(); }
  Eigen::Index p() const { return x_res_.cols(); }

  auto scores() const { return t_.leftCols(k_); }
  auto weights() const { return w_.leftCols(k_); }
  auto x_loadings() const { return p_.leftCols(k_); }
  auto y_loadings() const { return c_.head(k_); }
  const Eigen::MatrixXd& residual_x() const { return x_res_; }
  const Eigen::VectorXd& residual_y() const { return y_res_; }

  /// Fit using the first k components (k = 0 gives the intercept-only model).
  PlsFit fit(int k) const;
  /// Coefficients on the preprocessed scale for the first k components.
  Eigen::VectorXd beta_std(int k) const;

 private:
  Eigen::MatrixXd x_res_;
  Eigen::VectorXd y_res_;
  Eigen::MatrixXd w_, t_, p_;
  Eigen::VectorXd c_;
  int k_ = 0;
  int max_k_ = 0;
  double scale_ = 0.0;  // ||X0||_F * ||y0||
  double x_norm2_ = 0.0;
  Eigen::RowVectorXd col_means_, col_sds_;
  double y_mean_ = 0.0;
  bool scaled_ = true;
};

/// Fits K components. Throws TooManyComponents when K exceeds min(n-1, p) or
/// a degenerate direction appears before K components are built.
PlsFit pls_fit(const Dataset& data, int k);

/// intercept + x_new * beta on the raw response scale.
Eigen::VectorXd predict(const PlsFit& fit, const Eigen::MatrixXd& x_new);

/// Maps preprocessed-scale coefficients to (raw beta, intercept).
void to_raw_scale(const Eigen::VectorXd& beta_std, const Eigen::RowVectorXd& col_means,
                  const Eigen::RowVectorXd& col_sds, double y_mean, bool scaled,
                  Eigen::VectorXd& beta, double& intercept);

}  // namespace bootpls
