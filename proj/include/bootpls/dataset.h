#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace bootpls {

using Index = Eigen::Index;

/// Observations x predictors matrix plus response, stored both raw and
/// preprocessed (centered, optionally unit-variance scaled) so that subsets
/// can be re-standardized from the original values.
struct Dataset {
  Eigen::MatrixXd raw_x;
  Eigen::VectorXd raw_y;
  Eigen::MatrixXd x;  // centered (and scaled when `scaled`)
  Eigen::VectorXd y;  // centered
  Eigen::RowVectorXd col_means;
  Eigen::RowVectorXd col_sds;  // sample sd, n-1 divisor
  double y_mean = 0.0;
  bool scaled = true;

  Index n() const { return x.rows(); }
  Index p() const { return x.cols(); }

  /// Response on its original scale.
  Eigen::VectorXd response() const { return raw_y; }

  /// Re-standardized dataset built from the given raw rows (duplicates allowed).
  Dataset rows(std::span<const int> idx) const;
  /// Re-standardized dataset restricted to the given predictor columns.
  Dataset columns(std::span<const int> cols) const;
  /// Dataset with observation i removed.
  Dataset without_row(Index i) const;
};

/// Centers y and centers (and by default scales) the columns of X.
/// Throws ZeroVarianceColumn for a constant column and NonFiniteInput for
/// NaN/Inf entries.
Dataset standardize(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, bool scale = true);

/// Sample standard deviation with the n-1 divisor.
double sample_sd(const Eigen::Ref<const Eigen::VectorXd>& v);

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, std::span<const int> idx);
Eigen::VectorXd select_rows(const Eigen::VectorXd& v, std::span<const int> idx);
Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m, std::span<const int> cols);

}  // namespace bootpls
