#include "bootpls/pls.h"

#include "bootpls/errors.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace bootpls {

Eigen::VectorXd pls_weight(const Eigen::MatrixXd& x_res, const Eigen::VectorXd& y_res) {
  if (x_res.rows() != y_res.size()) fail(ErrorKind::DimensionMismatch, "pls_weight: row mismatch");
  Eigen::VectorXd z = x_res.transpose() * y_res;
  const double norm = z.norm();
  const double scale = x_res.norm() * y_res.norm();
  if (!(norm > kDegenerateTol * scale) || norm == 0.0) {
    fail(ErrorKind::DegenerateDirection, "residual response has no covariance with predictors");
  }
  return z / norm;
}

void to_raw_scale(const Eigen::VectorXd& beta_std, const Eigen::RowVectorXd& col_means,
                  const Eigen::RowVectorXd& col_sds, double y_mean, bool scaled,
                  Eigen::VectorXd& beta, double& intercept) {
  beta = scaled ? Eigen::VectorXd(beta_std.array() / col_sds.transpose().array()) : beta_std;
  intercept = y_mean - col_means.dot(beta);
}

PlsPath::PlsPath(const Dataset& data)
    : x_res_(data.x),
      y_res_(data.y),
      col_means_(data.col_means),
      col_sds_(data.col_sds),
      y_mean_(data.y_mean),
      scaled_(data.scaled) {
  max_k_ = static_cast<int>(std::min<Eigen::Index>(data.n() - 1, data.p()));
  x_norm2_ = x_res_.squaredNorm();
  scale_ = std::sqrt(x_norm2_) * y_res_.norm();
  const int reserve = std::min(max_k_, 8);
  w_.resize(p(), reserve);
  t_.resize(n(), reserve);
  p_.resize(p(), reserve);
  c_.resize(reserve);
}

bool PlsPath::extend() {
  if (k_ >= max_k_) return false;
  Eigen::VectorXd z = x_res_.transpose() * y_res_;
  const double znorm = z.norm();
  if (!(znorm > kDegenerateTol * scale_)) return false;
  Eigen::VectorXd w = z / znorm;
  Eigen::VectorXd t = x_res_ * w;
  const double tt = t.squaredNorm();
  if (!(tt > 1e-20 * x_norm2_)) return false;

  if (k_ == w_.cols()) {
    const Eigen::Index cap = std::min<Eigen::Index>(max_k_, 2 * w_.cols() + 1);
    w_.conservativeResize(Eigen::NoChange, cap);
    t_.conservativeResize(Eigen::NoChange, cap);
    p_.conservativeResize(Eigen::NoChange, cap);
    c_.conservativeResize(cap);
  }
  Eigen::VectorXd load = x_res_.transpose() * t / tt;
  const double c = y_res_.dot(t) / tt;
  x_res_.noalias() -= t * load.transpose();
  y_res_ -= c * t;

  w_.col(k_) = w;
  t_.col(k_) = t;
  p_.col(k_) = load;
  c_(k_) = c;
  ++k_;
  return true;
}

bool PlsPath::extend_to(int k) {
  while (k_ < k) {
    if (!extend()) return false;
  }
  return true;
}

Eigen::VectorXd PlsPath::beta_std(int k) const {
  require(k >= 0 && k <= k_, "beta_std: component count out of range");
  if (k == 0) return Eigen::VectorXd::Zero(p());
  const Eigen::MatrixXd pw = p_.leftCols(k).transpose() * w_.leftCols(k);
  const Eigen::VectorXd v = pw.partialPivLu().solve(c_.head(k));
  return w_.leftCols(k) * v;
}

PlsFit PlsPath::fit(int k) const {
  require(k >= 0 && k <= k_, "fit: component count out of range");
  PlsFit f;
  f.k = k;
  f.weights = w_.leftCols(k);
  f.scores = t_.leftCols(k);
  f.x_loadings = p_.leftCols(k);
  f.y_loadings = c_.head(k);
  f.beta_std = beta_std(k);
  f.col_means = col_means_;
  f.col_sds = col_sds_;
  f.y_mean = y_mean_;
  f.scaled = scaled_;
  to_raw_scale(f.beta_std, col_means_, col_sds_, y_mean_, scaled_, f.beta, f.intercept);
  return f;
}

PlsFit pls_fit(const Dataset& data, int k) {
  require(k >= 1, "pls_fit: K must be positive");
  PlsPath path(data);
  if (k > path.max_components()) {
    fail(ErrorKind::TooManyComponents, "K = " + std::to_string(k) + " exceeds min(n-1, p) = " +
                                           std::to_string(path.max_components()));
  }
  if (!path.extend_to(k)) {
    fail(ErrorKind::TooManyComponents, "degenerate direction after " + std::to_string(path.size()) +
                                           " of " + std::to_string(k) + " components");
  }
  return path.fit(k);
}

Eigen::VectorXd predict(const PlsFit& fit, const Eigen::MatrixXd& x_new) {
  if (x_new.cols() != fit.beta.size()) {
    fail(ErrorKind::DimensionMismatch, "predict: expected " + std::to_string(fit.beta.size()) +
                                           " columns, got " + std::to_string(x_new.cols()));
  }
  return (x_new * fit.beta).array() + fit.intercept;
}

}  // namespace bootpls
