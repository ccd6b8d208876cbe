#include "bootpls/gpls.h"

#include "bootpls/errors.h"
#include "bootpls/pls.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bootpls {

void check_binary(const Eigen::VectorXd& y) {
  int ones = 0;
  for (double v : y) {
    if (v != 0.0 && v != 1.0) fail(ErrorKind::NonBinaryResponse, "response must be coded 0/1");
    if (v == 1.0) ++ones;
  }
  if (ones == 0 || ones == y.size()) fail(ErrorKind::SingleClass, "response contains a single class");
}

LogisticFit fit_link(const Eigen::MatrixXd& design, const Eigen::VectorXd& y, Link link,
                     const Eigen::VectorXd* start) {
  if (link == Link::Logit) return fit_logistic(design, y, start);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(design.transpose() * design);
  const Eigen::VectorXd d = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || !(d.minCoeff() > 1e-13 * d.cwiseAbs().maxCoeff())) {
    fail(ErrorKind::DegenerateDirection, "least squares design is singular");
  }
  LogisticFit f;
  f.coef = ldlt.solve(design.transpose() * y);
  f.converged = true;
  f.log_likelihood = -0.5 * (y - design * f.coef).squaredNorm();
  return f;
}

GplsPath::GplsPath(const Dataset& data, Link link)
    : link_(link),
      x_res_(data.x),
      y_(data.response()),
      col_means_(data.col_means),
      col_sds_(data.col_sds),
      scaled_(data.scaled) {
  if (link_ == Link::Logit) check_binary(y_);
  max_k_ = static_cast<int>(std::min<Eigen::Index>(data.n() - 1, data.p()));
  col_norms_ = x_res_.colwise().norm().transpose();
  w_.resize(data.p(), max_k_);
  t_.resize(data.n(), max_k_);
  p_.resize(data.p(), max_k_);
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(data.n(), 1);
  fits_.push_back(fit_link(ones, y_, link_));
}

bool GplsPath::extend() {
  if (k_ >= max_k_) return false;
  const Eigen::Index n = x_res_.rows();
  const Eigen::Index p = x_res_.cols();
  const LogisticFit& prev = fits_.back();
  if (!prev.converged || !prev.coef.allFinite()) return false;

  Eigen::MatrixXd design(n, k_ + 2);
  design.col(0).setOnes();
  design.middleCols(1, k_) = t_.leftCols(k_);
  Eigen::VectorXd start(k_ + 2);
  start.head(k_ + 1) = prev.coef;
  start(k_ + 1) = 0.0;

  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  try {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!(x_res_.col(j).norm() > kDegenerateTol * col_norms_(j))) continue;
      design.col(k_ + 1) = x_res_.col(j);
      w(j) = fit_link(design, y_, link_, &start).coef(k_ + 1);
    }
  } catch (const Error&) {
    return false;
  }
  const double norm = w.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) return false;
  w /= norm;
  const Eigen::VectorXd t = x_res_ * w;
  const double tt = t.squaredNorm();
  if (!(tt > 1e-20 * col_norms_.squaredNorm())) return false;
  const Eigen::VectorXd load = x_res_.transpose() * t / tt;
  x_res_.noalias() -= t * load.transpose();

  w_.col(k_) = w;
  t_.col(k_) = t;
  p_.col(k_) = load;
  ++k_;

  LogisticFit f;
  try {
    Eigen::MatrixXd d(n, k_ + 1);
    d.col(0).setOnes();
    d.rightCols(k_) = t_.leftCols(k_);
    f = fit_link(d, y_, link_, &start);
  } catch (const Error&) {
    f.coef = Eigen::VectorXd::Constant(k_ + 1, std::numeric_limits<double>::quiet_NaN());
    f.converged = false;
    f.log_likelihood = -std::numeric_limits<double>::infinity();
  }
  fits_.push_back(std::move(f));
  return true;
}

Eigen::VectorXd GplsPath::beta_std(int k) const {
  if (k == 0) return Eigen::VectorXd::Zero(x_res_.cols());
  const Eigen::MatrixXd pw = p_.leftCols(k).transpose() * w_.leftCols(k);
  const Eigen::MatrixXd w_star = w_.leftCols(k) * pw.partialPivLu().inverse();
  return w_star * fits_[static_cast<std::size_t>(k)].coef.tail(k);
}

Eigen::VectorXd GplsPath::coefficients(int k) const {
  require(k >= 0 && k <= k_, "coefficients: component count out of range");
  Eigen::VectorXd beta;
  double icpt = 0.0;
  to_raw_scale(beta_std(k), col_means_, col_sds_, fits_[static_cast<std::size_t>(k)].coef(0), scaled_, beta,
               icpt);
  return beta;
}

double GplsPath::intercept(int k) const {
  require(k >= 0 && k <= k_, "intercept: component count out of range");
  Eigen::VectorXd beta;
  double icpt = 0.0;
  to_raw_scale(beta_std(k), col_means_, col_sds_, fits_[static_cast<std::size_t>(k)].coef(0), scaled_, beta,
               icpt);
  return icpt;
}

bool GplsPath::usable(int k) const {
  return k <= k_ && fits_[static_cast<std::size_t>(k)].converged;
}

GplsFit GplsPath::fit(int k) const {
  require(k >= 0 && k <= k_, "fit: component count out of range");
  const LogisticFit& f = fits_[static_cast<std::size_t>(k)];
  GplsFit out;
  out.k = k;
  out.link = link_;
  out.weights = w_.leftCols(k);
  out.scores = t_.leftCols(k);
  out.gamma0 = f.coef(0);
  out.gamma = f.coef.tail(k);
  out.converged = f.converged;
  out.log_likelihood = f.log_likelihood;
  to_raw_scale(beta_std(k), col_means_, col_sds_, f.coef(0), scaled_, out.beta, out.intercept);
  return out;
}

bool GplsModel::keep(const Eigen::VectorXd& replicate, const Eigen::VectorXd& reference) const {
  return divergence_guard(replicate, reference) == GuardDecision::Keep;
}

GplsFit gpls_fit(const Dataset& data, int k, Link link) {
  require(k >= 1, "gpls_fit: K must be positive");
  GplsPath path(data, link);
  if (k > path.max_components()) fail(ErrorKind::TooManyComponents, "K exceeds min(n-1, p)");
  if (!path.extend_to(k)) {
    fail(ErrorKind::TooManyComponents,
         "only " + std::to_string(path.size()) + " of " + std::to_string(k) + " components could be built");
  }
  return path.fit(k);
}

GplsFit gpls_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y_bin, int k, Link link, bool scale) {
  if (link == Link::Logit) check_binary(y_bin);
  return gpls_fit(standardize(x, y_bin, scale), k, link);
}

Eigen::VectorXd predict_probability(const GplsFit& fit, const Eigen::MatrixXd& x_new) {
  if (x_new.cols() != fit.beta.size()) fail(ErrorKind::DimensionMismatch, "predict: column count mismatch");
  Eigen::VectorXd eta = (x_new * fit.beta).array() + fit.intercept;
  if (fit.link == Link::Logit) eta = eta.unaryExpr([](double v) { return logistic(v); });
  return eta;
}

GuardDecision divergence_guard(const Eigen::VectorXd& replicate, const Eigen::VectorXd& reference) {
  require(replicate.size() == reference.size(), "divergence_guard: length mismatch");
  if (!replicate.allFinite()) return GuardDecision::Exclude;
  for (Eigen::Index j = 0; j < replicate.size(); ++j) {
    if (reference(j) == 0.0) continue;
    if (std::abs(replicate(j)) > kDivergenceRatio * std::abs(reference(j))) return GuardDecision::Exclude;
  }
  return GuardDecision::Keep;
}

GuardDecision divergence_guard(const GplsFit& replicate, const GplsFit& reference) {
  return divergence_guard(replicate.beta, reference.beta);
}

ClassifyMetrics classify_metrics(const Eigen::VectorXd& prob, const Eigen::VectorXd& y_bin) {
  if (prob.size() != y_bin.size()) fail(ErrorKind::DimensionMismatch, "classify_metrics: length mismatch");
  ClassifyMetrics m;
  for (Eigen::Index i = 0; i < prob.size(); ++i) {
    const double yhat = prob(i) > 0.5 ? 1.0 : 0.0;
    if (yhat != y_bin(i)) ++m.misclassified;
  }
  m.mse = prob.size() > 0 ? (y_bin - prob).squaredNorm() / static_cast<double>(prob.size()) : 0.0;
  return m;
}

ClassifyMetrics classify_metrics(const GplsFit& fit, const Eigen::MatrixXd& x, const Eigen::VectorXd& y_bin) {
  return classify_metrics(predict_probability(fit, x), y_bin);
}

}  // namespace bootpls
