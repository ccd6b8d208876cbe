#include "bootpls/logistic.h"

#include "bootpls/errors.h"

#include <cmath>

namespace bootpls {

double logistic(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double logistic_log_likelihood(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double e = eta(i);
    // log(1 + exp(e)) without overflow
    const double softplus = std::max(e, 0.0) + std::log1p(std::exp(-std::abs(e)));
    ll += y(i) * e - softplus;
  }
  return ll;
}

LogisticFit fit_logistic(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                         const Eigen::VectorXd* start, const LogisticOptions& opts) {
  const Eigen::Index n = design.rows();
  const Eigen::Index q = design.cols();
  if (y.size() != n) fail(ErrorKind::DimensionMismatch, "fit_logistic: response length mismatch");

  LogisticFit fit;
  fit.coef = start ? *start : Eigen::VectorXd::Zero(q);
  Eigen::VectorXd eta = design * fit.coef;
  double ll = logistic_log_likelihood(eta, y);

  Eigen::VectorXd mu(n), w(n);
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i) {
      mu(i) = logistic(eta(i));
      w(i) = mu(i) * (1.0 - mu(i));
    }
    const Eigen::MatrixXd info = design.transpose() * w.asDiagonal() * design;
    const Eigen::VectorXd score = design.transpose() * (y - mu);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    const double dmax = ldlt.vectorD().cwiseAbs().maxCoeff();
    const double dmin = ldlt.vectorD().minCoeff();
    if (ldlt.info() != Eigen::Success || !(dmin > 1e-13 * dmax) || !(dmax > 0.0)) {
      fail(ErrorKind::SeparationDivergence, "information matrix is singular (quasi-separation)");
    }
    Eigen::VectorXd step = ldlt.solve(score);
    if (!step.allFinite()) fail(ErrorKind::SeparationDivergence, "non-finite Newton step");

    Eigen::VectorXd next = fit.coef + step;
    Eigen::VectorXd next_eta = design * next;
    double next_ll = logistic_log_likelihood(next_eta, y);
    int halvings = 0;
    while (next_ll < ll - 1e-12 * (1.0 + std::abs(ll)) && halvings < 30) {
      step *= 0.5;
      next = fit.coef + step;
      next_eta = design * next;
      next_ll = logistic_log_likelihood(next_eta, y);
      ++halvings;
    }
    fit.coef = next;
    eta = next_eta;
    ll = next_ll;
    fit.iterations = iter;
    if (fit.coef.cwiseAbs().maxCoeff() > opts.overflow_guard) {
      fail(ErrorKind::SeparationDivergence, "coefficient exceeded overflow guard");
    }
    const double rel = (step.array().abs() / (fit.coef.array().abs() + 1.0)).maxCoeff();
    if (rel <= opts.tolerance) {
      fit.converged = true;
      break;
    }
  }
  fit.log_likelihood = ll;
  return fit;
}

}  // namespace bootpls
