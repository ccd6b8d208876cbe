#pragma once

#include <Eigen/Dense>

namespace bootpls {

struct LogisticOptions {
  double tolerance = 1e-8;    // relative Newton step
  int max_iterations = 100;
  double overflow_guard = 1e10;
};

struct LogisticFit {
  Eigen::VectorXd coef;
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;
};

/// Logistic regression by IRLS with step-halving on likelihood decrease.
/// `design` carries its own intercept column if one is wanted. Throws
/// SeparationDivergence when a coefficient exceeds the overflow guard or the
/// information matrix becomes numerically singular.
LogisticFit fit_logistic(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                         const Eigen::VectorXd* start = nullptr, const LogisticOptions& opts = {});

double logistic(double eta);

double logistic_log_likelihood(const Eigen::VectorXd& eta, const Eigen::VectorXd& y);

}  // namespace bootpls
