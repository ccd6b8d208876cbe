#pragma once

#include "bootpls/seeding.h"

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace bootpls::fixture {

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = z(rng);
  return m;
}

inline Eigen::VectorXd gaussian_vector(Eigen::Index n, std::uint64_t seed) { return gaussian(n, 1, seed).col(0); }

// OLS slopes with an intercept, from the normal equations on centered data.
inline Eigen::VectorXd ols_slopes(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
  const Eigen::VectorXd yc = y.array() - y.mean();
  return (xc.transpose() * xc).ldlt().solve(xc.transpose() * yc);
}

}  // namespace bootpls::fixture
