#include "bootpls/dataset.h"

#include "bootpls/errors.h"

#include <cmath>
#include <string>

namespace bootpls {

double sample_sd(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const Index n = v.size();
  if (n < 2) return 0.0;
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(n - 1));
}

Dataset standardize(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, bool scale) {
  const Index n = x.rows();
  const Index p = x.cols();
  if (y.size() != n) {
    fail(ErrorKind::DimensionMismatch, "response length " + std::to_string(y.size()) +
                                           " does not match " + std::to_string(n) + " rows");
  }
  require(n >= 2, "at least two observations are required");
  require(p >= 1, "at least one predictor is required");
  if (!x.allFinite() || !y.allFinite()) fail(ErrorKind::NonFiniteInput, "input contains NaN or Inf");

  Dataset d;
  d.raw_x = x;
  d.raw_y = y;
  d.scaled = scale;
  d.col_means = x.colwise().mean();
  d.col_sds.resize(p);
  d.x = x.rowwise() - d.col_means;
  for (Index j = 0; j < p; ++j) {
    const double sd = std::sqrt(d.x.col(j).squaredNorm() / static_cast<double>(n - 1));
    const double scale_ref = std::max(1.0, std::abs(d.col_means(j)));
    if (!(sd > 1e-12 * scale_ref)) {
      fail(ErrorKind::ZeroVarianceColumn, "column " + std::to_string(j) + " has zero variance");
    }
    d.col_sds(j) = sd;
    if (scale) d.x.col(j) /= sd;
  }
  d.y_mean = y.mean();
  d.y = y.array() - d.y_mean;
  return d;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, std::span<const int> idx) {
  Eigen::MatrixXd out(static_cast<Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Index>(i)) = m.row(idx[i]);
  return out;
}

Eigen::VectorXd select_rows(const Eigen::VectorXd& v, std::span<const int> idx) {
  Eigen::VectorXd out(static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Index>(i)) = v(idx[i]);
  return out;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m, std::span<const int> cols) {
  Eigen::MatrixXd out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = m.col(cols[j]);
  return out;
}

Dataset Dataset::rows(std::span<const int> idx) const {
  return standardize(select_rows(raw_x, idx), select_rows(raw_y, idx), scaled);
}

Dataset Dataset::columns(std::span<const int> cols) const {
  for (int c : cols) {
    if (c < 0 || c >= p()) fail(ErrorKind::DimensionMismatch, "column index out of range");
  }
  Dataset d;
  d.raw_x = select_columns(raw_x, cols);
  d.raw_y = raw_y;
  d.x = select_columns(x, cols);
  d.y = y;
  d.col_means.resize(static_cast<Index>(cols.size()));
  d.col_sds.resize(static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    d.col_means(static_cast<Index>(j)) = col_means(cols[j]);
    d.col_sds(static_cast<Index>(j)) = col_sds(cols[j]);
  }
  d.y_mean = y_mean;
  d.scaled = scaled;
  return d;
}

Dataset Dataset::without_row(Index i) const {
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(n() - 1));
  for (Index r = 0; r < n(); ++r) {
    if (r != i) idx.push_back(static_cast<int>(r));
  }
  return rows(idx);
}

}  // namespace bootpls
