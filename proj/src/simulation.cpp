#include "bootpls/simulation.h"

#include "bootpls/dataset.h"
#include "bootpls/errors.h"
#include "bootpls/folds.h"
#include "bootpls/pls.h"
#include "bootpls/seeding.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>

namespace bootpls {

namespace {

constexpr double kHiddenVar = 25.0;
constexpr double kColumnNoiseVar = 0.1;
constexpr double kSurrogateGeneral = 0.5;
constexpr double kSurrogateBlock = 0.6;
constexpr int kSurrogateBlockSize = 20;

Eigen::VectorXd normal_vector(Rng& rng, Eigen::Index n, double sd) {
  std::normal_distribution<double> dist(0.0, sd);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

}  // namespace

HiddenGroupDesign hidden_group_design(int n, int p, double qratio, std::uint64_t seed) {
  require(qratio > 0.0 && qratio < 1.0, "q/p must lie in (0, 1)");
  const double q = qratio * p;
  if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, q)) {
    fail(ErrorKind::BoundaryNotIntegral, "q = q/p * p is not an integer");
  }
  HiddenGroupDesign d;
  d.n = n;
  d.p = p;
  d.q = static_cast<int>(std::lround(q));
  d.r = p >= 1000 ? 10 : 5;
  d.seed = seed;
  return d;
}

std::array<int, 5> group_boundaries(const HiddenGroupDesign& d) {
  require(d.n >= 2, "n must be at least 2");
  require(d.q > 0 && d.q < d.p, "q must lie in (0, p)");
  if ((d.p - d.q) % 2 != 0) fail(ErrorKind::BoundaryNotIntegral, "(p - q) / 2 is not an integer");
  const std::array<int, 5> b{0, (d.p - d.q) / 2, d.p - d.q, d.p - d.r, d.p};
  require(d.r > 0 && b[3] > b[2], "r must lie in (0, q)");
  require(d.snr > 0.0, "snr must be positive");
  return b;
}

SimulatedData gen_hidden_groups(const HiddenGroupDesign& design) {
  const auto b = group_boundaries(design);
  Rng rng(derive_seed(design.seed, Stream::Data));
  const Eigen::Index n = design.n;

  std::array<Eigen::VectorXd, 4> h;
  for (auto& v : h) v = normal_vector(rng, n, std::sqrt(kHiddenVar));

  SimulatedData out;
  out.x.resize(n, design.p);
  for (int l = 0; l < 4; ++l) {
    for (int j = b[static_cast<std::size_t>(l)]; j < b[static_cast<std::size_t>(l) + 1]; ++j) {
      out.x.col(j) = h[static_cast<std::size_t>(l)] + normal_vector(rng, n, std::sqrt(kColumnNoiseVar));
    }
  }
  out.y_noiseless = 3.0 * h[0] - 4.0 * h[1];
  const double f_var = (9.0 + 16.0) * kHiddenVar / design.snr;
  out.y = out.y_noiseless + normal_vector(rng, n, std::sqrt(f_var));
  out.true_support.resize(static_cast<std::size_t>(b[2]));
  std::iota(out.true_support.begin(), out.true_support.end(), 0);
  return out;
}

void validate(const LinearResponseDesign& design) {
  require(static_cast<Eigen::Index>(design.support_idx.size()) == design.beta.size(),
          "support and beta lengths differ");
  require(design.sigma > 0.0, "sigma must be positive");
  for (int j : design.support_idx) {
    if (j < 0 || j >= design.x_source.cols()) fail(ErrorKind::DimensionMismatch, "support index out of range");
  }
}

LinearResponse gen_linear_response(const LinearResponseDesign& design, std::uint64_t seed) {
  validate(design);
  LinearResponse out;
  out.y_noiseless = select_columns(design.x_source, design.support_idx) * design.beta;
  Rng rng(derive_seed(seed, Stream::Noise));
  out.y = out.y_noiseless + normal_vector(rng, design.x_source.rows(), design.sigma);
  return out;
}

Eigen::VectorXd planted_beta() {
  Eigen::VectorXd b(4);
  b << 3.559, 2.071, 1.440, 1.770;
  return b;
}

double snr(double signal_variance, double sigma) {
  require(sigma > 0.0, "sigma must be positive");
  return signal_variance / (sigma * sigma);
}

double surrogate_signal_variance(const std::vector<int>& support, const Eigen::VectorXd& beta) {
  double v = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (std::size_t j = 0; j < support.size(); ++j) {
      double cov = 1.0;
      if (i != j) {
        cov = kSurrogateGeneral * kSurrogateGeneral;
        if (support[i] / kSurrogateBlockSize == support[j] / kSurrogateBlockSize) {
          cov += kSurrogateBlock * kSurrogateBlock;
        }
      }
      v += beta(static_cast<Eigen::Index>(i)) * beta(static_cast<Eigen::Index>(j)) * cov;
    }
  }
  return v;
}

SurrogatePredictors surrogate_predictors(std::uint64_t seed, int n_train, int n_test, int p) {
  require(n_train >= 2 && n_test >= 1 && p >= 1, "invalid surrogate dimensions");
  const int n = n_train + n_test;
  const int blocks = (p + kSurrogateBlockSize - 1) / kSurrogateBlockSize;
  const double noise_sd =
      std::sqrt(1.0 - kSurrogateGeneral * kSurrogateGeneral - kSurrogateBlock * kSurrogateBlock);

  std::vector<int> support;
  for (int j : kPlantedSupport) {
    if (j < p) support.push_back(j);
  }
  double scale = 1.0;
  if (support.size() == kPlantedSupport.size()) {
    scale = std::sqrt(kPlantedSignalVariance / surrogate_signal_variance(support, planted_beta()));
  }

  Rng rng(derive_seed(seed, Stream::Data));
  const Eigen::VectorXd general = normal_vector(rng, n, 1.0);
  Eigen::MatrixXd block(n, blocks);
  for (int b = 0; b < blocks; ++b) block.col(b) = normal_vector(rng, n, 1.0);
  Eigen::MatrixXd x(n, p);
  for (int j = 0; j < p; ++j) {
    x.col(j) = scale * (kSurrogateGeneral * general + kSurrogateBlock * block.col(j / kSurrogateBlockSize) +
                        normal_vector(rng, n, noise_sd));
  }
  SurrogatePredictors out;
  out.train = x.topRows(n_train);
  out.test = x.bottomRows(n_test);
  return out;
}

double accuracy(const std::vector<int>& selected, const std::vector<int>& truth, int p) {
  require(p >= 1, "p must be positive");
  std::vector<char> sel(static_cast<std::size_t>(p), 0), tru(static_cast<std::size_t>(p), 0);
  for (int j : selected) {
    if (j < 0 || j >= p) fail(ErrorKind::DimensionMismatch, "selected index out of range");
    sel[static_cast<std::size_t>(j)] = 1;
  }
  for (int j : truth) {
    if (j < 0 || j >= p) fail(ErrorKind::DimensionMismatch, "true index out of range");
    tru[static_cast<std::size_t>(j)] = 1;
  }
  int correct = 0;
  for (std::size_t j = 0; j < sel.size(); ++j) correct += sel[j] == tru[j];
  return static_cast<double>(correct) / p;
}

Eigen::VectorXd bss_wss(const Eigen::MatrixXd& x, const std::vector<int>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != x.rows()) {
    fail(ErrorKind::DimensionMismatch, "one label per row is required");
  }
  std::map<int, std::vector<int>> classes;
  for (std::size_t i = 0; i < labels.size(); ++i) classes[labels[i]].push_back(static_cast<int>(i));
  if (classes.size() < 2) fail(ErrorKind::SingleClass, "at least two classes are required");

  const Eigen::RowVectorXd overall = x.colwise().mean();
  Eigen::RowVectorXd bss = Eigen::RowVectorXd::Zero(x.cols());
  Eigen::RowVectorXd wss = Eigen::RowVectorXd::Zero(x.cols());
  for (const auto& [label, rows] : classes) {
    const Eigen::MatrixXd xc = select_rows(x, rows);
    const Eigen::RowVectorXd mean = xc.colwise().mean();
    bss += static_cast<double>(rows.size()) * (mean - overall).array().square().matrix();
    wss += (xc.rowwise() - mean).colwise().squaredNorm();
  }
  Eigen::VectorXd out(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (wss(j) > 0.0) {
      out(j) = bss(j) / wss(j);
    } else {
      out(j) = bss(j) > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
  }
  return out;
}

std::vector<int> top_bss_wss(const Eigen::MatrixXd& x, const std::vector<int>& labels, int m) {
  const Eigen::VectorXd ratio = bss_wss(x, labels);
  std::vector<int> idx(static_cast<std::size_t>(x.cols()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return ratio(a) > ratio(b); });
  idx.resize(static_cast<std::size_t>(std::clamp<Eigen::Index>(m, 0, x.cols())));
  std::sort(idx.begin(), idx.end());
  return idx;
}

double pmse(const Eigen::VectorXd& prediction, const Eigen::VectorXd& target) {
  if (prediction.size() != target.size() || target.size() == 0) {
    fail(ErrorKind::DimensionMismatch, "pmse: length mismatch");
  }
  return (prediction - target).squaredNorm() / static_cast<double>(target.size());
}

Eigen::VectorXd pls_support_predict(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                    const std::vector<int>& support, int k, const Eigen::MatrixXd& x_new,
                                    bool scale) {
  if (support.empty() || k == 0) return Eigen::VectorXd::Constant(x_new.rows(), y.mean());
  const Dataset d = standardize(select_columns(x, support), y, scale);
  return predict(pls_fit(d, k), select_columns(x_new, support));
}

double cv_mse(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& target,
              const std::vector<int>& support, int k, int folds, std::uint64_t seed, bool scale) {
  if (y.size() != x.rows() || target.size() != x.rows()) fail(ErrorKind::DimensionMismatch, "cv_mse: size mismatch");
  const auto labels = fold_assignment(static_cast<int>(x.rows()), folds, seed);
  double sum = 0.0;
  for (int f = 0; f < folds; ++f) {
    const FoldSplit split = fold_split(labels, f);
    const Eigen::VectorXd pred = pls_support_predict(select_rows(x, split.train), select_rows(y, split.train),
                                                     support, k, select_rows(x, split.test), scale);
    sum += pmse(pred, select_rows(target, split.test));
  }
  return sum / folds;
}

}  // namespace bootpls
