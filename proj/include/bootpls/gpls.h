#pragma once

#include "bootpls/components.h"
#include "bootpls/dataset.h"
#include "bootpls/logistic.h"

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace bootpls {

/// Link used both for building components and for the final regression on
/// them. Identity turns the construction into a least-squares analogue and
/// exists for structural checks.
enum class Link { Logit, Identity };

/// PLS-logistic fit. `weights` and `gamma` live on the preprocessed predictor
/// scale; `beta` and `intercept` are on the raw predictor scale.
struct GplsFit {
  Eigen::MatrixXd weights;  // W, p x K, unit-norm columns
  Eigen::MatrixXd scores;   // T, n x K
  Eigen::VectorXd gamma;    // coefficients of the components
  double gamma0 = 0.0;      // intercept of the regression on components
  Eigen::VectorXd beta;
  double intercept = 0.0;
  int k = 0;
  bool converged = false;
  double log_likelihood = 0.0;
  Link link = Link::Logit;
};

/// Throws NonBinaryResponse unless every entry is 0 or 1, and SingleClass
/// when only one class is present.
void check_binary(const Eigen::VectorXd& y);

/// Regression of the raw response on [1, T] with the given link.
LogisticFit fit_link(const Eigen::MatrixXd& design, const Eigen::VectorXd& y, Link link,
                     const Eigen::VectorXd* start = nullptr);

/// Component path for PLS-GLM. Component k weights predictor j by the
/// coefficient of its residual x_{k-1,j} in the regression of y on
/// [1, t_1, ..., t_{k-1}, x_{k-1,j}]; X is then deflated on t_k as in PLS.
class GplsPath final : public ComponentPath {
 public:
  GplsPath(const Dataset& data, Link link);

  bool extend() override;
  int size() const override { return k_; }
  int max_components() const override { return max_k_; }
  Eigen::MatrixXd scores() const override { return t_.leftCols(k_); }
  Eigen::VectorXd coefficients(int k) const override;
  double intercept(int k) const override;
  bool usable(int k) const override;

  GplsFit fit(int k) const;

 private:
  Eigen::VectorXd beta_std(int k) const;

  Link link_;
  Eigen::MatrixXd x_res_;
  Eigen::VectorXd y_;
  Eigen::MatrixXd w_, t_, p_;
  std::vector<LogisticFit> fits_;  // fits_[k]: regression on the first k components
  int k_ = 0;
  int max_k_ = 0;
  Eigen::VectorXd col_norms_;
  Eigen::RowVectorXd col_means_, col_sds_;
  bool scaled_ = true;
};

class GplsModel final : public ComponentModel {
 public:
  explicit GplsModel(Link link = Link::Logit) : link_(link) {}
  std::unique_ptr<ComponentPath> start(const Dataset& data) const override {
    return std::make_unique<GplsPath>(data, link_);
  }
  ComponentRegression regression() const override {
    return link_ == Link::Logit ? ComponentRegression::Logistic : ComponentRegression::Linear;
  }
  std::string name() const override { return "gpls"; }
  /// Applies divergence_guard against the full-data coefficients.
  bool keep(const Eigen::VectorXd& replicate, const Eigen::VectorXd& reference) const override;

 private:
  Link link_;
};

/// K-component fit. Throws TooManyComponents when fewer components can be
/// built and NonBinaryResponse for a logit fit on a non-binary response.
GplsFit gpls_fit(const Dataset& data, int k, Link link = Link::Logit);
GplsFit gpls_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y_bin, int k, Link link = Link::Logit,
                 bool scale = true);

/// Success probabilities (or fitted means for the identity link).
Eigen::VectorXd predict_probability(const GplsFit& fit, const Eigen::MatrixXd& x_new);

enum class GuardDecision { Keep, Exclude };

inline constexpr double kDivergenceRatio = 1e4;
inline constexpr int kGplsReplicates = 4000;

/// Exclude iff some |replicate_j| > 1e4 |reference_j| over the j with a
/// nonzero reference, or the replicate is not finite.
GuardDecision divergence_guard(const Eigen::VectorXd& replicate, const Eigen::VectorXd& reference);
GuardDecision divergence_guard(const GplsFit& replicate, const GplsFit& reference);

struct ClassifyMetrics {
  int misclassified = 0;
  double mse = 0.0;
};

/// Misclassifications with y_hat = 1[p > 0.5] and mean (y - p)^2.
ClassifyMetrics classify_metrics(const Eigen::VectorXd& prob, const Eigen::VectorXd& y_bin);
ClassifyMetrics classify_metrics(const GplsFit& fit, const Eigen::MatrixXd& x, const Eigen::VectorXd& y_bin);

}  // namespace bootpls
