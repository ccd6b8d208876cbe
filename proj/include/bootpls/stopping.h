#pragma once

#include "bootpls/bootstrap.h"
#include "bootpls/components.h"
#include "bootpls/dataset.h"

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace bootpls {

struct StoppingConfig {
  int k_max = 10;
  int replicates = 1000;  // R for the component bootstrap
  double alpha = 0.05;
  int folds = 10;
  double q2_threshold = 0.0975;  // 1 - 0.95^2
  bool jackknife = true;         // BCa acceleration from leave-one-out fits
};

/// One confidence interval of the component-significance trace.
struct TraceRow {
  int k = 0;          // number of components under test
  int component = 0;  // 1-based component index
  ConfidenceInterval ci;
};

/// Significance test of the coefficients of y regressed on fixed components.
struct ComponentTest {
  std::vector<ConfidenceInterval> intervals;  // one per component
  int excluded = 0;                           // non-finite or guarded replicates
  bool all_significant() const;
};

/// Bootstraps (y_i, t_i) pairs with `plan`, regresses y on [1, T] for every
/// replicate and builds BCa intervals for the component coefficients.
/// Replicates whose fit fails count as non-finite. For logistic regression a
/// replicate is also excluded when any coefficient exceeds 1e4 times the
/// original estimate in absolute value.
ComponentTest test_components(const Eigen::VectorXd& y, const Eigen::MatrixXd& scores,
                              const ResamplePlan& plan, double alpha, ComponentRegression regression,
                              bool jackknife, ExecPolicy policy = default_policy());

/// Incremental linear form of test_components: one column of scores is added
/// at a time and the per-replicate Gram matrices grow by one row and column,
/// so testing k components costs O(R n k) instead of refitting from scratch.
class LinearComponentTester {
 public:
  LinearComponentTester(const Eigen::VectorXd& y, const ResamplePlan& plan, int max_components, bool jackknife);

  void add_component(const Eigen::VectorXd& t);
  int size() const { return q_ - 1; }
  /// Same intervals as test_components on the current scores.
  ComponentTest test(double alpha, ExecPolicy policy = default_policy()) const;

 private:
  Eigen::VectorXd y_;
  int replicates_;
  bool jackknife_;
  int q_ = 0;  // columns of the design, intercept included
  Eigen::MatrixXd counts_;  // R x n resample multiplicities
  Eigen::MatrixXd design_;  // n x (max_components + 1)
  std::vector<Eigen::MatrixXd> gram_;
  Eigen::MatrixXd rhs_;     // R x (max_components + 1)
};

struct BootYtSelection {
  int k = 0;  // 0 means no significant component
  std::vector<TraceRow> trace;
  int ci_tests = 0;  // number of intervals built, including re-tests
  std::string stop_reason;
};

/// Grows k while every component coefficient of the k-component model is
/// significant, re-testing all of them at each k with one shared resample
/// plan. On return path.size() >= selection.k.
BootYtSelection bootyt_select_k(ComponentPath& path, const Eigen::VectorXd& y,
                                const StoppingConfig& cfg, ComponentRegression regression,
                                std::uint64_t seed);

/// Dense PLS convenience overload.
BootYtSelection bootyt_select_k(const Dataset& data, const StoppingConfig& cfg, std::uint64_t seed);

struct Q2Selection {
  int k = 1;
  bool forced = false;           // floor applied: Q2_1 was below threshold
  std::vector<double> q2;        // Q2_k for every computed k
  std::vector<double> press;
};

/// Q2_k = 1 - PRESS_k / RSS_{k-1} with fold-based PRESS; retains components
/// while Q2_k >= threshold, with at least one component.
Q2Selection q2_select_k(const Dataset& data, const StoppingConfig& cfg, std::uint64_t seed);

/// Chooses the number of components for a dataset. After select() returns k,
/// path.size() >= k.
class ComponentCriterion {
 public:
  virtual ~ComponentCriterion() = default;
  virtual int select(const Dataset& data, ComponentPath& path, std::uint64_t seed) const = 0;
  virtual std::string name() const = 0;
};

class BootYtCriterion final : public ComponentCriterion {
 public:
  BootYtCriterion(StoppingConfig cfg, ComponentRegression regression)
      : cfg_(cfg), regression_(regression) {}
  int select(const Dataset& data, ComponentPath& path, std::uint64_t seed) const override;
  std::string name() const override { return "bootyt"; }

 private:
  StoppingConfig cfg_;
  ComponentRegression regression_;
};

/// Dense-PLS only: selects K by q2_select_k on the dataset.
class Q2Criterion final : public ComponentCriterion {
 public:
  explicit Q2Criterion(StoppingConfig cfg) : cfg_(cfg) {}
  int select(const Dataset& data, ComponentPath& path, std::uint64_t seed) const override;
  std::string name() const override { return "q2"; }

 private:
  StoppingConfig cfg_;
};

/// Always K components (or as many as the path allows).
class ConstantCriterion final : public ComponentCriterion {
 public:
  explicit ConstantCriterion(int k) : k_(k) {}
  int select(const Dataset& data, ComponentPath& path, std::uint64_t seed) const override;
  std::string name() const override { return "constant"; }

 private:
  int k_;
};

}  // namespace bootpls
