#pragma once

#include "bootpls/selection.h"
#include "bootpls/simulation.h"

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace bootpls {

enum class Method { Q2, BootYt, BootYtDyn, SplsCv, SplsBootYt };

std::string_view to_string(Method m);
/// Accepts "Q2", "BootYT", "BootYTdyn", "SPLS-CV", "SPLS-BootYT" (case-insensitive).
Method parse_method(std::string_view name);

struct ComparisonConfig {
  int trials = 100;
  int replicates = 1000;         // outer R; also the inner R of BootYT
  double alpha = 0.05;
  int k_max = 10;
  int folds = 10;
  std::vector<double> eta_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  bool jackknife = true;
  int cv_repeats = 0;            // CV-MSE repetitions of the modal model (0: skip)
  bool scale = true;
};

/// Fixed predictors with a planted linear response; all trials share one
/// noisy response and differ only in their seeds.
struct LinearResponseCase {
  LinearResponseDesign design;
  Eigen::MatrixXd x_test;  // optional; enables PMSE against the noiseless test response
};

using ComparisonDesign = std::variant<HiddenGroupDesign, LinearResponseCase>;

/// Outcome of one method on one trial.
struct TrialOutcome {
  Method method = Method::Q2;
  int trial = 0;
  std::vector<int> support;
  int k = 0;
  double eta = std::numeric_limits<double>::quiet_NaN();
  double accuracy = 0.0;
};

struct MethodSummary {
  Method method = Method::Q2;
  double mean_accuracy = 0.0;
  double mean_support_size = 0.0;
  StabilityReport stability;
  std::vector<double> cv_mse;  // modal model, one entry per repeat
  double mean_cv_mse = std::numeric_limits<double>::quiet_NaN();
  double pmse = std::numeric_limits<double>::quiet_NaN();  // modal model on the test set
};

struct ComparisonReport {
  std::vector<TrialOutcome> trials;
  std::vector<MethodSummary> summaries;  // in the order of the requested methods
};

/// Runs every method on `trials` datasets (hidden groups: one fresh dataset
/// per trial; linear response: a single dataset) and summarizes accuracy,
/// stability and predictive error of the modal model.
ComparisonReport run_comparison(const std::vector<Method>& methods, const ComparisonDesign& design,
                                const ComparisonConfig& cfg, std::uint64_t seed);

/// Support and number of components chosen by one method on one dataset.
TrialOutcome run_method(Method method, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        const ComparisonConfig& cfg, std::uint64_t seed);

/// A report labelled with its design cell, e.g. "sigma=5".
struct ReportCell {
  std::string label;
  ComparisonReport report;
};

/// One row per cell and method: cell, method, mean_accuracy,
/// mean_support_size, gamma1, support_rate, gamma2, model_rate,
/// modal_support, k_sel, mean_cv_mse, pmse.
void write_summary_csv(std::ostream& os, const std::vector<ReportCell>& cells);
/// Long format: cell, method, trial, support_size, k, eta, accuracy, support.
void write_trials_csv(std::ostream& os, const std::vector<ReportCell>& cells);
/// Long format: cell, method, repeat, cv_mse.
void write_cv_csv(std::ostream& os, const std::vector<ReportCell>& cells);

}  // namespace bootpls
