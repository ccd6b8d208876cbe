#pragma once

#include "bootpls/bootstrap.h"
#include "bootpls/components.h"
#include "bootpls/dataset.h"
#include "bootpls/parallel.h"
#include "bootpls/stopping.h"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bootpls {

struct SelectionConfig {
  int replicates = 1000;  // outer R
  double alpha = 0.05;
  bool jackknife = true;  // leave-one-out acceleration for the predictor intervals
  ExecPolicy policy = ExecPolicy::OpenMp;
};

enum class SelectionStatus { Ok, EmptySupport };

std::string_view to_string(SelectionStatus status);

/// Model refitted on the selected predictors. `beta` spans all p predictors
/// (zeros outside the support).
struct FinalModel {
  int k = 0;
  Eigen::VectorXd beta;
  double intercept = 0.0;
};

struct SelectionResult {
  std::vector<ConfidenceInterval> per_predictor_ci;  // one per predictor
  std::vector<int> support;                          // ascending, 0 outside the interval
  std::map<int, int> k_histogram;                    // K_r -> kept replicate count
  int excluded = 0;                                  // failed or guarded replicates
  int replicates = 0;
  int k_original = 0;              // components chosen on the full data
  Eigen::VectorXd original_beta;   // coefficient estimate on the full data
  FinalModel final_fit;
  SelectionStatus status = SelectionStatus::Ok;
};

/// Bootstrap selection where each outer replicate picks its own number of
/// components with `criterion`. Replicates with K_r = 0 contribute a zero
/// coefficient vector. The final model is refitted on the support with the
/// component count the criterion selects there.
SelectionResult dynamic_select(const Dataset& data, const ComponentModel& model,
                               const ComponentCriterion& criterion, const SelectionConfig& cfg,
                               std::uint64_t seed);

/// Bootstrap selection with a preset K for every replicate. Replicates on
/// which K components cannot be built are excluded.
SelectionResult static_select(const Dataset& data, const ComponentModel& model, int k,
                              const SelectionConfig& cfg, std::uint64_t seed);

/// Dense PLS with the BootYT criterion (inner R = cfg.replicates).
SelectionResult dynamic_select(const Dataset& data, const StoppingConfig& cfg, int replicates, double alpha,
                               std::uint64_t seed);
SelectionResult static_select(const Dataset& data, int k, int replicates, double alpha, std::uint64_t seed);

/// A selected model: support plus number of components.
struct ModelKey {
  std::vector<int> support;
  int k = 0;
  auto operator<=>(const ModelKey&) const = default;
};

struct StabilityReport {
  int distinct_supports = 0;   // Gamma_1
  double support_rate = 0.0;   // occurrence rate of the modal support, in percent
  int distinct_models = 0;     // Gamma_2
  double model_rate = 0.0;     // occurrence rate of the modal model, in percent
  ModelKey modal_model;        // ties: lexicographically smallest support, then smaller K
  std::vector<int> modal_support;
};

StabilityReport stability_report(const std::vector<ModelKey>& models);
StabilityReport stability_report(const std::vector<SelectionResult>& results);

}  // namespace bootpls
