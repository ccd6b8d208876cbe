#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace bootpls::cli {

enum class Command { Fit, SelectStatic, SelectDynamic, TuneSplsCv, TuneSplsBoot, Gpls, Simulate, Compare };

std::string_view to_string(Command command);

/// Everything a run needs. Fields left at their zero/empty value take the
/// per-command default in resolve().
struct RunConfig {
  Command command = Command::Fit;
  std::filesystem::path data_path;
  std::filesystem::path test_path;
  std::string response = "y";
  int replicates = 0;  // 0: 1000, or 4000 for gpls
  int k_max = 10;
  int folds = 10;
  double alpha = 0.05;
  std::vector<double> eta_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::uint64_t seed = 1;
  std::filesystem::path output_dir;  // empty: $BOOTPLS_OUTPUT_DIR, else "bootpls-out"
  bool scale = true;
  bool jackknife = true;
  int threads = 0;      // 0: all available
  int components = 0;   // 0: chosen by the criterion
  std::string criterion = "bootyt";  // bootyt | q2

  // simulate / compare
  std::string design;  // hidden-groups | linear-response
  int n = 100;
  int p = 200;
  std::vector<double> qratios;
  std::vector<double> sigmas;
  double snr = 10.0;
  int trials = 10;
  int cv_repeats = 10;
  std::vector<std::string> methods;
  bool write_data = false;
};

/// Fills per-command defaults (replicates, design, methods, sigmas, output
/// directory) and checks that the command has what it needs. Throws
/// Error(ConfigError).
RunConfig resolve(RunConfig cfg);

/// Parses argv. Throws Error(ConfigError) on unknown flags or bad values.
RunConfig parse_args(int argc, const char* const* argv);

/// Executes a resolved config and writes its artifacts. Library errors
/// propagate.
void execute(const RunConfig& cfg);

/// Full entry point: parse, resolve, execute. On failure writes error.json
/// into the output directory (when it can be determined) and returns 2 for
/// configuration or input errors, 1 for computation errors.
int run(int argc, const char* const* argv);

}  // namespace bootpls::cli
