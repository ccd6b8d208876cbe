#include "bootpls/cli.h"

#include "bootpls/comparison.h"
#include "bootpls/csv.h"
#include "bootpls/errors.h"
#include "bootpls/folds.h"
#include "bootpls/gpls.h"
#include "bootpls/parallel.h"
#include "bootpls/pls.h"
#include "bootpls/seeding.h"
#include "bootpls/selection.h"
#include "bootpls/simulation.h"
#include "bootpls/sparse_pls.h"
#include "bootpls/stopping.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

namespace bootpls::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::Fit, "fit"},
    {Command::SelectStatic, "select-static"},
    {Command::SelectDynamic, "select-dynamic"},
    {Command::TuneSplsCv, "tune-spls-cv"},
    {Command::TuneSplsBoot, "tune-spls-boot"},
    {Command::Gpls, "gpls"},
    {Command::Simulate, "simulate"},
    {Command::Compare, "compare"},
};

[[noreturn]] void config_error(const std::string& message) { fail(ErrorKind::ConfigError, message); }

bool needs_data(Command c) { return c != Command::Simulate && c != Command::Compare; }

std::string version_string() { return "0.1.0"; }

// ---------------------------------------------------------------- output

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::IoError, "cannot write " + path.string());
  os << text;
  if (!os) fail(ErrorKind::IoError, "write failed: " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

// NaN and inf have no JSON literal; they are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

json ci_json(const ConfidenceInterval& ci) {
  return json{{"lo", number(ci.lo)},         {"hi", number(ci.hi)}, {"level", ci.level},
              {"method", to_string(ci.method)}, {"z0", number(ci.z0)}, {"a", number(ci.a)},
              {"z0_clamped", ci.z0_clamped}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

struct Inputs {
  LoadedData train;
  std::optional<LoadedData> test;
};

std::string predictor_name(const Inputs& in, int j) {
  return in.train.predictor_names.at(static_cast<std::size_t>(j));
}

json support_names(const Inputs& in, const std::vector<int>& support) {
  json names = json::array();
  for (int j : support) names.push_back(predictor_name(in, j));
  return names;
}

// ---------------------------------------------------------------- context

class Run {
 public:
  explicit Run(const RunConfig& cfg) : cfg_(cfg) {
    fs::create_directories(cfg.output_dir);
  }

  void file(const std::string& name, const std::string& text) {
    write_text(cfg_.output_dir / name, text);
    outputs_.push_back(name);
  }
  void file(const std::string& name, const json& j) { file(name, j.dump(2) + "\n"); }
  // Registers a file written by someone else.
  void record(const std::string& name) { outputs_.push_back(name); }

  void manifest(json seeds) {
    json m;
    m["tool"] = "bootpls";
    m["version"] = version_string();
    m["command"] = to_string(cfg_.command);
    m["config"] = config_json();
    m["seeds"] = std::move(seeds);
    m["tolerances"] = json{{"degenerate_direction", kDegenerateTol},
                           {"gpls_divergence_ratio", kDivergenceRatio},
                           {"q2_threshold", StoppingConfig{}.q2_threshold},
                           {"min_finite_replicates", "min(R, max(50, ceil(R/2)))"}};
    m["libraries"] = json{{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                        "." + std::to_string(EIGEN_MINOR_VERSION)},
                          {"boost", BOOST_LIB_VERSION},
                          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                          {"cli11", CLI11_VERSION},
                          {"compiler", __VERSION__},
                          {"openmp_threads", thread_count()}};
    m["outputs"] = outputs_;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ts;
    ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    m["timestamp"] = ts.str();
    write_json(cfg_.output_dir / "manifest.json", m);
  }

  json config_json() const {
    json c;
    c["command"] = to_string(cfg_.command);
    if (!cfg_.data_path.empty()) c["data"] = cfg_.data_path.string();
    if (!cfg_.test_path.empty()) c["test"] = cfg_.test_path.string();
    c["response"] = cfg_.response;
    c["R"] = cfg_.replicates;
    c["kmax"] = cfg_.k_max;
    c["folds"] = cfg_.folds;
    c["alpha"] = cfg_.alpha;
    c["eta_grid"] = cfg_.eta_grid;
    c["seed"] = cfg_.seed;
    c["scale"] = cfg_.scale;
    c["jackknife"] = cfg_.jackknife;
    c["components"] = cfg_.components;
    c["criterion"] = cfg_.criterion;
    if (!needs_data(cfg_.command)) {
      c["design"] = cfg_.design;
      c["n"] = cfg_.n;
      c["p"] = cfg_.p;
      c["qratio"] = cfg_.qratios;
      c["sigma"] = cfg_.sigmas;
      c["snr"] = cfg_.snr;
      c["trials"] = cfg_.trials;
      c["cv_repeats"] = cfg_.cv_repeats;
      c["methods"] = cfg_.methods;
      c["write_data"] = cfg_.write_data;
    }
    return c;
  }

  const RunConfig& cfg() const { return cfg_; }

 private:
  const RunConfig& cfg_;
  std::vector<std::string> outputs_;
};

Inputs load_inputs(const RunConfig& cfg) {
  Inputs in;
  in.train = load_csv(cfg.data_path, cfg.response);
  if (!cfg.test_path.empty()) {
    in.test = load_csv(cfg.test_path, cfg.response);
    if (in.test->predictor_names != in.train.predictor_names) {
      fail(ErrorKind::DimensionMismatch, "test file columns differ from the training file");
    }
  }
  return in;
}

StoppingConfig stopping_config(const RunConfig& cfg) {
  StoppingConfig s;
  s.k_max = cfg.k_max;
  s.replicates = cfg.replicates;
  s.alpha = cfg.alpha;
  s.folds = cfg.folds;
  s.jackknife = cfg.jackknife;
  return s;
}

SelectionConfig selection_config(const RunConfig& cfg) {
  SelectionConfig s;
  s.replicates = cfg.replicates;
  s.alpha = cfg.alpha;
  s.jackknife = cfg.jackknife;
  return s;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream os;
  os << "k,component,lo,hi,method,excludes_zero\n";
  for (const auto& row : trace) {
    os << row.k << ',' << row.component << ',' << fmt(row.ci.lo) << ',' << fmt(row.ci.hi) << ','
       << to_string(row.ci.method) << ',' << (row.ci.excludes_zero() ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string coefficients_csv(const Inputs& in, const Eigen::VectorXd& beta, double intercept) {
  std::ostringstream os;
  os << "index,name,beta\n";
  os << "-1,(intercept)," << fmt(intercept) << '\n';
  for (Index j = 0; j < beta.size(); ++j) {
    os << j << ',' << csv_field(predictor_name(in, static_cast<int>(j))) << ',' << fmt(beta[j]) << '\n';
  }
  return os.str();
}

// --------------------------------------------------------------- commands

struct ChosenK {
  int k = 0;
  json detail;
  std::vector<TraceRow> trace;
};

ChosenK choose_k(const Dataset& data, const RunConfig& cfg) {
  ChosenK out;
  if (cfg.components > 0) {
    out.k = cfg.components;
    out.detail = json{{"rule", "fixed"}, {"k", out.k}};
    return out;
  }
  const StoppingConfig sc = stopping_config(cfg);
  if (cfg.criterion == "q2") {
    const auto q2 = q2_select_k(data, sc, derive_seed(cfg.seed, Stream::Inner));
    out.k = q2.k;
    out.detail = json{{"rule", "q2"}, {"k", q2.k}, {"forced", q2.forced}, {"q2", q2.q2}, {"press", q2.press}};
    return out;
  }
  auto sel = bootyt_select_k(data, sc, derive_seed(cfg.seed, Stream::Inner));
  out.k = sel.k;
  out.trace = std::move(sel.trace);
  out.detail = json{{"rule", "bootyt"}, {"k", sel.k}, {"ci_tests", sel.ci_tests}, {"stop_reason", sel.stop_reason}};
  return out;
}

void cmd_fit(Run& run, const Inputs& in) {
  const RunConfig& cfg = run.cfg();
  const Dataset data = standardize(in.train.x, in.train.y, cfg.scale);
  const ChosenK chosen = choose_k(data, cfg);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(data.p());
  double intercept = data.y_mean;
  if (chosen.k > 0) {
    const PlsFit fit = pls_fit(data, chosen.k);
    beta = fit.beta;
    intercept = fit.intercept;
  }

  json r;
  r["command"] = "fit";
  r["n"] = data.n();
  r["p"] = data.p();
  r["k"] = chosen.k;
  r["k_selection"] = chosen.detail;
  r["intercept"] = intercept;
  r["beta"] = vector_json(beta);
  const Eigen::VectorXd train_pred = (data.raw_x * beta).array() + intercept;
  r["train_mse"] = pmse(train_pred, in.train.y);
  if (in.test) {
    const Eigen::VectorXd pred = (in.test->x * beta).array() + intercept;
    r["test_mse"] = pmse(pred, in.test->y);
  }
  run.file("results.json", r);
  run.file("coefficients.csv", coefficients_csv(in, beta, intercept));
  if (!chosen.trace.empty()) run.file("trace.csv", trace_csv(chosen.trace));
  run.manifest(json{{"root", cfg.seed}, {"criterion", derive_seed(cfg.seed, Stream::Inner)}});
}

json selection_json(const Inputs& in, const SelectionResult& res) {
  json r;
  r["status"] = to_string(res.status);
  r["replicates"] = res.replicates;
  r["excluded"] = res.excluded;
  r["k_original"] = res.k_original;
  r["support"] = res.support;
  r["support_names"] = support_names(in, res.support);
  json hist = json::array();
  for (const auto& [k, count] : res.k_histogram) hist.push_back(json{{"k", k}, {"count", count}});
  r["k_histogram"] = hist;
  json cis = json::array();
  for (std::size_t j = 0; j < res.per_predictor_ci.size(); ++j) {
    json c = ci_json(res.per_predictor_ci[j]);
    c["index"] = j;
    c["name"] = predictor_name(in, static_cast<int>(j));
    c["original"] = number(res.original_beta[static_cast<Index>(j)]);
    cis.push_back(std::move(c));
  }
  r["intervals"] = cis;
  r["final_model"] = json{{"k", res.final_fit.k},
                          {"intercept", number(res.final_fit.intercept)},
                          {"beta", vector_json(res.final_fit.beta)}};
  return r;
}

void write_selection_files(Run& run, const Inputs& in, const SelectionResult& res) {
  std::ostringstream ci;
  ci << "index,name,original,lo,hi,method,z0,a,selected\n";
  for (std::size_t j = 0; j < res.per_predictor_ci.size(); ++j) {
    const auto& c = res.per_predictor_ci[j];
    const bool sel = std::binary_search(res.support.begin(), res.support.end(), static_cast<int>(j));
    ci << j << ',' << csv_field(predictor_name(in, static_cast<int>(j))) << ','
       << fmt(res.original_beta[static_cast<Index>(j)]) << ',' << fmt(c.lo) << ',' << fmt(c.hi) << ','
       << to_string(c.method) << ',' << fmt(c.z0) << ',' << fmt(c.a) << ',' << (sel ? 1 : 0) << '\n';
  }
  run.file("intervals.csv", ci.str());

  std::ostringstream sup;
  sup << "index,name\n";
  for (int j : res.support) sup << j << ',' << csv_field(predictor_name(in, j)) << '\n';
  run.file("support.csv", sup.str());

  std::ostringstream hist;
  hist << "k,count\n";
  for (const auto& [k, count] : res.k_histogram) hist << k << ',' << count << '\n';
  run.file("k_histogram.csv", hist.str());

  run.file("coefficients.csv", coefficients_csv(in, res.final_fit.beta, res.final_fit.intercept));
}

json selection_seeds(std::uint64_t seed) {
  return json{{"root", seed},
              {"original", derive_seed(seed, Stream::Original)},
              {"final", derive_seed(seed, Stream::Final)},
              {"outer_rows", "derive_seed(root, outer, r)"},
              {"inner", "derive_seed(root, inner, r)"},
              {"jackknife", "derive_seed(root, jackknife, i)"}};
}

void cmd_select(Run& run, const Inputs& in, bool dynamic) {
  const RunConfig& cfg = run.cfg();
  const Dataset data = standardize(in.train.x, in.train.y, cfg.scale);
  const SelectionConfig sc = selection_config(cfg);
  const PlsModel model;

  json r;
  SelectionResult res;
  if (dynamic) {
    if (cfg.criterion == "q2") {
      res = dynamic_select(data, model, Q2Criterion(stopping_config(cfg)), sc, cfg.seed);
    } else {
      res = dynamic_select(data, model, BootYtCriterion(stopping_config(cfg), ComponentRegression::Linear), sc,
                           cfg.seed);
    }
    r["command"] = "select-dynamic";
    r["criterion"] = cfg.criterion;
  } else {
    const ChosenK chosen = choose_k(data, cfg);
    r["command"] = "select-static";
    r["k_selection"] = chosen.detail;
    if (chosen.k == 0) fail(ErrorKind::EmptySupport, "the criterion retained no component on the full data");
    res = static_select(data, model, chosen.k, sc, derive_seed(cfg.seed, Stream::Outer));
    if (!chosen.trace.empty()) run.file("trace.csv", trace_csv(chosen.trace));
  }
  r.update(selection_json(in, res));
  if (in.test) {
    const Eigen::VectorXd pred = (in.test->x * res.final_fit.beta).array() + res.final_fit.intercept;
    r["test_mse"] = pmse(pred, in.test->y);
  }
  run.file("results.json", r);
  write_selection_files(run, in, res);
  json seeds = selection_seeds(dynamic ? cfg.seed : derive_seed(cfg.seed, Stream::Outer));
  if (!dynamic) seeds["criterion"] = derive_seed(cfg.seed, Stream::Inner);
  seeds["root"] = cfg.seed;
  run.manifest(seeds);
}

SparsityConfig sparsity_config(const RunConfig& cfg) {
  SparsityConfig s;
  s.eta_grid = cfg.eta_grid;
  s.k_max = cfg.k_max;
  s.folds = cfg.folds;
  return s;
}

json spls_model_json(const Inputs& in, const SparseFit& fit) {
  return json{{"eta", fit.eta},
              {"k", fit.k},
              {"active", fit.active},
              {"active_names", support_names(in, fit.active)},
              {"intercept", fit.intercept},
              {"beta", vector_json(fit.beta)}};
}

void cmd_tune_cv(Run& run, const Inputs& in) {
  const RunConfig& cfg = run.cfg();
  const Dataset data = standardize(in.train.x, in.train.y, cfg.scale);
  const TuneCvResult tuned = tune_cv(data, sparsity_config(cfg), cfg.seed);
  const SparseFit fit = spls_fit(data, tuned.eta, tuned.k);

  json r;
  r["command"] = "tune-spls-cv";
  r["eta"] = tuned.eta;
  r["k"] = tuned.k;
  r["cv_evaluations"] = tuned.cv_evaluations;
  r["model"] = spls_model_json(in, fit);
  if (in.test) r["test_mse"] = pmse(predict(fit, in.test->x), in.test->y);
  run.file("results.json", r);

  std::ostringstream tab;
  tab << "eta,k,cv_mse\n";
  for (const auto& c : tuned.table) tab << fmt(c.eta) << ',' << c.k << ',' << fmt(c.mse) << '\n';
  run.file("cv_table.csv", tab.str());
  run.file("coefficients.csv", coefficients_csv(in, fit.beta, fit.intercept));
  run.manifest(json{{"root", cfg.seed}, {"folds", "fold_assignment(n, folds, root)"}});
}

void cmd_tune_boot(Run& run, const Inputs& in) {
  const RunConfig& cfg = run.cfg();
  const Dataset data = standardize(in.train.x, in.train.y, cfg.scale);
  const TuneBootResult tuned =
      tune_bootyt(data, sparsity_config(cfg), cfg.replicates, cfg.alpha, cfg.seed, cfg.jackknife);
  const SparseFit fit = spls_fit(data, tuned.eta, tuned.k);

  json r;
  r["command"] = "tune-spls-boot";
  r["eta"] = tuned.eta;
  r["k"] = tuned.k;
  r["cv_evaluations"] = tuned.cv_evaluations;
  json per = json::array();
  for (const auto& e : tuned.per_eta) {
    per.push_back(json{{"eta", e.eta}, {"k_opt", e.k_opt}, {"cv_mse", number(e.cv_mse)},
                       {"ci_tests", e.ci_tests}, {"reason", e.reason}});
  }
  r["per_eta"] = per;
  r["model"] = spls_model_json(in, fit);
  if (in.test) r["test_mse"] = pmse(predict(fit, in.test->x), in.test->y);
  run.file("results.json", r);

  std::ostringstream tab;
  tab << "eta,k_opt,cv_mse,ci_tests,reason\n";
  for (const auto& e : tuned.per_eta) {
    tab << fmt(e.eta) << ',' << e.k_opt << ',' << fmt(e.cv_mse) << ',' << e.ci_tests << ','
        << csv_field(e.reason) << '\n';
  }
  run.file("k_opt_per_eta.csv", tab.str());
  run.file("coefficients.csv", coefficients_csv(in, fit.beta, fit.intercept));
  run.manifest(json{{"root", cfg.seed},
                    {"per_eta_plan", "derive_seed(root, eta, e)"},
                    {"folds", "fold_assignment(n, folds, root)"}});
}

Eigen::VectorXd final_probability(const SelectionResult& res, const Eigen::MatrixXd& x) {
  if (res.status == SelectionStatus::EmptySupport) {
    return Eigen::VectorXd::Constant(x.rows(), res.final_fit.intercept);
  }
  const Eigen::ArrayXd eta = (x * res.final_fit.beta).array() + res.final_fit.intercept;
  return (1.0 / (1.0 + (-eta).exp())).matrix();
}

void cmd_gpls(Run& run, const Inputs& in) {
  const RunConfig& cfg = run.cfg();
  check_binary(in.train.y);
  if (in.test) check_binary(in.test->y);
  const Dataset data = standardize(in.train.x, in.train.y, cfg.scale);
  const SelectionConfig sc = selection_config(cfg);
  const GplsModel model(Link::Logit);

  SelectionResult res;
  json r;
  r["command"] = "gpls";
  if (cfg.components > 0) {
    r["mode"] = "static";
    res = static_select(data, model, cfg.components, sc, cfg.seed);
  } else {
    r["mode"] = "dynamic";
    res = dynamic_select(data, model, BootYtCriterion(stopping_config(cfg), ComponentRegression::Logistic), sc,
                         cfg.seed);
  }
  r.update(selection_json(in, res));

  std::ostringstream metrics;
  metrics << "set,n,misclassified,mse\n";
  json mj = json::array();
  auto add = [&](const char* set, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const ClassifyMetrics m = classify_metrics(final_probability(res, x), y);
    metrics << set << ',' << y.size() << ',' << m.misclassified << ',' << fmt(m.mse) << '\n';
    mj.push_back(json{{"set", set}, {"n", y.size()}, {"misclassified", m.misclassified}, {"mse", m.mse}});
  };
  add("train", in.train.x, in.train.y);
  if (in.test) add("test", in.test->x, in.test->y);
  r["metrics"] = mj;
  run.file("results.json", r);
  write_selection_files(run, in, res);
  run.file("metrics.csv", metrics.str());
  run.manifest(selection_seeds(cfg.seed));
}

// Predictors of a file used as the design of a linear-response comparison;
// the response column is dropped when present.
Eigen::MatrixXd predictors_only(const fs::path& path, const std::string& response) {
  CsvTable t = read_csv(path);
  std::vector<int> keep;
  for (std::size_t j = 0; j < t.names.size(); ++j) {
    if (t.names[j] != response) keep.push_back(static_cast<int>(j));
  }
  if (keep.empty()) fail(ErrorKind::InvalidArgument, path.string() + " has no predictor columns");
  return select_columns(t.values, keep);
}

std::vector<std::string> numbered(const std::string& prefix, Index count) {
  std::vector<std::string> names;
  for (Index j = 0; j < count; ++j) names.push_back(prefix + std::to_string(j + 1));
  return names;
}

void save_matrix(Run& run, const std::string& name, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  LoadedData d;
  d.x = x;
  d.y = y;
  d.predictor_names = numbered("x", x.cols());
  d.response_name = "y";
  save_csv(run.cfg().output_dir / name, d);
  run.record(name);
}

// Shortest representation that round-trips, so 0.95 stays "0.95".
std::string cell_label(const char* key, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(key) + "=" + std::string(buf, res.ptr);
}

json report_json(const std::vector<ReportCell>& cells) {
  json out = json::array();
  for (const auto& cell : cells) {
    json methods = json::array();
    for (const auto& s : cell.report.summaries) {
      methods.push_back(json{{"method", to_string(s.method)},
                             {"mean_accuracy", s.mean_accuracy},
                             {"mean_support_size", s.mean_support_size},
                             {"gamma1", s.stability.distinct_supports},
                             {"support_rate", s.stability.support_rate},
                             {"gamma2", s.stability.distinct_models},
                             {"model_rate", s.stability.model_rate},
                             {"modal_support", s.stability.modal_model.support},
                             {"k_sel", s.stability.modal_model.k},
                             {"mean_cv_mse", number(s.mean_cv_mse)},
                             {"pmse", number(s.pmse)}});
    }
    out.push_back(json{{"cell", cell.label}, {"methods", methods}});
  }
  return out;
}

void cmd_simulate(Run& run) {
  const RunConfig& cfg = run.cfg();
  ComparisonConfig cc;
  cc.trials = cfg.trials;
  cc.replicates = cfg.replicates;
  cc.alpha = cfg.alpha;
  cc.k_max = cfg.k_max;
  cc.folds = cfg.folds;
  cc.eta_grid = cfg.eta_grid;
  cc.jackknife = cfg.jackknife;
  cc.cv_repeats = cfg.cv_repeats;
  cc.scale = cfg.scale;
  std::vector<Method> methods;
  for (const auto& m : cfg.methods) methods.push_back(parse_method(m));

  std::vector<ReportCell> cells;
  json seeds{{"root", cfg.seed}};
  if (cfg.design == "hidden-groups") {
    for (std::size_t c = 0; c < cfg.qratios.size(); ++c) {
      HiddenGroupDesign d = hidden_group_design(cfg.n, cfg.p, cfg.qratios[c], cfg.seed);
      d.snr = cfg.snr;
      if (cfg.write_data && c == 0) {
        HiddenGroupDesign first = d;
        first.seed = derive_seed(cfg.seed, Stream::Trial, 0);
        const SimulatedData sim = gen_hidden_groups(first);
        save_matrix(run, "data_train.csv", sim.x, sim.y);
      }
      if (cfg.trials > 0) cells.push_back({cell_label("qratio", cfg.qratios[c]), run_comparison(methods, d, cc, cfg.seed)});
    }
    seeds["trial_data"] = "derive_seed(root, trial, t)";
  } else {
    Eigen::MatrixXd x_train, x_test;
    if (!cfg.data_path.empty()) {
      x_train = predictors_only(cfg.data_path, cfg.response);
      if (!cfg.test_path.empty()) x_test = predictors_only(cfg.test_path, cfg.response);
    } else {
      SurrogatePredictors sp = surrogate_predictors(cfg.seed);
      x_train = std::move(sp.train);
      x_test = std::move(sp.test);
      seeds["surrogate_predictors"] = cfg.seed;
    }
    for (std::size_t c = 0; c < cfg.sigmas.size(); ++c) {
      LinearResponseCase lc;
      lc.design.x_source = x_train;
      lc.design.support_idx = kPlantedSupport;
      lc.design.beta = planted_beta();
      lc.design.sigma = cfg.sigmas[c];
      lc.x_test = x_test;
      if (cfg.write_data && c == 0) {
        const LinearResponse resp = gen_linear_response(lc.design, derive_seed(cfg.seed, Stream::Noise));
        save_matrix(run, "data_train.csv", x_train, resp.y);
        if (x_test.size() > 0) {
          const Eigen::VectorXd target = select_columns(x_test, kPlantedSupport) * planted_beta();
          save_matrix(run, "data_test.csv", x_test, target);
        }
      }
      if (cfg.trials > 0) cells.push_back({cell_label("sigma", cfg.sigmas[c]), run_comparison(methods, lc, cc, cfg.seed)});
    }
    seeds["noise"] = derive_seed(cfg.seed, Stream::Noise);
    seeds["cv_repeat"] = "derive_seed(root, cv_repeat, i)";
  }
  seeds["method"] = "derive_seed(root, {trial, t, method, m})";

  if (cfg.trials > 0) {
    json r;
    r["command"] = to_string(cfg.command);
    r["design"] = cfg.design;
    r["cells"] = report_json(cells);
    run.file("results.json", r);
    std::ostringstream summary, trials, cv;
    write_summary_csv(summary, cells);
    write_trials_csv(trials, cells);
    write_cv_csv(cv, cells);
    run.file("summary.csv", summary.str());
    run.file("trials.csv", trials.str());
    if (cfg.design == "linear-response") run.file("cv_mse.csv", cv.str());
  }
  run.manifest(seeds);
}

fs::path default_output_dir() {
  if (const char* env = std::getenv("BOOTPLS_OUTPUT_DIR"); env && *env) return env;
  return "bootpls-out";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::ParseError:
    case ErrorKind::MissingColumn:
    case ErrorKind::IoError:
    case ErrorKind::NonBinaryResponse:
    case ErrorKind::BoundaryNotIntegral:
      return 2;
    default:
      return 1;
  }
}

void write_error(const fs::path& dir, std::string_view kind, const std::string& message, int code) {
  const json err{{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << err.dump() << '\n';
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return;
  std::ofstream os(dir / "error.json", std::ios::binary);
  if (os) os << err.dump(2) << '\n';
}

}  // namespace

std::string_view to_string(Command command) {
  for (const auto& [c, name] : kCommands) {
    if (c == command) return name;
  }
  return "unknown";
}

RunConfig resolve(RunConfig cfg) {
  if (cfg.output_dir.empty()) cfg.output_dir = default_output_dir();
  if (cfg.replicates == 0) cfg.replicates = cfg.command == Command::Gpls ? kGplsReplicates : 1000;
  if (cfg.replicates < 1) config_error("--R must be positive");
  if (cfg.k_max < 1) config_error("--kmax must be positive");
  if (cfg.folds < 2) config_error("--folds must be at least 2");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) config_error("--alpha must lie in (0, 1)");
  if (cfg.components < 0) config_error("--components must be non-negative");
  if (cfg.threads < 0) config_error("--threads must be non-negative");
  if (cfg.criterion != "bootyt" && cfg.criterion != "q2") config_error("--criterion must be bootyt or q2");
  if (cfg.command == Command::Gpls && cfg.criterion != "bootyt") {
    config_error("gpls supports only the bootyt criterion");
  }
  if (cfg.eta_grid.empty()) config_error("--eta-grid must not be empty");
  for (double e : cfg.eta_grid) {
    if (!(e >= 0.0 && e < 1.0)) config_error("--eta-grid values must lie in [0, 1)");
  }
  if (cfg.command == Command::TuneSplsBoot && cfg.replicates < 100) {
    config_error("tune-spls-boot needs --R of at least 100");
  }

  if (needs_data(cfg.command)) {
    if (cfg.data_path.empty()) config_error(std::string(to_string(cfg.command)) + " requires --data");
    return cfg;
  }

  if (cfg.design.empty()) cfg.design = cfg.command == Command::Simulate ? "hidden-groups" : "linear-response";
  if (cfg.design != "hidden-groups" && cfg.design != "linear-response") {
    config_error("--design must be hidden-groups or linear-response");
  }
  if (cfg.methods.empty()) {
    if (cfg.command == Command::Simulate) {
      cfg.methods = {"SPLS-CV", "BootYTdyn"};
    } else {
      cfg.methods = {"Q2", "BootYT", "BootYTdyn", "SPLS-CV", "SPLS-BootYT"};
    }
  }
  for (auto& m : cfg.methods) {
    try {
      m = std::string(to_string(parse_method(m)));
    } catch (const Error& e) {
      config_error(e.what());
    }
  }
  if (cfg.trials < 0) config_error("--trials must be non-negative");
  if (cfg.trials == 0 && !cfg.write_data) config_error("--trials 0 is only allowed with --write-data");
  if (cfg.cv_repeats < 0) config_error("--cv-repeats must be non-negative");
  if (cfg.design == "hidden-groups") {
    if (cfg.qratios.empty()) cfg.qratios = {0.95};
    if (cfg.n < 3 || cfg.p < 1) config_error("--n must be at least 3 and --p positive");
    if (!(cfg.snr > 0.0)) config_error("--snr must be positive");
    for (double q : cfg.qratios) {
      if (!(q >= 0.0 && q < 1.0)) config_error("--qratio values must lie in [0, 1)");
      try {
        group_boundaries(hidden_group_design(cfg.n, cfg.p, q, cfg.seed));
      } catch (const Error& e) {
        config_error(e.what());
      }
    }
  } else {
    if (cfg.sigmas.empty()) cfg.sigmas = {0.5, 1.0, 3.0, 4.0, 5.0, 6.366};
    for (double s : cfg.sigmas) {
      if (!(s >= 0.0)) config_error("--sigma values must be non-negative");
    }
    if (cfg.data_path.empty() && !cfg.test_path.empty()) config_error("--test requires --data");
  }
  return cfg;
}

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Bootstrap variable and component selection for PLS regression", "bootpls"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  std::string data, test, out;
  app.add_option("--data", data, "training CSV with a header row");
  app.add_option("--test", test, "test CSV with the same columns");
  app.add_option("--response", cfg.response, "name of the response column")->capture_default_str();
  app.add_option("--R", cfg.replicates, "bootstrap replicates (default 1000, gpls 4000)");
  app.add_option("--kmax", cfg.k_max, "largest number of components")->capture_default_str();
  app.add_option("--folds", cfg.folds, "cross-validation folds")->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "interval level is 1 - alpha")->capture_default_str();
  app.add_option("--eta-grid", cfg.eta_grid, "comma-separated sparsity grid")->delimiter(',');
  app.add_option("--seed", cfg.seed, "root seed")->capture_default_str();
  app.add_option("--out", out, "output directory (default $BOOTPLS_OUTPUT_DIR or bootpls-out)");
  app.add_flag("--scale,!--no-scale", cfg.scale, "scale predictors to unit variance");
  app.add_flag("--jackknife,!--no-jackknife", cfg.jackknife, "BCa acceleration from leave-one-out fits");
  app.add_option("--threads", cfg.threads, "worker threads (0: all available)");
  app.add_option("--components", cfg.components, "fixed number of components (0: use --criterion)");
  app.add_option("--criterion", cfg.criterion, "bootyt or q2")->capture_default_str();
  app.add_option("--design", cfg.design, "hidden-groups or linear-response");
  app.add_option("--n", cfg.n, "observations per simulated dataset")->capture_default_str();
  app.add_option("--p", cfg.p, "predictors per simulated dataset")->capture_default_str();
  app.add_option("--qratio", cfg.qratios, "spurious-predictor ratio(s), comma-separated")->delimiter(',');
  app.add_option("--sigma", cfg.sigmas, "noise standard deviation(s), comma-separated")->delimiter(',');
  app.add_option("--snr", cfg.snr, "signal-to-noise ratio of the hidden-group response")->capture_default_str();
  app.add_option("--trials", cfg.trials, "simulation trials")->capture_default_str();
  app.add_option("--cv-repeats", cfg.cv_repeats, "CV-MSE repetitions of the modal model")->capture_default_str();
  app.add_option("--methods", cfg.methods, "Q2, BootYT, BootYTdyn, SPLS-CV, SPLS-BootYT")->delimiter(',');
  app.add_flag("--write-data", cfg.write_data, "also write the simulated dataset");

  for (const auto& [command, name] : kCommands) {
    auto* sub = app.add_subcommand(std::string(name));
    sub->fallthrough();
    sub->callback([&cfg, command = command] { cfg.command = command; });
  }
  app.get_subcommand("fit")->description("PLS fit with K fixed or chosen by the criterion");
  app.get_subcommand("select-static")->description("bootstrap variable selection with one K for all replicates");
  app.get_subcommand("select-dynamic")->description("bootstrap variable selection with K chosen per replicate");
  app.get_subcommand("tune-spls-cv")->description("sparse PLS tuned by cross-validation");
  app.get_subcommand("tune-spls-boot")->description("sparse PLS tuned by bootstrap component tests");
  app.get_subcommand("gpls")->description("PLS logistic regression with bootstrap variable selection");
  app.get_subcommand("simulate")->description("selection accuracy and stability on simulated designs");
  app.get_subcommand("compare")->description("method comparison on a planted linear response");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    std::exit(0);
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    std::exit(0);
  } catch (const CLI::CallForVersion&) {
    std::cout << version_string() << '\n';
    std::exit(0);
  } catch (const CLI::ParseError& e) {
    config_error(e.what());
  }
  cfg.data_path = data;
  cfg.test_path = test;
  cfg.output_dir = out;
  return cfg;
}

void execute(const RunConfig& cfg) {
  if (cfg.threads > 0) set_thread_count(cfg.threads);
  Run run(cfg);
  switch (cfg.command) {
    case Command::Fit: cmd_fit(run, load_inputs(cfg)); break;
    case Command::SelectStatic: cmd_select(run, load_inputs(cfg), false); break;
    case Command::SelectDynamic: cmd_select(run, load_inputs(cfg), true); break;
    case Command::TuneSplsCv: cmd_tune_cv(run, load_inputs(cfg)); break;
    case Command::TuneSplsBoot: cmd_tune_boot(run, load_inputs(cfg)); break;
    case Command::Gpls: cmd_gpls(run, load_inputs(cfg)); break;
    case Command::Simulate:
    case Command::Compare: cmd_simulate(run); break;
  }
}

namespace {

// Output directory named on the command line, found without a full parse so
// that argument errors still land next to the requested outputs.
fs::path scan_output_dir(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--out" && i + 1 < argc) return argv[i + 1];
    if (arg.starts_with("--out=")) return fs::path(std::string(arg.substr(6)));
  }
  return {};
}

}  // namespace

int run(int argc, const char* const* argv) {
  fs::path dir;
  try {
    dir = scan_output_dir(argc, argv);
    RunConfig parsed = parse_args(argc, argv);
    dir = parsed.output_dir.empty() ? default_output_dir() : parsed.output_dir;
    const RunConfig cfg = resolve(std::move(parsed));
    execute(cfg);
    return 0;
  } catch (const Error& e) {
    if (dir.empty()) dir = default_output_dir();
    const int code = exit_code(e.kind());
    write_error(dir, to_string(e.kind()), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    if (dir.empty()) dir = default_output_dir();
    write_error(dir, "InternalError", e.what(), 1);
    return 1;
  }
}

}  // namespace bootpls::cli
