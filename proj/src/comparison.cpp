#include "bootpls/comparison.h"

#include "bootpls/errors.h"
#include "bootpls/seeding.h"
#include "bootpls/sparse_pls.h"
#include "bootpls/stopping.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <string>

namespace bootpls {

namespace {

StoppingConfig stopping_config(const ComparisonConfig& cfg) {
  StoppingConfig sc;
  sc.k_max = cfg.k_max;
  sc.replicates = cfg.replicates;
  sc.alpha = cfg.alpha;
  sc.folds = cfg.folds;
  sc.jackknife = cfg.jackknife;
  return sc;
}

SelectionConfig selection_config(const ComparisonConfig& cfg) {
  SelectionConfig sc;
  sc.replicates = cfg.replicates;
  sc.alpha = cfg.alpha;
  sc.jackknife = cfg.jackknife;
  return sc;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string join(const std::vector<int>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Q2: return "Q2";
    case Method::BootYt: return "BootYT";
    case Method::BootYtDyn: return "BootYTdyn";
    case Method::SplsCv: return "SPLS-CV";
    case Method::SplsBootYt: return "SPLS-BootYT";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  const std::string s = lower(name);
  for (Method m : {Method::Q2, Method::BootYt, Method::BootYtDyn, Method::SplsCv, Method::SplsBootYt}) {
    if (s == lower(to_string(m))) return m;
  }
  fail(ErrorKind::ConfigError, "unknown method '" + std::string(name) + "'");
}

TrialOutcome run_method(Method method, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        const ComparisonConfig& cfg, std::uint64_t seed) {
  const Dataset d = standardize(x, y, cfg.scale);
  const StoppingConfig sc = stopping_config(cfg);
  TrialOutcome out;
  out.method = method;

  auto static_with = [&](int k) {
    if (k == 0) return;
    const SelectionResult r = static_select(d, PlsModel{}, k, selection_config(cfg), derive_seed(seed, Stream::Outer));
    out.support = r.support;
    out.k = r.final_fit.k;
  };

  switch (method) {
    case Method::Q2:
      static_with(q2_select_k(d, sc, seed).k);
      break;
    case Method::BootYt:
      static_with(bootyt_select_k(d, sc, derive_seed(seed, Stream::Inner)).k);
      break;
    case Method::BootYtDyn: {
      const SelectionResult r =
          dynamic_select(d, PlsModel{}, BootYtCriterion(sc, ComponentRegression::Linear), selection_config(cfg), seed);
      out.support = r.support;
      out.k = r.final_fit.k;
      break;
    }
    case Method::SplsCv:
    case Method::SplsBootYt: {
      SparsityConfig spc;
      spc.eta_grid = cfg.eta_grid;
      spc.k_max = cfg.k_max;
      spc.folds = cfg.folds;
      double eta = 0.0;
      int k = 0;
      if (method == Method::SplsCv) {
        const TuneCvResult t = tune_cv(d, spc, seed);
        eta = t.eta;
        k = t.k;
      } else {
        try {
          const TuneBootResult t = tune_bootyt(d, spc, cfg.replicates, cfg.alpha, seed, cfg.jackknife);
          eta = t.eta;
          k = t.k;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NoValidEta) throw;
        }
      }
      out.eta = eta;
      if (k > 0) {
        const SparseFit fit = spls_fit(d, eta, k);
        out.support = fit.active;
        out.k = fit.k;
      }
      break;
    }
  }
  return out;
}

ComparisonReport run_comparison(const std::vector<Method>& methods, const ComparisonDesign& design,
                                const ComparisonConfig& cfg, std::uint64_t seed) {
  require(cfg.trials >= 1, "trials must be positive");
  require(!methods.empty(), "at least one method is required");
  ComparisonReport report;

  const auto* hidden = std::get_if<HiddenGroupDesign>(&design);
  const auto* linear = std::get_if<LinearResponseCase>(&design);

  LinearResponse response;
  Eigen::VectorXd test_target;
  if (linear) {
    response = gen_linear_response(linear->design, derive_seed(seed, Stream::Noise));
    if (linear->x_test.size() > 0) {
      test_target = select_columns(linear->x_test, linear->design.support_idx) * linear->design.beta;
    }
  }

  for (int t = 0; t < cfg.trials; ++t) {
    SimulatedData sim;
    if (hidden) {
      HiddenGroupDesign hd = *hidden;
      hd.seed = derive_seed(seed, Stream::Trial, static_cast<std::uint64_t>(t));
      sim = gen_hidden_groups(hd);
    }
    const Eigen::MatrixXd& x = hidden ? sim.x : linear->design.x_source;
    const Eigen::VectorXd& y = hidden ? sim.y : response.y;
    const std::vector<int>& truth = hidden ? sim.true_support : linear->design.support_idx;
    for (Method m : methods) {
      const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(Stream::Trial), static_cast<std::uint64_t>(t),
                                                 static_cast<std::uint64_t>(Stream::Method), static_cast<std::uint64_t>(m)});
      TrialOutcome o = run_method(m, x, y, cfg, s);
      o.trial = t;
      o.accuracy = accuracy(o.support, truth, static_cast<int>(x.cols()));
      report.trials.push_back(std::move(o));
    }
  }

  for (Method m : methods) {
    MethodSummary sum;
    sum.method = m;
    std::vector<ModelKey> keys;
    double acc = 0.0, size = 0.0;
    for (const auto& o : report.trials) {
      if (o.method != m) continue;
      keys.push_back({o.support, o.k});
      acc += o.accuracy;
      size += static_cast<double>(o.support.size());
    }
    sum.mean_accuracy = acc / static_cast<double>(keys.size());
    sum.mean_support_size = size / static_cast<double>(keys.size());
    sum.stability = stability_report(keys);
    if (linear) {
      const ModelKey& modal = sum.stability.modal_model;
      const Eigen::MatrixXd& x = linear->design.x_source;
      double total = 0.0;
      for (int i = 0; i < cfg.cv_repeats; ++i) {
        const double v = cv_mse(x, response.y, response.y_noiseless, modal.support, modal.k, cfg.folds,
                                 derive_seed(seed, Stream::CvRepeat, static_cast<std::uint64_t>(i)), cfg.scale);
        sum.cv_mse.push_back(v);
        total += v;
      }
      if (cfg.cv_repeats > 0) sum.mean_cv_mse = total / cfg.cv_repeats;
      if (test_target.size() > 0) {
        sum.pmse = pmse(pls_support_predict(x, response.y, modal.support, modal.k, linear->x_test, cfg.scale),
                        test_target);
      }
    }
    report.summaries.push_back(std::move(sum));
  }
  return report;
}

void write_summary_csv(std::ostream& os, const std::vector<ReportCell>& cells) {
  os << std::setprecision(17);
  os << "cell,method,mean_accuracy,mean_support_size,gamma1,support_rate,gamma2,model_rate,modal_support,k_sel,"
        "mean_cv_mse,pmse\n";
  for (const auto& cell : cells) {
    for (const auto& s : cell.report.summaries) {
      os << cell.label << ',' << to_string(s.method) << ',' << s.mean_accuracy << ',' << s.mean_support_size << ','
         << s.stability.distinct_supports << ',' << s.stability.support_rate << ','
         << s.stability.distinct_models << ',' << s.stability.model_rate << ",\""
         << join(s.stability.modal_model.support, ' ') << "\"," << s.stability.modal_model.k << ','
         << s.mean_cv_mse << ',' << s.pmse << '\n';
    }
  }
}

void write_trials_csv(std::ostream& os, const std::vector<ReportCell>& cells) {
  os << std::setprecision(17);
  os << "cell,method,trial,support_size,k,eta,accuracy,support\n";
  for (const auto& cell : cells) {
    for (const auto& o : cell.report.trials) {
      os << cell.label << ',' << to_string(o.method) << ',' << o.trial << ',' << o.support.size() << ',' << o.k
         << ',' << o.eta << ',' << o.accuracy << ",\"" << join(o.support, ' ') << "\"\n";
    }
  }
}

void write_cv_csv(std::ostream& os, const std::vector<ReportCell>& cells) {
  os << std::setprecision(17);
  os << "cell,method,repeat,cv_mse\n";
  for (const auto& cell : cells) {
    for (const auto& s : cell.report.summaries) {
      for (std::size_t i = 0; i < s.cv_mse.size(); ++i) {
        os << cell.label << ',' << to_string(s.method) << ',' << i << ',' << s.cv_mse[i] << '\n';
      }
    }
  }
}

}  // namespace bootpls
