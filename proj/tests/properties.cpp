#include "properties.h"

#include "bootpls/bootstrap.h"
#include "bootpls/pls.h"
#include "bootpls/seeding.h"
#include "bootpls/simulation.h"
#include "bootpls/sparse_pls.h"

#include "helpers.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace bootpls::fixture {

namespace {

PropertyResult pls_equals_ols(std::uint64_t seed) {
  PropertyResult r{"full-K PLS equals OLS", true, 0.0, 1e-8, 50};
  Rng rng(seed);
  std::uniform_int_distribution<int> pick_p(3, 10);
  for (int c = 0; c < r.cases; ++c) {
    const int p = pick_p(rng);
    const Eigen::MatrixXd x = gaussian(60, p, rng());
    const Eigen::VectorXd y = x * gaussian_vector(p, rng()) + gaussian_vector(60, rng());
    const PlsFit fit = pls_fit(standardize(x, y), p);
    const Eigen::VectorXd ols = ols_slopes(x, y);
    r.worst = std::max(r.worst, (fit.beta - ols).cwiseAbs().maxCoeff());
  }
  r.pass = r.worst <= r.tolerance;
  return r;
}

PropertyResult score_orthogonality(std::uint64_t seed) {
  PropertyResult r{"score orthogonality", true, 0.0, 1e-8, 50};
  Rng rng(seed);
  std::uniform_int_distribution<int> pick_p(3, 40);
  for (int c = 0; c < r.cases; ++c) {
    const int p = pick_p(rng);
    const Eigen::MatrixXd x = gaussian(60, p, rng());
    const Eigen::VectorXd y = x.col(0) - x.col(p - 1) + gaussian_vector(60, rng());
    const int k = std::min(p, 8);
    const PlsFit fit = pls_fit(standardize(x, y), k);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < a; ++b) {
        const double cosine =
            std::abs(fit.scores.col(a).dot(fit.scores.col(b))) / (fit.scores.col(a).norm() * fit.scores.col(b).norm());
        r.worst = std::max(r.worst, cosine);
      }
    }
  }
  r.pass = r.worst <= r.tolerance;
  return r;
}

PropertyResult sparse_weight_monotone(std::uint64_t seed) {
  PropertyResult r{"sparse_weight support monotone in eta", true, 0.0, 0.0, 1000};
  Rng rng(seed);
  std::uniform_int_distribution<int> pick_p(1, 30);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> z01;
  int violations = 0;
  for (int c = 0; c < r.cases; ++c) {
    Eigen::VectorXd z(pick_p(rng));
    for (auto& v : z) v = z01(rng);
    const double e1 = unit(rng) * 0.999;
    const double e2 = e1 + (0.999 - e1) * unit(rng);
    const Eigen::VectorXd w1 = sparse_weight(z, e1);
    const Eigen::VectorXd w2 = sparse_weight(z, e2);
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      if (w2[j] != 0.0 && w1[j] == 0.0) ++violations;
    }
    if ((w2.array() != 0.0).count() == 0) ++violations;  // argmax always survives
  }
  r.worst = violations;
  r.pass = violations == 0;
  return r;
}

PropertyResult spls_eta_zero_is_pls(std::uint64_t seed) {
  PropertyResult r{"SPLS eta = 0 equals dense PLS", true, 0.0, 1e-10, 20};
  Rng rng(seed);
  std::uniform_int_distribution<int> pick_p(3, 30);
  for (int c = 0; c < r.cases; ++c) {
    const int p = pick_p(rng);
    const Eigen::MatrixXd x = gaussian(40, p, rng());
    const Eigen::VectorXd y = x.col(0) + 0.5 * x.col(1) + gaussian_vector(40, rng());
    const Dataset d = standardize(x, y);
    const int k = std::min(p, 4);
    const SparseFit s = spls_fit(d, 0.0, k);
    const PlsFit dense = pls_fit(d, k);
    const double scale = std::max(1.0, dense.beta.cwiseAbs().maxCoeff());
    r.worst = std::max(r.worst, (s.beta - dense.beta).cwiseAbs().maxCoeff() / scale);
    if (static_cast<int>(s.active.size()) != p) r.worst = std::max(r.worst, 1.0);
  }
  r.pass = r.worst <= r.tolerance;
  return r;
}

PropertyResult bca_symmetric_is_percentile(std::uint64_t seed) {
  PropertyResult r{"BCa equals percentile when z0 = a = 0", true, 0.0, 0.0, 200};
  Rng rng(seed);
  std::uniform_int_distribution<int> half(25, 300);
  std::uniform_int_distribution<int> offset(1, 1000);
  int mismatches = 0;
  for (int c = 0; c < r.cases; ++c) {
    const int h = half(rng);
    const double original = offset(rng) - 500;
    BootstrapDistribution dist;
    dist.original = original;
    dist.replicates.resize(2 * h);
    Eigen::VectorXd jack(2 * h);
    for (int i = 0; i < h; ++i) {
      const double u = offset(rng);
      dist.replicates[2 * i] = original + u;
      dist.replicates[2 * i + 1] = original - u;
      const double v = offset(rng);
      jack[2 * i] = original + v;
      jack[2 * i + 1] = original - v;
    }
    if (c % 2 == 0) dist.jackknife = jack;  // odd cases: no jackknife, a = 0
    const double alpha = c % 3 == 0 ? 0.05 : 0.1;
    const ConfidenceInterval bca = bca_interval(dist, alpha);
    const ConfidenceInterval pct = percentile_interval(dist, alpha);
    if (bca.lo != pct.lo || bca.hi != pct.hi || bca.z0 != 0.0 || bca.a != 0.0) ++mismatches;
  }
  r.worst = mismatches;
  r.pass = mismatches == 0;
  return r;
}

PropertyResult bss_wss_oracle(std::uint64_t seed) {
  PropertyResult r{"bss_wss equals brute-force sums", true, 0.0, 1e-12, 100};
  Rng rng(seed);
  std::uniform_int_distribution<int> classes(2, 4);
  for (int c = 0; c < r.cases; ++c) {
    const int g = classes(rng);
    const int n = 12 + c % 20;
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i % g;
    std::shuffle(labels.begin(), labels.end(), rng);
    Eigen::MatrixXd x = gaussian(n, 5, rng());
    for (int i = 0; i < n; ++i) x(i, 0) += 2.0 * labels[static_cast<std::size_t>(i)];
    const Eigen::VectorXd got = bss_wss(x, labels);
    for (int j = 0; j < 5; ++j) {
      long double all = 0.0L;
      for (int i = 0; i < n; ++i) all += x(i, j);
      all /= n;
      long double bss = 0.0L, wss = 0.0L;
      for (int k = 0; k < g; ++k) {
        long double m = 0.0L;
        int cnt = 0;
        for (int i = 0; i < n; ++i) {
          if (labels[static_cast<std::size_t>(i)] == k) {
            m += x(i, j);
            ++cnt;
          }
        }
        m /= cnt;
        for (int i = 0; i < n; ++i) {
          if (labels[static_cast<std::size_t>(i)] != k) continue;
          bss += (m - all) * (m - all);
          wss += (x(i, j) - m) * (x(i, j) - m);
        }
      }
      const double want = static_cast<double>(bss / wss);
      r.worst = std::max(r.worst, std::abs(got[j] - want) / std::max(1.0, std::abs(want)));
    }
  }
  r.pass = r.worst <= r.tolerance;
  return r;
}

}  // namespace

std::vector<PropertyResult> run_property_suite(std::uint64_t seed) {
  return {pls_equals_ols(derive_seed(seed, Stream::Test, 1)),
          score_orthogonality(derive_seed(seed, Stream::Test, 2)),
          sparse_weight_monotone(derive_seed(seed, Stream::Test, 3)),
          spls_eta_zero_is_pls(derive_seed(seed, Stream::Test, 4)),
          bca_symmetric_is_percentile(derive_seed(seed, Stream::Test, 5)),
          bss_wss_oracle(derive_seed(seed, Stream::Test, 6))};
}

}  // namespace bootpls::fixture
