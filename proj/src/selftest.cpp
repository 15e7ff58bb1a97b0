#include "stein/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "stein/core_model.hpp"
#include "stein/distributions.hpp"
#include "stein/estimators.hpp"
#include "stein/gain.hpp"
#include "stein/optimizer.hpp"
#include "stein/phi.hpp"
#include "stein/quadrature.hpp"

namespace stein {
namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

CheckResult ks_fast_vs_slow(std::uint64_t seed) {
  struct Case {
    int d, k;
    double theta;
  };
  constexpr Case cases[] = {{1, 2, 5.0}, {2, 5, 10.0}, {3, 10, 20.0}};
  constexpr std::size_t n = 10000;
  CheckResult r{"y_statistic slow path vs Gamma fast path (KS, 1%)", true, ""};
  std::uint64_t c = 0;
  for (const auto& cs : cases) {
    Stream s = make_stream(seed, {10, c++});
    const BallWindow w(cs.d);
    const KthDistanceLaw law(cs.k, w, cs.theta);
    std::vector<double> slow(n), fast(n);
    for (std::size_t i = 0; i < n; ++i) slow[i] = y_statistic(sample_pattern(w, cs.theta, s), cs.k);
    for (std::size_t i = 0; i < n; ++i) fast[i] = sample_y(law, s);
    const double ks = ks_two_sample(slow, fast);
    const double crit = ks_critical_1pct(n, n);
    r.ok = r.ok && ks < crit;
    r.detail += fmt("D=%.4f/%.4f ", ks, crit);
  }
  return r;
}

CheckResult pdf_normalization() {
  CheckResult r{"kth-distance pdf integrates to its cdf", true, ""};
  for (int d = 1; d <= 3; ++d) {
    const KthDistanceLaw law(3 * d, BallWindow(d), 5.0 * d);
    const double mass = adaptive_simpson([&](double t) { return kth_distance_sq_pdf(law, t); }, 0.0, 1.0, 1e-11);
    const double err = std::abs(mass - kth_distance_sq_cdf(law, 1.0));
    r.ok = r.ok && err < 1e-6;
    r.detail += fmt("d=%g err=%.2e ", d, err);
  }
  return r;
}

CheckResult gamma_star_identity(std::uint64_t seed) {
  CheckResult r{"gamma* maximizes the sample gain; optimized_gain identity", true, ""};
  const BallWindow w(2);
  const auto draws = YDraws::at_theta(w, 10.0, 30, 30, 20000, seed);
  for (double kappa : {2.0, 3.5, 6.0}) {
    const auto gs = gamma_star_on(draws, 30, kappa);
    const double best = expected_gain_on(draws, 30, ExponentialPhi(gs.gamma, kappa)).value;
    const double closed = optimized_gain_on(draws, 30, kappa).value;
    r.ok = r.ok && std::abs(best - closed) <= 1e-10 * std::max(1.0, std::abs(best));
    for (int j = -20; j <= 20; ++j) {
      const double g = gs.gamma * (1.0 + j / 10.0);
      r.ok = r.ok && expected_gain_on(draws, 30, ExponentialPhi(g, kappa)).value <= best + 1e-12;
    }
  }
  return r;
}

CheckResult derivatives() {
  CheckResult r{"phi derivatives vs finite differences, closed-form kernel", true, ""};
  double worst = 0.0;
  const PhiFamily fams[] = {ExponentialPhi(-3.0, 3.0), MollifiedLinearPhi(0.5, 0.05)};
  for (const auto& f : fams) {
    for (double t : {0.2, 0.4, 0.6, 0.8}) {
      const double h = 1e-5;
      const auto v = phi_eval(f, t);
      const double fd1 = (phi_eval(f, t + h).value - phi_eval(f, t - h).value) / (2 * h);
      const double fd2 = (phi_eval(f, t + h).d1 - phi_eval(f, t - h).d1) / (2 * h);
      worst = std::max({worst, std::abs(fd1 - v.d1) / std::max(1.0, std::abs(v.d1)),
                        std::abs(fd2 - v.d2) / std::max(1.0, std::abs(v.d2))});
    }
  }
  const ExponentialPhi e(-3.0, 3.0);
  double kernel_err = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    kernel_err = std::max(kernel_err, std::abs(gain_kernel(PhiFamily(e), t) - e.gain_kernel_closed_form(t)));
  }
  const bool p = validate_property_p(PhiFamily(e)).ok && validate_property_p(fams[1]).ok;
  r.ok = worst < 1e-5 && kernel_err < 1e-12 && p;
  r.detail = fmt("fd=%.2e kernel=%.2e", worst, kernel_err) + (p ? " P ok" : " P failed");
  return r;
}

CheckResult estimator_identities(std::uint64_t seed) {
  CheckResult r{"gamma=0 gives the MLE; rotation invariance", true, ""};
  Stream s = make_stream(seed, {11});
  const BallWindow w(2);
  for (int i = 0; i < 50; ++i) {
    const PointPattern p = sample_pattern(w, 10.0, s);
    r.ok = r.ok && stein_estimate(p, SteinParams{5, 0.0, 3.0}) == mle(p);
    const double a = 2.0 * std::numbers::pi * uniform_open(s);
    std::vector<double> rot;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const auto x = p.point(j);
      rot.push_back(std::cos(a) * x[0] - std::sin(a) * x[1]);
      rot.push_back(std::sin(a) * x[0] + std::cos(a) * x[1]);
    }
    const PointPattern q(w, rot);
    const SteinParams sp{7, -5.0, 2.5};
    r.ok = r.ok && std::abs(stein_estimate(p, sp) - stein_estimate(q, sp)) <= 1e-12 * std::max(1.0, mle(p));
  }
  return r;
}

CheckResult determinism(std::uint64_t seed, unsigned threads) {
  CheckResult r{"seeded optimization reproducible across worker counts", true, ""};
  const BallWindow w(2);
  Stream a = make_stream(seed, {12});
  Stream b = make_stream(seed, {12});
  OptimizerOptions one, many;
  many.threads = std::max(2u, threads);
  const auto x = optimize_at_theta(10.0, w, 5000, KappaGrid{}, a, one);
  const auto y = optimize_at_theta(10.0, w, 5000, KappaGrid{}, b, many);
  r.ok = x.params.k == y.params.k && x.params.kappa == y.params.kappa &&
         std::abs(x.objective.value - y.objective.value) <= 1e-9 * std::abs(x.objective.value);
  r.detail = fmt("k*=%g gain=%.6f", x.params.k, x.objective.value);
  return r;
}

}  // namespace

double ks_two_sample(std::vector<double>& a, std::vector<double>& b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_1pct(std::size_t n, std::size_t m) {
  const double a = static_cast<double>(n);
  const double b = static_cast<double>(m);
  return 1.628 * std::sqrt((a + b) / (a * b));
}

std::vector<CheckResult> run_selftest(std::uint64_t seed, unsigned threads) {
  return {ks_fast_vs_slow(seed),         pdf_normalization(),         gamma_star_identity(seed),
          derivatives(),                 estimator_identities(seed),  determinism(seed, threads)};
}

}  // namespace stein
