#include "stein/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stein/distributions.hpp"
#include "stein/errors.hpp"

namespace stein {
namespace {

constexpr double kPrWindow = 2.0;

void require_pr_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    detail::fail_validation("PR kappa must be positive, got ", std::to_string(kappa));
  }
}

double pr_from_first_point(std::size_t n, double x1, double kappa) {
  double est = static_cast<double>(n) / kPrWindow;
  if (n == 0) return est + 1.0 / kappa;
  if (x1 > 0.0 && x1 <= kPrWindow) est += x1 / (2.0 * (1.0 + kappa) - x1);
  return est;
}

}  // namespace

double mle(const PointPattern& pattern) {
  return static_cast<double>(pattern.size()) / pattern.window().volume();
}

double stein_estimate(const PointPattern& pattern, int k, const PhiFamily& family) {
  const double y = y_statistic(pattern, k);
  const PhiValue v = phi_eval(family, y);
  const double d = pattern.window().dimension();
  return mle(pattern) - 4.0 / (d * pattern.window().volume()) * y * v.d1 / v.value;
}

double stein_estimate(const PointPattern& pattern, const SteinParams& params) {
  validate(params);
  const double y = y_statistic(pattern, params.k);
  const double d = pattern.window().dimension();
  const double correction = params.gamma * params.kappa * y * std::pow(1.0 - y, params.kappa - 1.0);
  return mle(pattern) + 4.0 / (d * pattern.window().volume()) * correction;
}

double stein_estimate_rescaled(const PointPattern& pattern, const SteinParams& params) {
  const double w = pattern.window().radius();
  if (pattern.window().is_unit()) return stein_estimate(pattern, params);
  return stein_estimate(pattern.rescaled_to_unit(), params) / std::pow(w, pattern.window().dimension());
}

double pr_estimate(std::span<const double> points_on_0_2, double kappa_pr) {
  require_pr_kappa(kappa_pr);
  double x1 = std::numeric_limits<double>::infinity();
  for (double x : points_on_0_2) {
    if (!(x >= 0.0 && x <= kPrWindow)) {
      detail::fail_validation("PR pattern coordinates must lie in [0, 2], got ", std::to_string(x));
    }
    x1 = std::min(x1, x);
  }
  return pr_from_first_point(points_on_0_2.size(), x1, kappa_pr);
}

double pr_estimate_first_point(std::size_t n, double x1, double kappa_pr) {
  require_pr_kappa(kappa_pr);
  return pr_from_first_point(n, x1, kappa_pr);
}

double pr_estimate(const PointPattern& unit_pattern_1d, double kappa_pr) {
  const auto& w = unit_pattern_1d.window();
  if (w.dimension() != 1 || !w.is_unit()) {
    detail::fail_validation("PR estimator needs a pattern on the unit 1-D window");
  }
  std::vector<double> shifted(unit_pattern_1d.coordinates().begin(), unit_pattern_1d.coordinates().end());
  for (double& x : shifted) x = std::clamp(x + 1.0, 0.0, kPrWindow);
  return pr_estimate(shifted, kappa_pr);
}

GainEstimate pr_gain(double theta, double kappa_pr, std::size_t n_samples, Stream& stream) {
  require_pr_kappa(kappa_pr);
  if (!(theta > 0.0)) detail::fail_validation("intensity must be positive");
  if (n_samples < 2) detail::fail_validation("need at least 2 samples");
  const BallWindow unit(1, 1.0);
  RunningStats diff;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const PointPattern p = sample_pattern(unit, theta, stream);
    const double m = mle(p) - theta;
    const double r = pr_estimate(p, kappa_pr) - theta;
    diff.push(m * m - r * r);
  }
  return scaled_estimate(diff, 1.0 / (theta / kPrWindow));
}

GainEstimate pr_gain_analytic(double theta, double kappa_pr, std::size_t n_samples, Stream& stream) {
  require_pr_kappa(kappa_pr);
  if (!(theta > 0.0)) detail::fail_validation("intensity must be positive");
  if (n_samples < 2) detail::fail_validation("need at least 2 samples");
  RunningStats s;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double x1 = sample_exponential(theta, stream);
    s.push(x1 <= kPrWindow ? x1 / (2.0 * (1.0 + kappa_pr) - x1) : 0.0);
  }
  GainEstimate out = scaled_estimate(s, 2.0 / theta);
  out.value -= 2.0 * std::exp(-2.0 * theta) / (theta * kappa_pr * kappa_pr);
  return out;
}

}  // namespace stein
