#include "stein/gain.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "stein/distributions.hpp"
#include "stein/errors.hpp"
#include "stein/parallel.hpp"

namespace stein {
namespace {

std::size_t batch_count(std::size_t n) { return (n + kDrawBatch - 1) / kDrawBatch; }

void require_samples(std::size_t n) {
  if (n < 2) detail::fail_validation("need at least 2 Monte-Carlo samples, got ", std::to_string(n));
}

void require_theta(double theta, const char* what) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    detail::fail_validation(what, " must be positive and finite, got ", std::to_string(theta));
  }
}

// Per-draw statistics merged batch by batch in index order, so the result is
// identical for every worker count.
template <class PerDraw>
RunningStats batched_stats(std::size_t n, unsigned threads, PerDraw&& per_draw) {
  const std::size_t nb = batch_count(n);
  std::vector<RunningStats> partial(nb);
  parallel_for(nb, threads, [&](std::size_t b) {
    const std::size_t begin = b * kDrawBatch;
    const std::size_t end = std::min(n, begin + kDrawBatch);
    RunningStats s;
    for (std::size_t i = begin; i < end; ++i) s.push(per_draw(i));
    partial[b] = s;
  });
  RunningStats total;
  for (const auto& s : partial) total.merge(s);
  return total;
}

}  // namespace

YDraws::YDraws(const BallWindow& window, double theta_ref, int k_lo, int k_hi, std::size_t n)
    : window_(window), theta_ref_(theta_ref), k_lo_(k_lo), k_hi_(k_hi), n_(n) {
  if (!window.is_unit()) {
    detail::fail_validation("the Stein family is defined on the unit ball (radius ", std::to_string(window.radius()),
                            ")");
  }
  if (k_lo < 1 || k_hi < k_lo) {
    detail::fail_validation("invalid k range [", std::to_string(k_lo), ", ", std::to_string(k_hi), "]");
  }
  require_samples(n);
  y_.resize(static_cast<std::size_t>(k_hi - k_lo + 1) * n);
}

double YDraws::scale() const noexcept {
  const double d = window_.dimension();
  return 16.0 / (theta_ref_ * d * d * window_.volume());
}

std::span<const double> YDraws::column(int k) const {
  if (k < k_lo_ || k > k_hi_) {
    detail::fail_validation("k = ", std::to_string(k), " outside the drawn range [", std::to_string(k_lo_), ", ",
                            std::to_string(k_hi_), "]");
  }
  return {y_.data() + static_cast<std::size_t>(k - k_lo_) * n_, n_};
}

namespace {

// Fills draws [begin, end) of `y` (column-major, n rows) for intensities given by theta_of(i).
template <class ThetaOf>
void fill_batch(std::vector<double>& y, std::size_t n, int k_lo, int k_hi, const BallWindow& window,
                std::size_t begin, std::size_t end, Stream& stream, ThetaOf&& theta_of) {
  const int d = window.dimension();
  const double volume = window.volume();
  std::gamma_distribution<double> first(static_cast<double>(k_lo), 1.0);
  std::exponential_distribution<double> increment(1.0);
  for (std::size_t i = begin; i < end; ++i) {
    const double inv_rate = 1.0 / (volume * theta_of(i, stream));
    double z = first(stream);
    int k = k_lo;
    for (;; ++k) {
      const double t = volume_to_squared_radius(z * inv_rate, d);
      y[static_cast<std::size_t>(k - k_lo) * n + i] = t < 1.0 ? t : 1.0;
      if (t >= 1.0 || k == k_hi) break;
      z += increment(stream);
    }
    // Y is nondecreasing in k; once clamped it stays at 1.
    for (++k; k <= k_hi; ++k) y[static_cast<std::size_t>(k - k_lo) * n + i] = 1.0;
  }
}

}  // namespace

YDraws YDraws::at_theta(const BallWindow& window, double theta, int k_lo, int k_hi, std::size_t n,
                        std::uint64_t seed, unsigned threads) {
  require_theta(theta, "intensity");
  YDraws draws(window, theta, k_lo, k_hi, n);
  parallel_for(batch_count(n), threads, [&](std::size_t b) {
    Stream stream = make_stream(seed, {b});
    const std::size_t begin = b * kDrawBatch;
    fill_batch(draws.y_, n, k_lo, k_hi, window, begin, std::min(n, begin + kDrawBatch), stream,
               [theta](std::size_t, Stream&) { return theta; });
  });
  return draws;
}

YDraws YDraws::over_interval(const BallWindow& window, double lo, double hi, int k_lo, int k_hi, std::size_t n,
                             std::uint64_t seed, unsigned threads) {
  require_theta(lo, "interval lower end");
  if (!(hi >= lo) || !std::isfinite(hi)) detail::fail_validation("interval upper end must be >= lower end");
  const double center = 0.5 * (lo + hi);
  YDraws draws(window, center, k_lo, k_hi, n);
  draws.weights_.resize(n);
  parallel_for(batch_count(n), threads, [&](std::size_t b) {
    Stream stream = make_stream(seed, {b});
    const std::size_t begin = b * kDrawBatch;
    fill_batch(draws.y_, n, k_lo, k_hi, window, begin, std::min(n, begin + kDrawBatch), stream,
               [&](std::size_t i, Stream& s) {
                 const double u = lo + (hi - lo) * std::generate_canonical<double, 53>(s);
                 draws.weights_[i] = center / u;
                 return u;
               });
  });
  return draws;
}

GainEstimate expected_gain_on(const YDraws& draws, int k, const PhiFamily& family) {
  const auto y = draws.column(k);
  // Reject bad families once, up front.
  (void)phi_eval(family, 0.5);
  const auto stats = batched_stats(draws.size(), 1, [&](std::size_t i) {
    const double t = y[i];
    if (!(t < 1.0)) return 0.0;
    return draws.weight(i) * gain_kernel(family, t);
  });
  return scaled_estimate(stats, draws.scale());
}

GainEstimate expected_gain(int k, const PhiFamily& family, double theta, const BallWindow& window,
                           std::size_t n_samples, Stream& stream, unsigned threads) {
  const auto draws = YDraws::at_theta(window, theta, k, k, n_samples, draw_seed(stream), threads);
  return expected_gain_on(draws, k, family);
}

GainEstimate stein_mse(int k, const PhiFamily& family, double theta, const BallWindow& window,
                       std::size_t n_samples, Stream& stream, unsigned threads) {
  const GainEstimate gain = expected_gain(k, family, theta, window, n_samples, stream, threads);
  const double mle_mse = theta / window.volume();
  return {mle_mse - mle_mse * gain.value, mle_mse * gain.std_error, gain.n_samples};
}

ExponentialMoments exponential_moments(const YDraws& draws, int k, double kappa) {
  if (!(kappa >= 2.0)) detail::fail_validation("kappa must be >= 2, got ", std::to_string(kappa));
  const auto y = draws.column(k);
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double t = y[i];
    if (!(t < 1.0)) continue;
    const double u = 1.0 - t;
    const double p = std::pow(u, kappa - 2.0);
    const double w = draws.weight(i);
    sum_a += w * t * p * (1.0 - kappa * t);
    sum_b += w * t * t * u * u * p * p;
  }
  const double n = static_cast<double>(y.size());
  return {kappa * sum_a / n, kappa * kappa * sum_b / n};
}

GammaStar gamma_star_on(const YDraws& draws, int k, double kappa) {
  const auto m = exponential_moments(draws, k, kappa);
  GammaStar out;
  out.numerator = m.a / kappa;
  out.denominator = 2.0 * m.b / kappa;
  out.degenerate = !(out.denominator >= kDegenerateDenominator);
  out.gamma = out.degenerate ? 0.0 : out.numerator / out.denominator;
  return out;
}

GammaStar gamma_star(int k, double kappa, double theta, const BallWindow& window, std::size_t n_samples,
                     Stream& stream, unsigned threads) {
  const auto draws = YDraws::at_theta(window, theta, k, k, n_samples, draw_seed(stream), threads);
  const auto gs = gamma_star_on(draws, k, kappa);
  if (gs.degenerate) throw DegenerateDenominator(k, kappa, gs.denominator);
  return gs;
}

GainEstimate optimized_gain_on(const YDraws& draws, int k, double kappa) {
  const auto m = exponential_moments(draws, k, kappa);
  const GammaStar gs = gamma_star_on(draws, k, kappa);
  if (gs.degenerate) throw DegenerateDenominator(k, kappa, gs.denominator);
  const double g = gs.gamma;
  const auto y = draws.column(k);
  const auto stats = batched_stats(draws.size(), 1, [&](std::size_t i) {
    const double t = y[i];
    if (!(t < 1.0)) return 0.0;
    const double u = 1.0 - t;
    const double p = std::pow(u, kappa - 2.0);
    const double a_i = kappa * t * p * (1.0 - kappa * t);
    const double b_i = kappa * kappa * t * t * u * u * p * p;
    return draws.weight(i) * (g * a_i - g * g * b_i);
  });
  GainEstimate out = scaled_estimate(stats, draws.scale());
  out.value = draws.scale() * m.a * m.a / (4.0 * m.b);
  return out;
}

GainEstimate optimized_gain(int k, double kappa, double theta, const BallWindow& window, std::size_t n_samples,
                            Stream& stream, unsigned threads) {
  const auto draws = YDraws::at_theta(window, theta, k, k, n_samples, draw_seed(stream), threads);
  return optimized_gain_on(draws, k, kappa);
}

IntensityInterval intensity_interval(double theta_hat, double rho, const BallWindow& window) {
  require_theta(theta_hat, "estimated intensity");
  if (!(rho >= 0.0) || !std::isfinite(rho)) detail::fail_validation("rho must be >= 0, got ", std::to_string(rho));
  const double half = rho * std::sqrt(theta_hat / window.volume());
  IntensityInterval out;
  out.center = theta_hat;
  out.lo = theta_hat - half;
  out.hi = theta_hat + half;
  if (out.lo < kIntervalFloor) {
    if (kIntervalFloor > theta_hat) {
      throw InvalidInterval("intensity interval around " + std::to_string(theta_hat) +
                            " cannot be floored at 1e-3 without passing its center");
    }
    out.lo = kIntervalFloor;
    out.truncated = true;
  }
  return out;
}

YDraws datadriven_draws(const BallWindow& window, double theta_hat, double rho, int k_lo, int k_hi, std::size_t n,
                        std::uint64_t seed, unsigned threads) {
  const auto iv = intensity_interval(theta_hat, rho, window);
  if (iv.hi == iv.lo) return YDraws::at_theta(window, theta_hat, k_lo, k_hi, n, seed, threads);
  return YDraws::over_interval(window, iv.lo, iv.hi, k_lo, k_hi, n, seed, threads);
}

GainEstimate datadriven_objective(int k, const PhiFamily& family, double theta_hat, double rho,
                                  const BallWindow& window, std::size_t n_samples, Stream& stream,
                                  unsigned threads) {
  const auto draws = datadriven_draws(window, theta_hat, rho, k, k, n_samples, draw_seed(stream), threads);
  return expected_gain_on(draws, k, family);
}

GainEstimate datadriven_objective(int k, double kappa, double theta_hat, double rho, const BallWindow& window,
                                  std::size_t n_samples, Stream& stream, unsigned threads) {
  const auto draws = datadriven_draws(window, theta_hat, rho, k, k, n_samples, draw_seed(stream), threads);
  return optimized_gain_on(draws, k, kappa);
}

DegenerateDenominator::DegenerateDenominator(int k, double kappa, double denominator)
    : RuntimeFailure("degenerate gamma* denominator " + std::to_string(denominator) + " at k=" + std::to_string(k) +
                     ", kappa=" + std::to_string(kappa) + " (Y_(k) == 1 almost surely)"),
      k_(k),
      kappa_(kappa),
      denominator_(denominator) {}

}  // namespace stein
