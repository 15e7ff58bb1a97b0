#pragma once

// Theoretical MSE and gain of the Stein family, estimated by Monte Carlo on the
// Gamma fast path for Y_(k).
//
//   Gain(theta_k) = 16 / (theta d^2 |W|) * E[G(Y_(k)) 1(Y_(k) < 1)]
//   MSE(theta_k)  = theta / |W| - 16 / (d^2 |W|^2) * E[G(Y_(k)) 1(Y_(k) < 1)]
//
// The indicator removes the atom at Y = 1 (fewer than k points in the window):
// there the functional is constant and contributes nothing, even though the
// pointwise kernel G(1) is nonzero for kappa = 2.
//
// For the exponential family, E[G] = gamma A - gamma^2 B with
//   A = kappa E[Y (1-Y)^{kappa-2} (1 - kappa Y)],  B = kappa^2 E[Y^2 (1-Y)^{2(kappa-1)}],
// so gamma* = A / (2B) and the maximum is A^2 / (4B).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stein/core_model.hpp"
#include "stein/phi.hpp"
#include "stein/random.hpp"
#include "stein/stats.hpp"

namespace stein {

// Draws are generated in fixed-size batches, each from its own substream, so
// results do not depend on the worker count.
inline constexpr std::size_t kDrawBatch = 1024;

// Threshold under which the gamma* denominator is treated as zero.
inline constexpr double kDegenerateDenominator = 1e-15;

// Lower floor of the data-driven intensity interval.
inline constexpr double kIntervalFloor = 1e-3;

// Common random numbers: n draws of (Y_(k))_{k_lo <= k <= k_hi}, coupled
// across k through Gamma additivity (Z_{k+1} = Z_k + Exp), optionally with a
// per-draw intensity U ~ Uniform[lo, hi]. Each draw carries the weight
// theta_ref / theta_i so that every objective is scale * mean(weight * G).
class YDraws {
 public:
  static YDraws at_theta(const BallWindow& window, double theta, int k_lo, int k_hi, std::size_t n,
                         std::uint64_t seed, unsigned threads = 1);
  static YDraws over_interval(const BallWindow& window, double lo, double hi, int k_lo, int k_hi,
                              std::size_t n, std::uint64_t seed, unsigned threads = 1);

  int k_lo() const noexcept { return k_lo_; }
  int k_hi() const noexcept { return k_hi_; }
  std::size_t size() const noexcept { return n_; }
  const BallWindow& window() const noexcept { return window_; }
  double theta_ref() const noexcept { return theta_ref_; }
  // 16 / (theta_ref d^2 |W|).
  double scale() const noexcept;
  bool has_unit_weights() const noexcept { return weights_.empty(); }

  std::span<const double> column(int k) const;
  double weight(std::size_t i) const noexcept { return weights_.empty() ? 1.0 : weights_[i]; }

 private:
  YDraws(const BallWindow& window, double theta_ref, int k_lo, int k_hi, std::size_t n);

  BallWindow window_;
  double theta_ref_;
  int k_lo_;
  int k_hi_;
  std::size_t n_;
  std::vector<double> y_;        // column-major by k
  std::vector<double> weights_;  // empty when every weight is 1
};

// Per-draw G(Y) 1(Y < 1) for a general family, weighted and averaged.
GainEstimate expected_gain_on(const YDraws& draws, int k, const PhiFamily& family);

GainEstimate expected_gain(int k, const PhiFamily& family, double theta, const BallWindow& window,
                           std::size_t n_samples, Stream& stream, unsigned threads = 1);

GainEstimate stein_mse(int k, const PhiFamily& family, double theta, const BallWindow& window,
                       std::size_t n_samples, Stream& stream, unsigned threads = 1);

// Sample moments of the exponential family at fixed (k, kappa), on shared draws.
struct ExponentialMoments {
  double a = 0.0;  // kappa E[w Y (1-Y)^{kappa-2} (1 - kappa Y) 1(Y<1)]
  double b = 0.0;  // kappa^2 E[w Y^2 (1-Y)^{2 kappa - 2} 1(Y<1)]
};
ExponentialMoments exponential_moments(const YDraws& draws, int k, double kappa);

struct GammaStar {
  double gamma = 0.0;
  // E[Y(1-Y)^{kappa-1} - Y^2 (kappa-1)(1-Y)^{kappa-2}] (weighted, on the atom-free event).
  double numerator = 0.0;
  // E[2 kappa Y^2 (1-Y)^{2(kappa-1)}].
  double denominator = 0.0;
  bool degenerate = false;
};

// Closed-form gamma* on shared draws. Never throws; check `degenerate`.
GammaStar gamma_star_on(const YDraws& draws, int k, double kappa);

// Throws DegenerateDenominator when the denominator estimate is below 1e-15.
GammaStar gamma_star(int k, double kappa, double theta, const BallWindow& window, std::size_t n_samples,
                     Stream& stream, unsigned threads = 1);

// scale * A^2 / (4B); the standard error comes from the per-draw kernel at gamma*.
GainEstimate optimized_gain_on(const YDraws& draws, int k, double kappa);

GainEstimate optimized_gain(int k, double kappa, double theta, const BallWindow& window,
                            std::size_t n_samples, Stream& stream, unsigned threads = 1);

// Theta(theta_hat, rho) = [theta_hat - rho sqrt(theta_hat/|W|), theta_hat + rho sqrt(theta_hat/|W|)],
// lower end floored at 1e-3.
struct IntensityInterval {
  double lo = 0.0;
  double hi = 0.0;
  double center = 0.0;
  bool truncated = false;
  double width() const noexcept { return hi - lo; }
};
// Throws InvalidInterval if the floor would move the lower end past the center.
IntensityInterval intensity_interval(double theta_hat, double rho, const BallWindow& window);

// Average of the point gain f(theta) over the interval:
//   16/(d^2|W|) E[G(Y_(k)(U)) / U],  U ~ Uniform(Theta).
// This is the integral of f over Theta divided by its width; at rho = 0 it is f(theta_hat).
GainEstimate datadriven_objective(int k, const PhiFamily& family, double theta_hat, double rho,
                                  const BallWindow& window, std::size_t n_samples, Stream& stream,
                                  unsigned threads = 1);
// Same objective with gamma eliminated by its closed form.
GainEstimate datadriven_objective(int k, double kappa, double theta_hat, double rho, const BallWindow& window,
                                  std::size_t n_samples, Stream& stream, unsigned threads = 1);

// Draws for the interval objective (point draws when rho == 0).
YDraws datadriven_draws(const BallWindow& window, double theta_hat, double rho, int k_lo, int k_hi,
                        std::size_t n, std::uint64_t seed, unsigned threads = 1);

}  // namespace stein
