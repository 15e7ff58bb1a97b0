#pragma once

#include <cstddef>
#include <span>

#include "stein/core_model.hpp"
#include "stein/phi.hpp"
#include "stein/random.hpp"
#include "stein/stats.hpp"

namespace stein {

// N(W) / |W|.
double mle(const PointPattern& pattern);

// theta_MLE - 4 / (d |W|) * Y phi'(Y) / phi(Y) with Y = Y_(k) of the pattern.
// Unit window only; see stein_estimate_rescaled for other radii.
double stein_estimate(const PointPattern& pattern, int k, const PhiFamily& family);

// Exponential family: theta_MLE + 4 / (d |W|) * gamma kappa Y (1 - Y)^{kappa - 1}.
double stein_estimate(const PointPattern& pattern, const SteinParams& params);

// Rescales a pattern on B(0, w) to the unit ball, estimates there and
// converts back to the original intensity (division by w^d).
double stein_estimate_rescaled(const PointPattern& pattern, const SteinParams& params);

// Privault-Reveillac estimator for a 1-D pattern observed on [0, 2]:
//   N/2 + (1/kappa) 1(N = 0) + X1 / (2(1 + kappa) - X1) 1(0 < X1 <= 2),
// X1 the smallest coordinate. Rejects coordinates outside [0, 2].
double pr_estimate(std::span<const double> points_on_0_2, double kappa_pr);

// The estimator from the point count n and the smallest coordinate x1 alone.
double pr_estimate_first_point(std::size_t n, double x1, double kappa_pr);

// The same estimator for a pattern on the unit 1-D ball [-1, 1], shifted to [0, 2].
double pr_estimate(const PointPattern& unit_pattern_1d, double kappa_pr);

// Relative MSE gain of theta_PR over theta_MLE from simulated patterns on
// [0, 2], estimated with paired squared-error differences over theta / 2.
GainEstimate pr_gain(double theta, double kappa_pr, std::size_t n_samples, Stream& stream);

// Analytic gain with X1 ~ Exp(theta):
//   (2/theta) E[X1 / (2(1+kappa) - X1) 1(X1 <= 2)] - 2 exp(-2 theta) / (theta kappa^2).
GainEstimate pr_gain_analytic(double theta, double kappa_pr, std::size_t n_samples, Stream& stream);

}  // namespace stein
