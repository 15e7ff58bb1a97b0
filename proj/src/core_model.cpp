#include "stein/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "stein/distributions.hpp"
#include "stein/errors.hpp"

namespace stein {
namespace {

double ball_volume(int d, double w) {
  const double half = 0.5 * d;
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0)) * std::pow(w, d);
}

// Points produced by radius scaling can overshoot w by a few ulps.
constexpr double kBoundarySlack = 1e-12;

}  // namespace

BallWindow::BallWindow(int dimension, double radius) : dimension_(dimension), radius_(radius) {
  if (dimension < 1) detail::fail_validation("window dimension must be >= 1, got ", std::to_string(dimension));
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    detail::fail_validation("window radius must be positive and finite, got ", std::to_string(radius));
  }
  volume_ = ball_volume(dimension, radius);
}

double window_volume(const BallWindow& window) { return window.volume(); }

double window_volume(int dimension, double radius) { return BallWindow(dimension, radius).volume(); }

PointPattern::PointPattern(BallWindow window, std::vector<double> coordinates)
    : window_(window), coords_(std::move(coordinates)) {
  const std::size_t d = dim();
  if (coords_.size() % d != 0) {
    detail::fail_validation("coordinate count ", std::to_string(coords_.size()),
                            " is not a multiple of the dimension ", std::to_string(d));
  }
  const double limit = window_.radius() * window_.radius() * (1.0 + kBoundarySlack);
  for (std::size_t i = 0; i < size(); ++i) {
    double r2 = 0.0;
    for (double x : point(i)) {
      if (!std::isfinite(x)) detail::fail_validation("non-finite coordinate in point ", std::to_string(i));
      r2 += x * x;
    }
    if (r2 > limit) {
      detail::fail_validation("point ", std::to_string(i), " lies outside the window (norm ",
                              std::to_string(std::sqrt(r2)), " > ", std::to_string(window_.radius()), ")");
    }
  }
}

std::vector<double> PointPattern::squared_norms() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double r2 = 0.0;
    for (double x : point(i)) r2 += x * x;
    out[i] = r2;
  }
  return out;
}

PointPattern PointPattern::rescaled_to_unit() const {
  std::vector<double> scaled(coords_);
  const double inv = 1.0 / window_.radius();
  for (double& x : scaled) x *= inv;
  return PointPattern(BallWindow(window_.dimension(), 1.0), std::move(scaled));
}

void validate(const SteinParams& params) {
  if (params.k < 1) detail::fail_validation("k must be >= 1, got ", std::to_string(params.k));
  if (!std::isfinite(params.gamma)) detail::fail_validation("gamma must be finite");
  if (!(params.kappa >= 2.0) || !std::isfinite(params.kappa)) {
    detail::fail_validation("kappa must be >= 2 for the exponential family, got ", std::to_string(params.kappa));
  }
}

PointPattern sample_pattern(const BallWindow& window, double theta, Stream& stream) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    detail::fail_validation("intensity must be positive, got ", std::to_string(theta));
  }
  const auto n = sample_poisson(theta * window.volume(), stream);
  const int d = window.dimension();
  const double w = window.radius();
  std::vector<double> coords(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  std::normal_distribution<double> normal;
  for (std::uint64_t i = 0; i < n; ++i) {
    double* p = coords.data() + i * static_cast<std::size_t>(d);
    const double radius = w * std::pow(uniform_open(stream), 1.0 / d);
    if (d == 1) {
      p[0] = (std::generate_canonical<double, 53>(stream) < 0.5) ? -radius : radius;
      continue;
    }
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int j = 0; j < d; ++j) {
        p[j] = normal(stream);
        norm2 += p[j] * p[j];
      }
    } while (norm2 == 0.0);
    const double scale = radius / std::sqrt(norm2);
    for (int j = 0; j < d; ++j) p[j] *= scale;
  }
  return PointPattern(window, std::move(coords));
}

double kth_smallest_or_one(std::span<double> squared_norms, int k) {
  if (k < 1) detail::fail_validation("k must be >= 1, got ", std::to_string(k));
  const auto kk = static_cast<std::size_t>(k);
  if (squared_norms.size() < kk) return 1.0;
  auto nth = squared_norms.begin() + static_cast<std::ptrdiff_t>(kk - 1);
  std::nth_element(squared_norms.begin(), nth, squared_norms.end());
  return *nth;
}

double y_statistic(const PointPattern& pattern, int k) {
  if (k < 1) detail::fail_validation("k must be >= 1, got ", std::to_string(k));
  if (!pattern.window().is_unit()) {
    detail::fail_validation("y_statistic needs the unit ball; rescale the pattern first (radius ",
                            std::to_string(pattern.window().radius()), ")");
  }
  auto norms = pattern.squared_norms();
  return kth_smallest_or_one(norms, k);
}

}  // namespace stein
