#pragma once

// Observation windows, point patterns and the order statistic Y_(k).

#include <cstddef>
#include <span>
#include <vector>

#include "stein/random.hpp"

namespace stein {

// The closed ball B(0, w) in R^d.
class BallWindow {
 public:
  explicit BallWindow(int dimension, double radius = 1.0);

  int dimension() const noexcept { return dimension_; }
  double radius() const noexcept { return radius_; }
  // pi^{d/2} / Gamma(d/2 + 1) * w^d.
  double volume() const noexcept { return volume_; }
  bool is_unit() const noexcept { return radius_ == 1.0; }

  friend bool operator==(const BallWindow&, const BallWindow&) = default;

 private:
  int dimension_;
  double radius_;
  double volume_;
};

double window_volume(const BallWindow& window);
// Same as BallWindow(d, w).volume(), validating the arguments.
double window_volume(int dimension, double radius);

// A finite configuration of points inside a ball window. Points are stored
// row-major (point i occupies coordinates [i*d, (i+1)*d)).
class PointPattern {
 public:
  explicit PointPattern(BallWindow window) : window_(window) {}
  // Throws ValidationError if the coordinate count is not a multiple of d or
  // a point lies outside the closed window.
  PointPattern(BallWindow window, std::vector<double> coordinates);

  const BallWindow& window() const noexcept { return window_; }
  std::size_t size() const noexcept { return coords_.size() / dim(); }
  bool empty() const noexcept { return coords_.empty(); }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim(), dim()};
  }
  std::span<const double> coordinates() const noexcept { return coords_; }

  std::vector<double> squared_norms() const;

  // Coordinates divided by w so the window becomes the unit ball. An
  // intensity estimated on the result converts back by dividing by w^d.
  PointPattern rescaled_to_unit() const;

 private:
  std::size_t dim() const noexcept { return static_cast<std::size_t>(window_.dimension()); }

  BallWindow window_;
  std::vector<double> coords_;
};

// The tuple (k, gamma, kappa) selecting one exponential-family Stein estimator.
struct SteinParams {
  int k = 1;
  double gamma = 0.0;
  double kappa = 2.0;
};

void validate(const SteinParams& params);

// A homogeneous Poisson pattern of intensity theta on the window: Poisson
// count, then i.i.d. uniform points (uniform direction, radius w * U^{1/d}).
PointPattern sample_pattern(const BallWindow& window, double theta, Stream& stream);

// k-th smallest squared norm, or 1 when the pattern has fewer than k points.
// Requires the unit window.
double y_statistic(const PointPattern& pattern, int k);

// Same order statistic on precomputed squared norms (the span is reordered).
double kth_smallest_or_one(std::span<double> squared_norms, int k);

}  // namespace stein
