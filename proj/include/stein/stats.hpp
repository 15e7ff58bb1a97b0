#pragma once

#include <cmath>
#include <cstddef>

namespace stein {

// Streaming count/mean/M2 (Welford), mergeable with Chan's pairwise update.
class RunningStats {
 public:
  void push(double x) noexcept {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStats& other) noexcept {
    if (other.n_ == 0) return;
    if (n_ == 0) {
      *this = other;
      return;
    }
    const double n_a = static_cast<double>(n_);
    const double n_b = static_cast<double>(other.n_);
    const double n = n_a + n_b;
    const double delta = other.mean_ - mean_;
    mean_ += delta * n_b / n;
    m2_ += other.m2_ + delta * delta * n_a * n_b / n;
    n_ += other.n_;
  }

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  // Unbiased (n - 1) sample variance.
  double variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  // m / (m - 1) free variance: M2 / n.
  double population_variance() const noexcept { return n_ > 0 ? m2_ / static_cast<double>(n_) : 0.0; }
  double std_error() const noexcept {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// A Monte-Carlo estimate: value, its standard error and the sample count.
struct GainEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

// value and std_error of `stats` multiplied by `scale`.
inline GainEstimate scaled_estimate(const RunningStats& stats, double scale) {
  return {scale * stats.mean(), std::abs(scale) * stats.std_error(), stats.count()};
}

}  // namespace stein
