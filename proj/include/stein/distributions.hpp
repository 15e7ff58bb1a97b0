#pragma once

// Random variates and the exact law of the squared distance from the origin to
// the k-th closest point of a homogeneous Poisson process.
//
// For a Poisson process of intensity theta in R^d, the number of points in the
// ball of squared radius t is Poisson(v_d * theta * t^{d/2}), so
// ||X_(k)||^2 has the law of Z^{2/d} with Z ~ Gamma(shape k, rate v_d * theta),
// v_d the volume of the window. Its density is
//
//   f(t) = (d/2) r t^{-1} exp(-r t^{d/2}) (r t^{d/2})^{k-1} t^{d/2} / (k-1)!,   r = v_d theta,
//
// i.e. the image of the Gamma(k, r) density under z -> z^{2/d}. (The exponent
// is negative; with a positive one the density would not integrate.)

#include <cmath>
#include <cstdint>

#include "stein/core_model.hpp"
#include "stein/random.hpp"

namespace stein {

double sample_gamma(double shape, double rate, Stream& stream);
std::uint64_t sample_poisson(double mean, Stream& stream);
double sample_exponential(double rate, Stream& stream);

// Law of ||X_(k)||^2 for intensity theta observed through a ball window.
class KthDistanceLaw {
 public:
  KthDistanceLaw(int k, BallWindow window, double theta);

  int k() const noexcept { return k_; }
  const BallWindow& window() const noexcept { return window_; }
  double theta() const noexcept { return theta_; }
  // v_d * theta, the Gamma rate of the volume variable.
  double rate() const noexcept { return rate_; }

 private:
  int k_;
  BallWindow window_;
  double theta_;
  double rate_;
};

// Z^{2/d} with Z ~ Gamma(k, rate).
double sample_kth_distance_sq(const KthDistanceLaw& law, Stream& stream);

double kth_distance_sq_pdf(const KthDistanceLaw& law, double t);
// P(||X_(k)||^2 <= t), via the Poisson-sum form of the integer-shape Gamma CDF.
double kth_distance_sq_cdf(const KthDistanceLaw& law, double t);

// min(||X_(k)||^2, 1) on the unit window.
double sample_y(const KthDistanceLaw& law, Stream& stream);

// Maps a Gamma volume variable to a squared radius: z^{2/d}.
inline double volume_to_squared_radius(double z, int d) {
  switch (d) {
    case 1: return z * z;
    case 2: return z;
    case 3: {
      const double c = std::cbrt(z);
      return c * c;
    }
    default: return std::pow(z, 2.0 / d);
  }
}

// P(Gamma(k, 1) <= x) for integer k >= 1.
double gamma_cdf_integer_shape(int k, double x);

}  // namespace stein

