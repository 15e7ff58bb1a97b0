#include "stein/distributions.hpp"

#include <cmath>
#include <random>
#include <string>

#include "stein/errors.hpp"

namespace stein {
namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    detail::fail_validation(what, " must be positive and finite, got ", std::to_string(value));
  }
}

}  // namespace

double sample_gamma(double shape, double rate, Stream& stream) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  return dist(stream);
}

std::uint64_t sample_poisson(double mean, Stream& stream) {
  require_positive(mean, "poisson mean");
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(stream);
}

double sample_exponential(double rate, Stream& stream) {
  require_positive(rate, "exponential rate");
  std::exponential_distribution<double> dist(rate);
  return dist(stream);
}

KthDistanceLaw::KthDistanceLaw(int k, BallWindow window, double theta)
    : k_(k), window_(window), theta_(theta) {
  if (k < 1) detail::fail_validation("k must be >= 1, got ", std::to_string(k));
  require_positive(theta, "intensity");
  rate_ = window_.volume() * theta_;
}

double sample_kth_distance_sq(const KthDistanceLaw& law, Stream& stream) {
  const double z = sample_gamma(static_cast<double>(law.k()), law.rate(), stream);
  return volume_to_squared_radius(z, law.window().dimension());
}

double kth_distance_sq_pdf(const KthDistanceLaw& law, double t) {
  const double half_d = 0.5 * law.window().dimension();
  const double r = law.rate();
  const int k = law.k();
  if (!(t > 0.0)) {
    if (t < 0.0 || std::isnan(t)) return 0.0;
    // pdf ~ t^{k d/2 - 1} at the origin; the right limit when finite, else 0
    const double power = half_d * k - 1.0;
    if (power != 0.0) return 0.0;
    return std::exp(std::log(half_d) + k * std::log(r) - std::lgamma(static_cast<double>(k)));
  }
  const double x = r * std::pow(t, half_d);  // v_d theta t^{d/2}
  // log of (d/2) r t^{-1} e^{-x} x^{k-1} t^{d/2} / (k-1)!
  const double log_pdf = std::log(half_d) + std::log(r) - std::log(t) - x +
                         (k - 1) * std::log(x) + half_d * std::log(t) - std::lgamma(static_cast<double>(k));
  return std::exp(log_pdf);
}

double gamma_cdf_integer_shape(int k, double x) {
  if (k < 1) detail::fail_validation("shape must be >= 1, got ", std::to_string(k));
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  // P(Gamma(k,1) <= x) = P(Poisson(x) >= k) = 1 - sum_{j<k} e^{-x} x^j / j!.
  // Sum whichever tail has fewer terms relative to the Poisson mode.
  const double log_x = std::log(x);
  auto term = [&](int j) { return std::exp(-x + j * log_x - std::lgamma(j + 1.0)); };
  if (x < k) {
    // Upper tail sum_{j>=k} converges geometrically once j > x.
    double sum = 0.0;
    for (int j = k;; ++j) {
      const double t = term(j);
      sum += t;
      if (t <= 1e-17 * sum) break;
    }
    return sum;
  }
  double lower = 0.0;
  for (int j = 0; j < k; ++j) lower += term(j);
  return 1.0 - lower;
}

double kth_distance_sq_cdf(const KthDistanceLaw& law, double t) {
  if (!(t > 0.0)) return 0.0;
  const double x = law.rate() * std::pow(t, 0.5 * law.window().dimension());
  return gamma_cdf_integer_shape(law.k(), x);
}

double sample_y(const KthDistanceLaw& law, Stream& stream) {
  if (!law.window().is_unit()) {
    detail::fail_validation("sample_y needs the unit ball (radius ", std::to_string(law.window().radius()), ")");
  }
  const double t = sample_kth_distance_sq(law, stream);
  return t < 1.0 ? t : 1.0;
}

}  // namespace stein
