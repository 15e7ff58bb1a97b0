#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "stein/errors.hpp"
#include "stein/gain.hpp"

using namespace stein;

namespace {

// 16/(theta d^2 |W|) * integral_0^1 G(t) pdf(t) dt, atom excluded.
double gain_by_quadrature(int k, const ExponentialPhi& phi, double theta, int d) {
  const double integral = oracle::simpson(
      [&](double t) { return phi.gain_kernel_closed_form(t) * oracle::kth_sq_pdf(k, d, theta, t); }, 1e-12, 1.0,
      200000);
  return 16.0 / (theta * d * d * oracle::ball_volume(d)) * integral;
}

}  // namespace

TEST_CASE("gamma = 0 gives no gain") {
  Stream s = make_stream(31);
  const auto g = expected_gain(10, ExponentialPhi(0.0, 3.0), 10.0, BallWindow(2), 1000, s);
  CHECK(g.value == 0.0);
  CHECK(g.std_error == 0.0);
  const auto m = stein_mse(10, ExponentialPhi(0.0, 3.0), 10.0, BallWindow(2), 1000, s);
  CHECK(m.value == 10.0 / std::numbers::pi);
}

TEST_CASE("expected gain matches quadrature against the exact density") {
  Stream s = make_stream(32);
  struct Case {
    int k, d;
    double theta, gamma, kappa;
  };
  for (const Case c : {Case{34, 2, 10.0, -14.88, 2.0}, Case{12, 1, 5.0, -2.74, 2.21}, Case{20, 2, 20.0, -25.3, 6.55},
                       Case{5, 3, 4.0, 1.5, 3.0}}) {
    const ExponentialPhi phi(c.gamma, c.kappa);
    const auto g = expected_gain(c.k, phi, c.theta, BallWindow(c.d), 500000, s);
    const double q = gain_by_quadrature(c.k, phi, c.theta, c.d);
    CHECK_MESSAGE(std::abs(g.value - q) < 4.0 * g.std_error, g.value, " vs ", q, " se ", g.std_error);
    CHECK(g.n_samples == 500000);
  }
}

TEST_CASE("Table 1 order of magnitude") {
  Stream s = make_stream(33);
  const auto g = expected_gain(34, ExponentialPhi(-14.88, 2.0), 10.0, BallWindow(2), 500000, s);
  CHECK(std::abs(g.value - 0.46) < 0.01);
  // Best kappa for k = 11 at theta = 5, d = 1.
  double best = -1e9;
  for (double kappa = 2.0; kappa <= 6.0; kappa += 0.25) {
    best = std::max(best, optimized_gain(11, kappa, 5.0, BallWindow(1), 200000, s).value);
  }
  CHECK(std::abs(best - 0.43) < 0.025);
  const auto m1 = stein_mse(12, ExponentialPhi(-2.74, 2.21), 5.0, BallWindow(1), 500000, s);
  CHECK(std::abs(m1.value - 1.44) < 0.03 * 2.5);
  const auto m2 = stein_mse(170, ExponentialPhi(-116.2, 2.0), 40.0, BallWindow(3), 200000, s);
  CHECK(std::abs(m2.value - 4.95) < 0.03 * 9.55);
}

TEST_CASE("gamma* closed form for a constant Y") {
  // With Y == y the objective is gamma A - gamma^2 B, maximized at A / (2B).
  for (double y : {0.2, 0.5, 0.8}) {
    for (double kappa : {2.0, 3.0, 5.5}) {
      const double u = 1.0 - y;
      const double star = (y * std::pow(u, kappa - 1) - y * y * (kappa - 1) * std::pow(u, kappa - 2)) /
                          (2 * kappa * y * y * std::pow(u, 2 * kappa - 2));
      double best_g = 0.0, best_v = -1e300;
      for (int i = -200000; i <= 200000; ++i) {
        const double g = star + i * 1e-5 * std::max(1.0, std::abs(star));
        const double v = ExponentialPhi(g, kappa).gain_kernel_closed_form(y);
        if (v > best_v) {
          best_v = v;
          best_g = g;
        }
      }
      CHECK(best_g == doctest::Approx(star).epsilon(1e-4));
    }
  }
}

TEST_CASE("gamma* is optimal on common draws and the closed form is exact") {
  const BallWindow w(2);
  for (auto [k, theta] : {std::pair{34, 10.0}, {20, 20.0}, {8, 3.0}}) {
    const auto draws = YDraws::at_theta(w, theta, k, k, 50000, 77);
    for (double kappa : {2.0, 3.0, 6.5}) {
      const auto gs = gamma_star_on(draws, k, kappa);
      REQUIRE_FALSE(gs.degenerate);
      const double at_star = expected_gain_on(draws, k, ExponentialPhi(gs.gamma, kappa)).value;
      for (int j = -20; j <= 20; ++j) {
        const double g = gs.gamma * (1.0 + 0.025 * j);
        CHECK(expected_gain_on(draws, k, ExponentialPhi(g, kappa)).value <= at_star + 1e-14);
      }
      const auto m = exponential_moments(draws, k, kappa);
      const double quad = draws.scale() * (gs.gamma * m.a - gs.gamma * gs.gamma * m.b);
      const double closed = optimized_gain_on(draws, k, kappa).value;
      CHECK(closed >= 0.0);
      CHECK(std::abs(closed - at_star) <= 1e-10 * std::max(1.0, std::abs(at_star)));
      CHECK(std::abs(closed - quad) <= 1e-12 * std::max(1.0, std::abs(closed)));
    }
  }
}

TEST_CASE("degenerate denominator") {
  Stream s = make_stream(34);
  CHECK_THROWS_AS(gamma_star(200, 2.0, 1.0, BallWindow(1), 1000, s), DegenerateDenominator);
  CHECK_THROWS_AS(optimized_gain(200, 2.0, 1.0, BallWindow(1), 1000, s), DegenerateDenominator);
  const auto draws = YDraws::at_theta(BallWindow(1), 1.0, 200, 200, 1000, 1);
  CHECK(gamma_star_on(draws, 200, 2.0).degenerate);
}

TEST_CASE("validation") {
  Stream s = make_stream(35);
  CHECK_THROWS_AS(expected_gain(0, ExponentialPhi(1.0, 2.0), 10.0, BallWindow(2), 100, s), ValidationError);
  CHECK_THROWS_AS(expected_gain(3, ExponentialPhi(1.0, 2.0), 0.0, BallWindow(2), 100, s), ValidationError);
  CHECK_THROWS_AS(expected_gain(3, ExponentialPhi(1.0, 2.0), 10.0, BallWindow(2), 1, s), ValidationError);
  CHECK_THROWS_AS(expected_gain(3, ExponentialPhi(1.0, 2.0), 10.0, BallWindow(2, 2.0), 100, s), ValidationError);
  CHECK_THROWS_AS(expected_gain(3, ExponentialPhi(1.0, 1.0), 10.0, BallWindow(2), 100, s), ValidationError);
}

TEST_CASE("standard error convention") {
  const auto draws = YDraws::at_theta(BallWindow(2), 10.0, 30, 30, 5000, 3);
  const ExponentialPhi phi(-10.0, 2.5);
  std::vector<double> per;
  const auto y = draws.column(30);
  for (double t : y) per.push_back(t < 1.0 ? draws.scale() * phi.gain_kernel_closed_form(t) : 0.0);
  const auto m = oracle::moments(per);
  const auto g = expected_gain_on(draws, 30, phi);
  CHECK(g.value == doctest::Approx(m.mean).epsilon(1e-12));
  CHECK(g.std_error == doctest::Approx(m.se).epsilon(1e-9));
}

TEST_CASE("results do not depend on the worker count") {
  const BallWindow w(3);
  Stream a = make_stream(36);
  Stream b = make_stream(36);
  const ExponentialPhi phi(-30.0, 2.0);
  const auto one = expected_gain(43, phi, 10.0, w, 100000, a, 1);
  const auto four = expected_gain(43, phi, 10.0, w, 100000, b, 4);
  CHECK(one.value == four.value);
  CHECK(one.std_error == four.std_error);
  const auto d1 = YDraws::over_interval(w, 8.0, 12.0, 30, 50, 20000, 9, 1);
  const auto d4 = YDraws::over_interval(w, 8.0, 12.0, 30, 50, 20000, 9, 3);
  for (int k = 30; k <= 50; ++k) {
    const auto c1 = d1.column(k);
    const auto c4 = d4.column(k);
    CHECK(std::equal(c1.begin(), c1.end(), c4.begin()));
  }
}

TEST_CASE("common draws are nondecreasing in k") {
  const auto d = YDraws::at_theta(BallWindow(2), 5.0, 5, 25, 3000, 4);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (int k = 6; k <= 25; ++k) CHECK(d.column(k)[i] >= d.column(k - 1)[i]);
  }
}

TEST_CASE("intensity interval") {
  const auto iv = intensity_interval(10.0, 1.0, BallWindow(1));
  CHECK(iv.lo == doctest::Approx(10.0 - std::sqrt(5.0)));
  CHECK(iv.hi == doctest::Approx(10.0 + std::sqrt(5.0)));
  CHECK_FALSE(iv.truncated);
  const auto t = intensity_interval(0.5, 5.0, BallWindow(1));
  CHECK(t.truncated);
  CHECK(t.lo == 1e-3);
  CHECK_THROWS_AS(intensity_interval(5e-4, 1.0, BallWindow(1)), InvalidInterval);
  CHECK_THROWS_AS(intensity_interval(5.0, -1.0, BallWindow(1)), ValidationError);
  const auto z = intensity_interval(7.0, 0.0, BallWindow(2));
  CHECK(z.lo == 7.0);
  CHECK(z.hi == 7.0);
}

TEST_CASE("data-driven objective") {
  const BallWindow w(2);
  const ExponentialPhi phi(-10.0, 3.0);
  {
    Stream a = make_stream(37);
    Stream b = make_stream(37);
    const auto dd = datadriven_objective(30, phi, 10.0, 0.0, w, 20000, a);
    const auto pt = expected_gain(30, phi, 10.0, w, 20000, b);
    CHECK(dd.value == pt.value);
    CHECK(dd.std_error == pt.std_error);
  }
  {
    // Interval average against a midpoint rule over U with independent point gains.
    Stream s = make_stream(38);
    const double rho = 1.0;
    const auto iv = intensity_interval(10.0, rho, w);
    const auto dd = datadriven_objective(30, phi, 10.0, rho, w, 400000, s);
    constexpr int nodes = 16;
    double avg = 0.0, var = 0.0;
    for (int j = 0; j < nodes; ++j) {
      const double u = iv.lo + (j + 0.5) * iv.width() / nodes;
      const auto g = expected_gain(30, phi, u, w, 100000, s);
      avg += g.value / nodes;
      var += g.std_error * g.std_error / (nodes * nodes);
    }
    CHECK_MESSAGE(std::abs(dd.value - avg) < 3.0 * (dd.std_error + std::sqrt(var)) + 2e-3, dd.value, " vs ", avg);
  }
  {
    Stream a = make_stream(39);
    const auto closed = datadriven_objective(30, 3.0, 10.0, 1.0, w, 20000, a);
    Stream b = make_stream(39);
    const auto draws = datadriven_draws(w, 10.0, 1.0, 30, 30, 20000, draw_seed(b));
    const auto gs = gamma_star_on(draws, 30, 3.0);
    CHECK(closed.value == doctest::Approx(expected_gain_on(draws, 30, ExponentialPhi(gs.gamma, 3.0)).value).epsilon(1e-10));
  }
}
