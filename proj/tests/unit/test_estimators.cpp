#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "stein/errors.hpp"
#include "stein/estimators.hpp"
#include "stein/gain.hpp"

using namespace stein;

TEST_CASE("mle") {
  CHECK(mle(PointPattern(BallWindow(1))) == 0.0);
  std::vector<double> c;
  for (int i = 0; i < 31; ++i) c.insert(c.end(), {0.01 * i, 0.0});
  CHECK(mle(PointPattern(BallWindow(2), c)) == doctest::Approx(31.0 / std::numbers::pi));
}

TEST_CASE("stein estimate special cases") {
  Stream s = make_stream(51);
  const BallWindow w(2);
  for (int i = 0; i < 20; ++i) {
    const PointPattern p = sample_pattern(w, 10.0, s);
    CHECK(stein_estimate(p, SteinParams{5, 0.0, 3.0}) == mle(p));
    CHECK(stein_estimate(p, 5, ExponentialPhi(0.0, 3.0)) == mle(p));
  }
  const PointPattern boundary(w, {1.0, 0.0, 0.0, -1.0, 0.6, 0.8});
  CHECK(stein_estimate(boundary, SteinParams{2, -5.0, 2.0}) == mle(boundary));
  CHECK(stein_estimate(boundary, SteinParams{3, -5.0, 4.0}) == mle(boundary));
  CHECK(stein_estimate(PointPattern(w), SteinParams{11, -0.8, 4.0}) == 0.0);
}

TEST_CASE("exponential closed form matches the generic correction") {
  Stream s = make_stream(52);
  for (int d = 1; d <= 3; ++d) {
    const BallWindow w(d);
    for (int i = 0; i < 50; ++i) {
      const PointPattern p = sample_pattern(w, 15.0, s);
      const SteinParams sp{10, -7.5, 3.5};
      const double y = y_statistic(p, sp.k);
      const double hand = mle(p) + 4.0 / (d * w.volume()) * sp.gamma * sp.kappa * y * std::pow(1 - y, sp.kappa - 1);
      CHECK(stein_estimate(p, sp) == doctest::Approx(hand).epsilon(1e-13));
      CHECK(stein_estimate(p, sp.k, ExponentialPhi(sp.gamma, sp.kappa)) == doctest::Approx(hand).epsilon(1e-12));
    }
  }
}

TEST_CASE("rotation invariance") {
  Stream s = make_stream(53);
  const BallWindow w(3);
  for (int i = 0; i < 30; ++i) {
    const PointPattern p = sample_pattern(w, 12.0, s);
    // Random rotation: Gram-Schmidt of a Gaussian matrix.
    std::normal_distribution<double> g;
    double m[3][3];
    for (auto& row : m)
      for (auto& x : row) x = g(s);
    for (int r = 0; r < 3; ++r) {
      for (int q = 0; q < r; ++q) {
        double dot = 0;
        for (int j = 0; j < 3; ++j) dot += m[r][j] * m[q][j];
        for (int j = 0; j < 3; ++j) m[r][j] -= dot * m[q][j];
      }
      double n = 0;
      for (int j = 0; j < 3; ++j) n += m[r][j] * m[r][j];
      for (int j = 0; j < 3; ++j) m[r][j] /= std::sqrt(n);
    }
    std::vector<double> rot;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const auto x = p.point(k);
      for (int r = 0; r < 3; ++r) {
        double v = m[r][0] * x[0] + m[r][1] * x[1] + m[r][2] * x[2];
        rot.push_back(std::clamp(v, -1.0, 1.0));
      }
    }
    const PointPattern q(w, rot);
    const SteinParams sp{20, -30.0, 2.5};
    CHECK(std::abs(stein_estimate(p, sp) - stein_estimate(q, sp)) < 1e-12);
  }
}

TEST_CASE("rescaled windows") {
  const PointPattern p(BallWindow(2, 2.0), {1.0, 0.0, 0.0, 1.2, -0.4, 0.2});
  const SteinParams sp{2, -3.0, 2.0};
  CHECK(stein_estimate_rescaled(p, sp) == doctest::Approx(stein_estimate(p.rescaled_to_unit(), sp) / 4.0));
  CHECK(stein_estimate_rescaled(p, SteinParams{2, 0.0, 2.0}) == doctest::Approx(mle(p)));
  CHECK_THROWS_AS(stein_estimate(p, sp), ValidationError);
}

TEST_CASE("first-point estimator") {
  const std::vector<double> none;
  CHECK(pr_estimate(none, 0.5) == doctest::Approx(2.0));
  const std::vector<double> one{1.0};
  CHECK(pr_estimate(one, 1.0) == doctest::Approx(0.5 + 1.0 / 3.0));
  const std::vector<double> two{1.5, 0.4};
  CHECK(pr_estimate(two, 2.0) == doctest::Approx(1.0 + 0.4 / (6.0 - 0.4)));
  const std::vector<double> at_zero{0.0, 1.0};
  CHECK(pr_estimate(at_zero, 2.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(pr_estimate(std::vector<double>{-0.1}, 1.0), ValidationError);
  CHECK_THROWS_AS(pr_estimate(std::vector<double>{2.1}, 1.0), ValidationError);
  CHECK_THROWS_AS(pr_estimate(one, 0.0), ValidationError);
  const PointPattern p(BallWindow(1), {0.0, -0.5});
  CHECK(pr_estimate(p, 1.0) == doctest::Approx(1.0 + 0.5 / 3.5));
}

TEST_CASE("first-point gain: empirical and analytic paths agree") {
  for (auto [theta, kappa] : {std::pair{5.0, 0.1}, {5.0, 1.0}, {10.0, 0.05}, {2.0, 0.5}}) {
    Stream a = make_stream(54), b = make_stream(55);
    const auto emp = pr_gain(theta, kappa, 400000, a);
    const auto ana = pr_gain_analytic(theta, kappa, 400000, b);
    CHECK_MESSAGE(std::abs(emp.value - ana.value) < 3.0 * (emp.std_error + ana.std_error), emp.value, " vs ",
                  ana.value);
  }
  // Analytic path vs quadrature of its own expectation.
  const double theta = 5.0, kappa = 0.1;
  const double q = oracle::simpson([&](double x) { return x / (2 * (1 + kappa) - x) * theta * std::exp(-theta * x); },
                                   0.0, 2.0);
  Stream c = make_stream(56);
  const auto ana = pr_gain_analytic(theta, kappa, 400000, c);
  const double exact = 2.0 / theta * q - 2.0 * std::exp(-2 * theta) / (theta * kappa * kappa);
  CHECK(std::abs(ana.value - exact) < 4.0 * ana.std_error);
}

TEST_CASE("first-point gain vanishes as kappa grows") {
  Stream s = make_stream(57);
  const auto g = pr_gain(5.0, 1e6, 20000, s);
  CHECK(std::abs(g.value) < 1e-6);
}

TEST_CASE("Table 1 cell empirical summary") {
  // theta = 5, d = 1 with near-optimal parameters: mean about 4.4-4.5, mse about 1.4.
  Stream s = make_stream(58);
  const BallWindow w(1);
  std::vector<double> est(50000);
  for (auto& e : est) e = stein_estimate(sample_pattern(w, 5.0, s), SteinParams{12, -2.74, 2.21});
  const auto m = oracle::moments(est);
  double mse = 0.0;
  for (double e : est) mse += (e - 5.0) * (e - 5.0) / est.size();
  CHECK(m.mean < 5.0);
  CHECK(std::abs(m.mean - 4.4) < 0.15);
  CHECK(std::abs(mse - 1.44) < 0.075);
}
