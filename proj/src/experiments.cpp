#include "stein/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "stein/errors.hpp"
#include "stein/estimators.hpp"
#include "stein/gain.hpp"
#include "stein/parallel.hpp"
#include "stein/phi.hpp"

namespace stein {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Leading stream key per study, so the studies never share draws.
enum StudyKey : std::uint64_t { kTable1 = 1, kGainCurve = 2, kTable2 = 3, kPrCurve = 4 };

std::size_t theo_samples(const ExperimentConfig& config) {
  return config.confirm_samples > 0 ? config.confirm_samples : config.samples;
}

// Squared-error improvement of `stein` over `mle`, one replication.
double paired_improvement(double mle_est, double stein_est, double theta) {
  const double a = mle_est - theta;
  const double b = stein_est - theta;
  return a * a - b * b;
}

}  // namespace

void validate(const ExperimentConfig& config) {
  if (config.reps < 2) detail::fail_validation("replications must be >= 2, got ", std::to_string(config.reps));
  if (config.samples < 2) detail::fail_validation("samples must be >= 2, got ", std::to_string(config.samples));
  if (config.thetas.empty()) detail::fail_validation("no intensities given");
  for (double t : config.thetas) {
    if (!(t > 0.0) || !std::isfinite(t)) detail::fail_validation("intensities must be positive, got ", std::to_string(t));
  }
  if (config.dimensions.empty()) detail::fail_validation("no dimensions given");
  for (int d : config.dimensions) {
    if (d < 1) detail::fail_validation("dimension must be >= 1, got ", std::to_string(d));
  }
  for (double r : config.rhos) {
    if (!(r >= 0.0) || !std::isfinite(r)) detail::fail_validation("rho must be >= 0, got ", std::to_string(r));
  }
  if (config.refine_top < 0) detail::fail_validation("refine_top must be >= 0");
  validate(config.grid);
}

EstimatorSummary summarize(std::span<const double> estimates, double theta) {
  RunningStats s;
  double sq = 0.0;
  for (double x : estimates) {
    s.push(x);
    sq += (x - theta) * (x - theta);
  }
  EstimatorSummary out;
  out.mean = s.mean();
  out.sd = std::sqrt(s.population_variance());
  out.mse = estimates.empty() ? kNaN : sq / static_cast<double>(estimates.size());
  return out;
}

double gain_pct(double mse_reference, double mse) { return 100.0 * (mse_reference - mse) / mse_reference; }

std::vector<Table1Row> table1_study(const ExperimentConfig& config) {
  validate(config);
  std::vector<Table1Row> rows;
  std::uint64_t cell = 0;
  for (double theta : config.thetas) {
    for (int d : config.dimensions) {
      const std::uint64_t c = cell++;
      const BallWindow window(d);
      Table1Row row;
      row.theta = theta;
      row.d = d;
      try {
        Stream search = make_stream(config.seed, {kTable1, c, 0});
        OptimizerOptions opts;
        opts.threads = config.threads;
        row.params = optimize_at_theta(theta, window, config.samples, config.grid, search, opts).params;
      } catch (const std::exception& e) {
        row.error = e.what();
        row.params = {0, kNaN, kNaN};
        row.mle = row.stein = {kNaN, kNaN, kNaN};
        row.gain_pct = kNaN;
        rows.push_back(row);
        continue;
      }
      std::vector<double> mle_est(config.reps);
      std::vector<double> stein_est(config.reps);
      parallel_for(config.reps, config.threads, [&](std::size_t r) {
        Stream s = make_stream(config.seed, {kTable1, c, 1, r});
        const PointPattern p = sample_pattern(window, theta, s);
        mle_est[r] = mle(p);
        stein_est[r] = stein_estimate(p, row.params);
      });
      row.mle = summarize(mle_est, theta);
      row.stein = summarize(stein_est, theta);
      row.gain_pct = gain_pct(row.mle.mse, row.stein.mse);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<GainCurveRow> gain_curve_study(const ExperimentConfig& config, const GainCurveSpec& spec) {
  validate(config);
  if (spec.anchors.empty()) detail::fail_validation("no k values given");
  const BallWindow window(spec.d);
  OptimizerOptions opts;
  opts.threads = config.threads;

  auto tune = [&](int k, double theta, std::uint64_t seed) {
    const auto draws = YDraws::at_theta(window, theta, k, k, config.samples, seed, config.threads);
    return optimize_on(draws, config.grid, opts).params;
  };

  std::vector<GainCurveRow> rows;
  for (std::size_t a = 0; a < spec.anchors.size(); ++a) {
    const auto [k, anchor] = spec.anchors[a];
    if (k < 1) detail::fail_validation("k must be >= 1, got ", std::to_string(k));
    SteinParams anchored;
    if (spec.rule == ParamRule::Anchor) {
      Stream s = make_stream(config.seed, {kGainCurve, a, 0});
      anchored = tune(k, anchor, draw_seed(s));
    }
    for (std::size_t t = 0; t < config.thetas.size(); ++t) {
      const double theta = config.thetas[t];
      Stream s = make_stream(config.seed, {kGainCurve, a, 1, t});
      const SteinParams params = spec.rule == ParamRule::Anchor ? anchored : tune(k, theta, draw_seed(s));
      GainCurveRow row;
      row.theta = theta;
      row.k = k;
      row.kappa = params.kappa;
      row.gamma = params.gamma;
      row.theo = expected_gain(k, ExponentialPhi(params.gamma, params.kappa), theta, window, theo_samples(config), s,
                               config.threads);

      std::vector<double> diff(config.reps);
      parallel_for(config.reps, config.threads, [&](std::size_t r) {
        Stream rs = make_stream(config.seed, {kGainCurve, a, 2, t, r});
        const PointPattern p = sample_pattern(window, theta, rs);
        diff[r] = paired_improvement(mle(p), stein_estimate(p, params), theta);
      });
      RunningStats st;
      for (double x : diff) st.push(x);
      row.emp = scaled_estimate(st, window.volume() / theta);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<Table2Row> table2_study(const ExperimentConfig& config) {
  validate(config);
  if (config.rhos.empty()) detail::fail_validation("no rho values given");
  std::vector<Table2Row> rows;
  const std::size_t n_rho = config.rhos.size();
  std::uint64_t cell = 0;
  for (double theta : config.thetas) {
    for (int d : config.dimensions) {
      const std::uint64_t c = cell++;
      const BallWindow window(d);
      std::vector<double> mle_est(config.reps);
      // stein_est[j * reps + r] for rho index j.
      std::vector<double> stein_est(n_rho * config.reps);
      std::vector<unsigned char> fell_back(n_rho * config.reps, 0);
      OptimizerOptions opts;
      opts.refine_top = config.refine_top;
      parallel_for(config.reps, config.threads, [&](std::size_t r) {
        Stream ps = make_stream(config.seed, {kTable2, c, r});
        const PointPattern p = sample_pattern(window, theta, ps);
        const double theta_hat = mle(p);
        mle_est[r] = theta_hat;
        for (std::size_t j = 0; j < n_rho; ++j) {
          const std::size_t slot = j * config.reps + r;
          Stream os = make_stream(config.seed, {kTable2, c, r, 1 + j});
          try {
            if (!(theta_hat > 0.0)) throw RuntimeFailure("empty pattern");
            const auto res = optimize_datadriven(theta_hat, config.rhos[j], window, config.samples, config.grid, os, opts);
            stein_est[slot] = stein_estimate(p, res.params);
          } catch (const RuntimeFailure&) {
            stein_est[slot] = theta_hat;
            fell_back[slot] = 1;
          }
        }
      });
      const double mse_mle = summarize(mle_est, theta).mse;
      for (std::size_t j = 0; j < n_rho; ++j) {
        const std::span<const double> est(stein_est.data() + j * config.reps, config.reps);
        Table2Row row;
        row.theta = theta;
        row.d = d;
        row.rho = config.rhos[j];
        row.gain_pct = gain_pct(mse_mle, summarize(est, theta).mse);
        row.n_reps = config.reps;
        row.n_fallback = static_cast<std::size_t>(
            std::count(fell_back.begin() + static_cast<std::ptrdiff_t>(j * config.reps),
                       fell_back.begin() + static_cast<std::ptrdiff_t>((j + 1) * config.reps), 1));
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<double> pr_kappa_grid() {
  std::vector<double> out;
  for (int j = -40; j <= 60; ++j) out.push_back(std::pow(10.0, j / 20.0));
  return out;
}

std::vector<PrCurveRow> pr_study(const ExperimentConfig& config) {
  validate(config);
  const auto kappas = pr_kappa_grid();
  const BallWindow unit(1);
  const std::size_t n = config.samples;
  const std::size_t n_batches = (n + kDrawBatch - 1) / kDrawBatch;
  std::vector<PrCurveRow> rows;
  for (std::size_t c = 0; c < config.thetas.size(); ++c) {
    const double theta = config.thetas[c];
    // Common patterns for every kappa, reduced to (N, X1) on [0, 2].
    std::vector<std::size_t> count(n);
    std::vector<double> first(n);
    parallel_for(n_batches, config.threads, [&](std::size_t b) {
      Stream s = make_stream(config.seed, {kPrCurve, c, b});
      const std::size_t end = std::min(n, (b + 1) * kDrawBatch);
      for (std::size_t i = b * kDrawBatch; i < end; ++i) {
        const PointPattern p = sample_pattern(unit, theta, s);
        const auto xs = p.coordinates();
        count[i] = xs.size();
        first[i] = xs.empty() ? 0.0 : std::clamp(*std::min_element(xs.begin(), xs.end()) + 1.0, 0.0, 2.0);
      }
    });
    std::vector<double> gains(kappas.size());
    parallel_for(kappas.size(), config.threads, [&](std::size_t j) {
      RunningStats st;
      for (std::size_t i = 0; i < n; ++i) {
        const double m = static_cast<double>(count[i]) / 2.0;
        st.push(paired_improvement(m, pr_estimate_first_point(count[i], first[i], kappas[j]), theta));
      }
      gains[j] = 100.0 * st.mean() / (theta / 2.0);
    });
    const auto best = std::max_element(gains.begin(), gains.end());
    rows.push_back({theta, kappas[static_cast<std::size_t>(best - gains.begin())], *best});
  }
  return rows;
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_table1_csv(std::ostream& out, std::span<const Table1Row> rows) {
  out << "theta,d,k_star,gamma_star,kappa_star,mle_mean,mle_sd,mle_mse,stein_mean,stein_sd,stein_mse,gain_pct\n";
  for (const auto& r : rows) {
    out << format_real(r.theta) << ',' << r.d << ',' << r.params.k << ',' << format_real(r.params.gamma) << ','
        << format_real(r.params.kappa) << ',' << format_real(r.mle.mean) << ',' << format_real(r.mle.sd) << ','
        << format_real(r.mle.mse) << ',' << format_real(r.stein.mean) << ',' << format_real(r.stein.sd) << ','
        << format_real(r.stein.mse) << ',' << format_real(r.gain_pct) << '\n';
  }
}

void write_gain_curve_csv(std::ostream& out, std::span<const GainCurveRow> rows) {
  out << "theta,k,kappa,gamma,gain_theo,gain_theo_se,gain_emp,gain_emp_se\n";
  for (const auto& r : rows) {
    out << format_real(r.theta) << ',' << r.k << ',' << format_real(r.kappa) << ',' << format_real(r.gamma) << ','
        << format_real(r.theo.value) << ',' << format_real(r.theo.std_error) << ',' << format_real(r.emp.value) << ','
        << format_real(r.emp.std_error) << '\n';
  }
}

void write_table2_csv(std::ostream& out, std::span<const Table2Row> rows) {
  out << "theta,d,rho,gain_pct,n_reps,n_fallback\n";
  for (const auto& r : rows) {
    out << format_real(r.theta) << ',' << r.d << ',' << format_real(r.rho) << ',' << format_real(r.gain_pct) << ','
        << r.n_reps << ',' << r.n_fallback << '\n';
  }
}

void write_pr_curve_csv(std::ostream& out, std::span<const PrCurveRow> rows) {
  out << "theta,kappa_star,gain_pct\n";
  for (const auto& r : rows) {
    out << format_real(r.theta) << ',' << format_real(r.kappa_star) << ',' << format_real(r.gain_pct) << '\n';
  }
}

}  // namespace stein
