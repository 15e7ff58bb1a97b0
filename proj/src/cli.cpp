#include "stein/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "stein/errors.hpp"
#include "stein/estimators.hpp"
#include "stein/experiments.hpp"
#include "stein/gain.hpp"
#include "stein/optimizer.hpp"
#include "stein/phi.hpp"
#include "stein/selftest.hpp"

namespace stein {
namespace {

struct Flags {
  std::uint64_t seed = 1;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> confirm_samples;
  std::optional<std::size_t> reps;
  std::string out;
  unsigned threads = 1;
  std::vector<int> d;
  std::vector<double> theta;
  std::vector<int> k;
  std::optional<double> gamma;
  std::optional<double> kappa;
  std::vector<double> rho;
  std::vector<double> anchor;
  std::string rule = "anchor";
  std::string file;
  double radius = 1.0;
  KappaGrid grid;
  int refine_top = 3;
};

template <class T>
T single(const std::vector<T>& v, const char* flag) {
  if (v.size() != 1) detail::fail_validation(flag, " takes exactly one value here");
  return v.front();
}

template <class T>
T required(const std::optional<T>& v, const char* flag) {
  if (!v) detail::fail_validation(flag, " is required");
  return *v;
}

// Writes to --out when given, else to standard output.
void emit(const Flags& f, const std::function<void(std::ostream&)>& write) {
  if (f.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream os(f.out, std::ios::binary);
  if (!os) throw RuntimeFailure("cannot open " + f.out + " for writing");
  write(os);
  if (!os) throw RuntimeFailure("failed writing " + f.out);
}

ExperimentConfig config_from(const Flags& f, std::size_t reps, std::size_t samples) {
  ExperimentConfig c;
  if (!f.theta.empty()) c.thetas = f.theta;
  if (!f.d.empty()) c.dimensions = f.d;
  if (!f.rho.empty()) c.rhos = f.rho;
  c.reps = f.reps.value_or(reps);
  c.samples = f.samples.value_or(samples);
  c.confirm_samples = f.confirm_samples.value_or(c.confirm_samples);
  c.seed = f.seed;
  c.threads = f.threads;
  c.grid = f.grid;
  c.refine_top = f.refine_top;
  std::cerr << "seed " << c.seed << ", " << c.reps << " replications, " << c.samples << " samples\n";
  return c;
}

void cmd_estimate(const Flags& f) {
  if (f.file.empty()) detail::fail_validation("--file is required");
  const BallWindow window(single(f.d, "--d"), f.radius);
  std::ifstream in(f.file);
  if (!in) detail::fail_validation("cannot read ", f.file);
  const PointPattern p = read_pattern_csv(in, window);
  SteinParams params;
  params.k = f.k.empty() ? 1 : single(f.k, "--k");
  params.gamma = f.gamma.value_or(0.0);
  params.kappa = f.kappa.value_or(2.0);
  const double m = mle(p);
  const double s = stein_estimate_rescaled(p, params);
  emit(f, [&](std::ostream& os) { os << "mle,stein\n" << format_real(m) << ',' << format_real(s) << '\n'; });
}

void cmd_gain(const Flags& f) {
  const BallWindow window(single(f.d, "--d"));
  const int k = single(f.k, "--k");
  const double theta = single(f.theta, "--theta");
  Stream s = make_stream(f.seed);
  const ExponentialPhi phi(required(f.gamma, "--gamma"), required(f.kappa, "--kappa"));
  const auto g = expected_gain(k, phi, theta, window, f.samples.value_or(50000), s, f.threads);
  emit(f, [&](std::ostream& os) {
    os << "gain,std_error,n_samples\n" << format_real(g.value) << ',' << format_real(g.std_error) << ',' << g.n_samples
       << '\n';
  });
}

void cmd_optimize(const Flags& f) {
  const int d = single(f.d, "--d");
  // Intensities on B(0, w) map to theta w^d on the unit ball.
  const double theta = single(f.theta, "--theta") * std::pow(f.radius, d);
  const BallWindow unit(d);
  Stream s = make_stream(f.seed);
  OptimizerOptions opts;
  opts.threads = f.threads;
  opts.confirm_samples = f.confirm_samples.value_or(0);
  const std::size_t n = f.samples.value_or(50000);
  const auto r = f.rho.empty() ? optimize_at_theta(theta, unit, n, f.grid, s, opts)
                               : optimize_datadriven(theta, single(f.rho, "--rho"), unit, n, f.grid, s, opts);
  for (int k : r.skipped_k) std::cerr << "warning: k=" << k << " skipped (degenerate gamma* denominator)\n";
  emit(f, [&](std::ostream& os) {
    os << "k,gamma,kappa,objective,objective_se,k_lo,k_hi,evaluations\n"
       << r.params.k << ',' << format_real(r.params.gamma) << ',' << format_real(r.params.kappa) << ','
       << format_real(r.objective.value) << ',' << format_real(r.objective.std_error) << ',' << r.k_lo << ','
       << r.k_hi << ',' << r.evaluations << '\n';
  });
}

void cmd_table1(const Flags& f) {
  const auto rows = table1_study(config_from(f, 50000, 50000));
  for (const auto& r : rows) {
    if (!r.error.empty()) std::cerr << "cell theta=" << r.theta << " d=" << r.d << " failed: " << r.error << '\n';
  }
  emit(f, [&](std::ostream& os) { write_table1_csv(os, rows); });
}

void cmd_table2(const Flags& f) {
  const auto rows = table2_study(config_from(f, 5000, 1000));
  emit(f, [&](std::ostream& os) { write_table2_csv(os, rows); });
}

void cmd_gain_curve(const Flags& f) {
  ExperimentConfig c = config_from(f, 50000, 50000);
  if (f.theta.empty()) c.thetas = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  GainCurveSpec spec;
  if (!f.d.empty()) spec.d = single(f.d, "--d");
  if (f.rule == "per-point") {
    spec.rule = ParamRule::PerPoint;
  } else if (f.rule != "anchor") {
    detail::fail_validation("--rule must be anchor or per-point, got ", f.rule);
  }
  if (!f.k.empty()) {
    if (spec.rule == ParamRule::Anchor && f.anchor.size() != f.k.size()) {
      detail::fail_validation("--anchor needs one intensity per --k value");
    }
    spec.anchors.clear();
    for (std::size_t i = 0; i < f.k.size(); ++i) spec.anchors.emplace_back(f.k[i], f.anchor.empty() ? 0.0 : f.anchor[i]);
  }
  const auto rows = gain_curve_study(c, spec);
  emit(f, [&](std::ostream& os) { write_gain_curve_csv(os, rows); });
}

void cmd_pr_curve(const Flags& f) {
  ExperimentConfig c = config_from(f, 2, 200000);
  const auto rows = pr_study(c);
  emit(f, [&](std::ostream& os) { write_pr_curve_csv(os, rows); });
}

int cmd_selftest(const Flags& f) {
  const auto results = run_selftest(f.seed, f.threads);
  bool ok = true;
  for (const auto& r : results) {
    std::cout << (r.ok ? "PASS " : "FAIL ") << r.name << "  " << r.detail << '\n';
    ok = ok && r.ok;
  }
  return ok ? 0 : 2;
}

}  // namespace

PointPattern read_pattern_csv(std::istream& in, const BallWindow& window) {
  std::vector<double> coords;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    int columns = 0;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || cell.find_first_not_of(" \t\r", used) != std::string::npos) {
        detail::fail_validation("line ", std::to_string(line_no), ": not a number: '", cell, "'");
      }
      coords.push_back(x);
      ++columns;
    }
    if (columns != window.dimension()) {
      detail::fail_validation("line ", std::to_string(line_no), ": expected ", std::to_string(window.dimension()),
                              " columns, got ", std::to_string(columns));
    }
  }
  return PointPattern(window, std::move(coords));
}

int run(int argc, char** argv) {
  CLI::App app{"Stein estimators of the intensity of a Poisson point process"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--seed", f.seed, "Master seed");
  app.add_option("--samples", f.samples, "Monte-Carlo samples per expectation");
  app.add_option("--confirm-samples", f.confirm_samples, "Fresh samples for reported theoretical gains");
  app.add_option("--reps", f.reps, "Replications per cell");
  app.add_option("--out", f.out, "Output file (default: standard output)");
  app.add_option("--threads", f.threads, "Worker threads (0: all cores)");
  app.add_option("--d", f.d, "Dimension(s)")->expected(1, -1);
  app.add_option("--theta", f.theta, "Intensity (or list for studies)")->expected(1, -1);
  app.add_option("--k", f.k, "Nearest-neighbour index (list for gain-curve)")->expected(1, -1);
  app.add_option("--gamma", f.gamma, "gamma of the exponential family");
  app.add_option("--kappa", f.kappa, "kappa of the exponential family");
  app.add_option("--rho", f.rho, "Interval half-width factor (list for table2)")->expected(1, -1);
  app.add_option("--anchor", f.anchor, "Anchor intensities for gain-curve, one per --k")->expected(1, -1);
  app.add_option("--rule", f.rule, "gain-curve parameter rule: anchor or per-point");
  app.add_option("--file", f.file, "Pattern CSV: one point per line, d columns");
  app.add_option("--radius", f.radius, "Window radius for pattern files");
  app.add_option("--kappa-lo", f.grid.lo, "kappa grid lower end");
  app.add_option("--kappa-hi", f.grid.hi, "kappa grid upper end");
  app.add_option("--kappa-step", f.grid.step, "kappa grid step");
  app.add_option("--refine-top", f.refine_top, "table2: golden refinement for the best n k values (0: all)");

  int status = 0;
  auto sub = [&](const char* name, const char* help, std::function<void()> body) {
    app.add_subcommand(name, help)->callback(std::move(body));
  };
  sub("estimate", "MLE and Stein estimate of a pattern file", [&] { cmd_estimate(f); });
  sub("gain", "Expected relative gain at given parameters", [&] { cmd_gain(f); });
  sub("optimize", "Optimal (k, gamma, kappa), at theta or data-driven with --rho", [&] { cmd_optimize(f); });
  sub("table1", "Known-intensity replication study", [&] { cmd_table1(f); });
  sub("table2", "Data-driven replication study", [&] { cmd_table2(f); });
  sub("gain-curve", "Theoretical vs empirical gain curves", [&] { cmd_gain_curve(f); });
  sub("pr-curve", "Optimized gain of the first-point estimator", [&] { cmd_pr_curve(f); });
  sub("selftest", "Distributional and identity checks", [&] { status = cmd_selftest(f); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return status;
}

}  // namespace stein
