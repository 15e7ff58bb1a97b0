#pragma once

// Replication studies and their CSV output.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stein/core_model.hpp"
#include "stein/optimizer.hpp"
#include "stein/stats.hpp"

namespace stein {

struct ExperimentConfig {
  std::vector<double> thetas{5.0, 10.0, 20.0, 40.0};
  std::vector<int> dimensions{1, 2, 3};
  // Replications per cell.
  std::size_t reps = 50000;
  // Monte-Carlo samples per expectation (SAA search, PR gain).
  std::size_t samples = 50000;
  // Fresh samples for the reported theoretical gain; 0 reuses the search draws.
  std::size_t confirm_samples = 500000;
  std::vector<double> rhos{0.0, 1.0, 1.6449, 1.96};
  std::uint64_t seed = 1;
  unsigned threads = 1;
  KappaGrid grid;
  // Per-replication golden refinement budget of the Table 2 search (0 = every k).
  int refine_top = 3;
};

void validate(const ExperimentConfig& config);

// Mean, m-denominator sd and mean squared error about theta.
struct EstimatorSummary {
  double mean = 0.0;
  double sd = 0.0;
  double mse = 0.0;
};

EstimatorSummary summarize(std::span<const double> estimates, double theta);

// 100 (mse_reference - mse) / mse_reference.
double gain_pct(double mse_reference, double mse);

struct Table1Row {
  double theta = 0.0;
  int d = 0;
  SteinParams params;
  EstimatorSummary mle;
  EstimatorSummary stein;
  double gain_pct = 0.0;
  // Non-empty when the cell's optimizer failed; numeric fields are then NaN.
  std::string error;
};

std::vector<Table1Row> table1_study(const ExperimentConfig& config);

enum class ParamRule {
  // Optimize (gamma, kappa) once per k at its anchor intensity.
  Anchor,
  // Optimize (gamma, kappa) separately at every (k, theta).
  PerPoint,
};

struct GainCurveSpec {
  int d = 2;
  // (k, anchor theta) pairs; the anchor is ignored under PerPoint.
  std::vector<std::pair<int, double>> anchors{{10, 5.0}, {20, 10.0}, {50, 25.0}, {80, 40.0}};
  ParamRule rule = ParamRule::Anchor;
};

struct GainCurveRow {
  double theta = 0.0;
  int k = 0;
  double kappa = 0.0;
  double gamma = 0.0;
  GainEstimate theo;
  GainEstimate emp;
};

// Theoretical (Monte-Carlo expectation) and empirical (replication) gains as
// fractions for every (k, theta) in config.thetas.
std::vector<GainCurveRow> gain_curve_study(const ExperimentConfig& config, const GainCurveSpec& spec);

struct Table2Row {
  double theta = 0.0;
  int d = 0;
  double rho = 0.0;
  double gain_pct = 0.0;
  std::size_t n_reps = 0;
  std::size_t n_fallback = 0;
};

// Per replication: sample a pattern, optimize the data-driven objective
// around its MLE, apply the chosen estimator to the same pattern. Failed
// optimizations fall back to the MLE.
std::vector<Table2Row> table2_study(const ExperimentConfig& config);

struct PrCurveRow {
  double theta = 0.0;
  double kappa_star = 0.0;
  double gain_pct = 0.0;
};

// Log-spaced kappa grid used by pr_study.
std::vector<double> pr_kappa_grid();

// Empirical PR gain maximized over pr_kappa_grid() with common patterns.
std::vector<PrCurveRow> pr_study(const ExperimentConfig& config);

// %.17g, or "nan".
std::string format_real(double x);

void write_table1_csv(std::ostream& out, std::span<const Table1Row> rows);
void write_gain_curve_csv(std::ostream& out, std::span<const GainCurveRow> rows);
void write_table2_csv(std::ostream& out, std::span<const Table2Row> rows);
void write_pr_curve_csv(std::ostream& out, std::span<const PrCurveRow> rows);

}  // namespace stein
