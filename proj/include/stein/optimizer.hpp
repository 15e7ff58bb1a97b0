#pragma once

// Sample-average-approximation search for (k*, gamma*, kappa*).
//
// For every k in {floor(0.75 n), ..., floor(1.2 n)} (n = round(theta |W|),
// clamped below at 1) the objective A^2 / (4B) is scanned on a coarse kappa
// grid and refined by golden-section search on the bracket around the best
// grid point. gamma is eliminated in closed form. All candidates share one set
// of draws (common random numbers).

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "stein/core_model.hpp"
#include "stein/gain.hpp"
#include "stein/random.hpp"
#include "stein/stats.hpp"

namespace stein {

struct KappaGrid {
  double lo = 2.0;
  double hi = 12.0;
  double step = 0.5;
  // Golden-section tolerance on kappa.
  double tol = 1e-2;
};

void validate(const KappaGrid& grid);

struct OptimizerOptions {
  // Fresh draws used to re-evaluate the winner; 0 keeps the search draws.
  std::size_t confirm_samples = 0;
  // Refine only the best `refine_top` k cells by grid value; 0 refines all.
  int refine_top = 0;
  unsigned threads = 1;
};

// One evaluated (k, kappa) candidate, unscaled by 16/(theta d^2 |W|).
struct Candidate {
  int k = 0;
  double kappa = 0.0;
  double value = 0.0;
};

struct OptimizationResult {
  SteinParams params;
  GainEstimate objective;
  int evaluations = 0;
  int k_lo = 0;
  int k_hi = 0;
  // k values whose gamma* denominator vanished for every kappa.
  std::vector<int> skipped_k;
  // Every candidate the search evaluated, in evaluation order per k.
  std::vector<Candidate> trace;
};

// {max(1, floor(0.75 n)), max(1, floor(1.2 n))}.
std::pair<int, int> k_search_range(long n);

struct GoldenResult {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
};

// Maximizes a unimodal f on [a, b] until the bracket is shorter than tol.
template <class F>
GoldenResult golden_section_maximize(F&& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  GoldenResult out;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  out.evaluations = 2;
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
    ++out.evaluations;
  }
  if (f1 >= f2) {
    out.x = x1;
    out.fx = f1;
  } else {
    out.x = x2;
    out.fx = f2;
  }
  return out;
}

// Core search on pre-drawn common random numbers over the draws' k range.
OptimizationResult optimize_on(const YDraws& draws, const KappaGrid& grid, const OptimizerOptions& options = {});

OptimizationResult optimize_at_theta(double theta, const BallWindow& window, std::size_t n_samples,
                                     const KappaGrid& grid, Stream& stream, const OptimizerOptions& options = {});

// Same search with the interval-averaged objective around theta_hat.
OptimizationResult optimize_datadriven(double theta_hat, double rho, const BallWindow& window, std::size_t n_samples,
                                       const KappaGrid& grid, Stream& stream, const OptimizerOptions& options = {});

}  // namespace stein
