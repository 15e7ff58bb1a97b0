#include "stein/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <string>

#include "stein/errors.hpp"
#include "stein/parallel.hpp"

namespace stein {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// The atom-free draws of one k column, laid out for repeated kappa evaluation.
class KappaScanner {
 public:
  KappaScanner(const YDraws& draws, int k) : n_(static_cast<double>(draws.size())) {
    const auto y = draws.column(k);
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double t = y[i];
      if (!(t < 1.0)) continue;
      const double u = 1.0 - t;
      t_.push_back(t);
      wt_.push_back(draws.weight(i) * t);
      wt2u2_.push_back(draws.weight(i) * t * t * u * u);
      log_u_.push_back(std::log1p(-t));
    }
  }

  // Unscaled A^2/(4B), or -inf when the gamma* denominator 2B/kappa vanishes.
  double value(double sum_a, double sum_b, double kappa) const {
    const double a = kappa * sum_a / n_;
    const double b = kappa * kappa * sum_b / n_;
    if (!(2.0 * b / kappa >= kDegenerateDenominator)) return kNegInf;
    return a * a / (4.0 * b);
  }

  double evaluate(double kappa) const {
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const double p = std::exp((kappa - 2.0) * log_u_[i]);
      sa += wt_[i] * p * (1.0 - kappa * t_[i]);
      sb += wt2u2_[i] * p * p;
    }
    return value(sa, sb, kappa);
  }

  // Values on lo, lo + step, ...; (1-t)^{kappa-2} advances by a factor per step.
  std::vector<double> scan(const std::vector<double>& kappas, double step) const {
    std::vector<double> sa(kappas.size(), 0.0);
    std::vector<double> sb(kappas.size(), 0.0);
    for (std::size_t i = 0; i < t_.size(); ++i) {
      double p = std::exp((kappas.front() - 2.0) * log_u_[i]);
      const double ratio = std::exp(step * log_u_[i]);
      const double t = t_[i];
      for (std::size_t j = 0; j < kappas.size(); ++j) {
        sa[j] += wt_[i] * p * (1.0 - kappas[j] * t);
        sb[j] += wt2u2_[i] * p * p;
        p *= ratio;
      }
    }
    std::vector<double> out(kappas.size());
    for (std::size_t j = 0; j < kappas.size(); ++j) out[j] = value(sa[j], sb[j], kappas[j]);
    return out;
  }

 private:
  double n_;
  std::vector<double> t_;
  std::vector<double> wt_;
  std::vector<double> wt2u2_;
  std::vector<double> log_u_;
};

struct CellOutcome {
  int k = 0;
  double kappa = 0.0;
  double value = kNegInf;
  int evaluations = 0;
  std::vector<Candidate> trace;
  bool degenerate = true;
};

std::vector<double> grid_points(const KappaGrid& grid) {
  std::vector<double> out;
  const int steps = static_cast<int>(std::floor((grid.hi - grid.lo) / grid.step + 1e-9));
  for (int j = 0; j <= steps; ++j) out.push_back(grid.lo + j * grid.step);
  return out;
}

void refine(const KappaScanner& scanner, const KappaGrid& grid, CellOutcome& cell) {
  const double a = std::max(grid.lo, cell.kappa - grid.step);
  const double b = std::min(grid.hi, cell.kappa + grid.step);
  if (!(b - a > grid.tol)) return;
  auto f = [&](double kappa) {
    const double v = scanner.evaluate(kappa);
    cell.trace.push_back({cell.k, kappa, v});
    return v;
  };
  const GoldenResult g = golden_section_maximize(f, a, b, grid.tol);
  cell.evaluations += g.evaluations;
  if (g.fx > cell.value) {
    cell.value = g.fx;
    cell.kappa = g.x;
  }
}

}  // namespace

void validate(const KappaGrid& grid) {
  if (!(grid.lo >= 2.0)) detail::fail_validation("kappa grid must start at >= 2, got ", std::to_string(grid.lo));
  if (!(grid.hi >= grid.lo) || !std::isfinite(grid.hi)) detail::fail_validation("kappa grid upper bound below lower");
  if (!(grid.step > 0.0)) detail::fail_validation("kappa grid step must be positive");
  if (!(grid.tol > 0.0)) detail::fail_validation("kappa tolerance must be positive");
}

std::pair<int, int> k_search_range(long n) {
  const auto lo = static_cast<int>(std::floor(0.75 * static_cast<double>(n)));
  const auto hi = static_cast<int>(std::floor(1.2 * static_cast<double>(n)));
  return {std::max(1, lo), std::max(1, hi)};
}

OptimizationResult optimize_on(const YDraws& draws, const KappaGrid& grid, const OptimizerOptions& options) {
  validate(grid);
  const std::vector<double> kappas = grid_points(grid);
  const int n_cells = draws.k_hi() - draws.k_lo() + 1;
  std::vector<CellOutcome> cells(static_cast<std::size_t>(n_cells));

  // Coarse grid for every k.
  std::vector<std::unique_ptr<KappaScanner>> scanner_of(static_cast<std::size_t>(n_cells));
  parallel_for(static_cast<std::size_t>(n_cells), options.threads, [&](std::size_t c) {
    auto& cell = cells[c];
    cell.k = draws.k_lo() + static_cast<int>(c);
    scanner_of[c] = std::make_unique<KappaScanner>(draws, cell.k);
    const auto values = scanner_of[c]->scan(kappas, grid.step);
    cell.evaluations = static_cast<int>(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
      cell.trace.push_back({cell.k, kappas[j], values[j]});
      if (values[j] > cell.value) {
        cell.value = values[j];
        cell.kappa = kappas[j];
      }
    }
    cell.degenerate = !(cell.value > kNegInf);
  });

  // Golden-section refinement around each cell's best grid kappa.
  std::vector<std::size_t> order(cells.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cells[a].value > cells[b].value; });
  std::size_t n_refine = order.size();
  if (options.refine_top > 0) n_refine = std::min(n_refine, static_cast<std::size_t>(options.refine_top));
  parallel_for(n_refine, options.threads, [&](std::size_t r) {
    auto& cell = cells[order[r]];
    if (!cell.degenerate) refine(*scanner_of[order[r]], grid, cell);
  });

  OptimizationResult result;
  result.k_lo = draws.k_lo();
  result.k_hi = draws.k_hi();
  const CellOutcome* best = nullptr;
  for (const auto& cell : cells) {  // ascending k: exact ties keep the smaller k
    result.evaluations += cell.evaluations;
    result.trace.insert(result.trace.end(), cell.trace.begin(), cell.trace.end());
    if (cell.degenerate) {
      result.skipped_k.push_back(cell.k);
      continue;
    }
    if (best == nullptr || cell.value > best->value) best = &cell;
  }
  if (best == nullptr) {
    throw DegenerateDenominator(draws.k_lo(), grid.lo, 0.0);
  }
  const GammaStar gs = gamma_star_on(draws, best->k, best->kappa);
  result.params = {best->k, gs.gamma, best->kappa};
  result.objective = optimized_gain_on(draws, best->k, best->kappa);
  return result;
}

namespace {

OptimizationResult confirm(OptimizationResult result, const BallWindow& window, double theta_ref,
                           const OptimizerOptions& options, Stream& stream, double rho, double theta_hat) {
  if (options.confirm_samples == 0) return result;
  const std::uint64_t seed = draw_seed(stream);
  const int k = result.params.k;
  const YDraws fresh = rho > 0.0
                           ? datadriven_draws(window, theta_hat, rho, k, k, options.confirm_samples, seed, options.threads)
                           : YDraws::at_theta(window, theta_ref, k, k, options.confirm_samples, seed, options.threads);
  result.objective = expected_gain_on(fresh, k, ExponentialPhi(result.params.gamma, result.params.kappa));
  return result;
}

}  // namespace

OptimizationResult optimize_at_theta(double theta, const BallWindow& window, std::size_t n_samples,
                                     const KappaGrid& grid, Stream& stream, const OptimizerOptions& options) {
  if (!(theta > 0.0) || !std::isfinite(theta)) detail::fail_validation("intensity must be positive");
  const long n = std::lround(theta * window.volume());
  if (n < 2) {
    detail::fail_validation("expected point count round(theta |W|) = ", std::to_string(n), " must be >= 2");
  }
  const auto [k_lo, k_hi] = k_search_range(n);
  const auto draws = YDraws::at_theta(window, theta, k_lo, k_hi, n_samples, draw_seed(stream), options.threads);
  return confirm(optimize_on(draws, grid, options), window, theta, options, stream, 0.0, theta);
}

OptimizationResult optimize_datadriven(double theta_hat, double rho, const BallWindow& window, std::size_t n_samples,
                                       const KappaGrid& grid, Stream& stream, const OptimizerOptions& options) {
  if (!(theta_hat > 0.0) || !std::isfinite(theta_hat)) {
    detail::fail_validation("estimated intensity must be positive, got ", std::to_string(theta_hat));
  }
  const long n = std::max(1L, std::lround(theta_hat * window.volume()));
  const auto [k_lo, k_hi] = k_search_range(n);
  const auto draws = datadriven_draws(window, theta_hat, rho, k_lo, k_hi, n_samples, draw_seed(stream), options.threads);
  return confirm(optimize_on(draws, grid, options), window, theta_hat, options, stream, rho, theta_hat);
}

}  // namespace stein
