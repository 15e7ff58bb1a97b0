#pragma once

// Built-in distributional and identity checks run by `selftest`.

#include <string>
#include <vector>

#include "stein/random.hpp"

namespace stein {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b| (inputs are sorted in place).
double ks_two_sample(std::vector<double>& a, std::vector<double>& b);

// 1% critical value of the two-sample statistic, 1.628 sqrt((n + m) / (n m)).
double ks_critical_1pct(std::size_t n, std::size_t m);

std::vector<CheckResult> run_selftest(std::uint64_t seed, unsigned threads = 1);

}  // namespace stein
