#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stein/core_model.hpp"

namespace stein {

// Command-line entry point. Returns 0 on success, 1 on validation errors
// (including bad usage) and 2 on runtime failures.
int run(int argc, char** argv);

// Parses a headerless CSV of d coordinates per line into a pattern on `window`.
PointPattern read_pattern_csv(std::istream& in, const BallWindow& window);

}  // namespace stein
