#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace stein {

// The random stream every sampler consumes. One stream per worker; never shared.
using Stream = std::mt19937_64;

// Derives an independent stream from a master seed and a key path such as
// (cell id, replication index). Equal inputs always give the same stream.
Stream make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys = {});

// Draws a fresh 64-bit seed from an existing stream (used to key sub-batches).
inline std::uint64_t draw_seed(Stream& stream) { return stream(); }

// Uniform on the open interval (0, 1).
inline double uniform_open(Stream& stream) {
  for (;;) {
    const double u = std::generate_canonical<double, 53>(stream);
    if (u > 0.0) return u;
  }
}

}  // namespace stein
