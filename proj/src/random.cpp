#include "stein/random.hpp"

#include <vector>

namespace stein {

Stream make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (keys.size() + 1) + 1);
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  // Length tag keeps (s) and (s, 0) apart.
  words.push_back(static_cast<std::uint32_t>(keys.size()));
  for (auto k : keys) push(k);
  std::seed_seq seq(words.begin(), words.end());
  return Stream(seq);
}

}  // namespace stein
