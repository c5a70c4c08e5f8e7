#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace mgibbs {

using Rng = std::mt19937_64;

/// Recorded in every report so runs can be reproduced.
inline constexpr std::string_view kRngDescription = "mt19937_64 keyed by seed_seq(seed, stream...)";

/// Independent generator for the stream addressed by (seed, ids...). Streams are
/// derived without coordination, so work can be split across chunks freely.
inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids = {}) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * ids.size());
  words.push_back(static_cast<std::uint32_t>(seed));
  words.push_back(static_cast<std::uint32_t>(seed >> 32));
  for (auto id : ids) {
    words.push_back(static_cast<std::uint32_t>(id));
    words.push_back(static_cast<std::uint32_t>(id >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace mgibbs
