//
// TomoLens - Copyright 2026 The TomoLens Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <random>

namespace tomolens {

// Every random draw in the library comes from a std::mt19937_64 whose seed is
// derived from (master seed, stream domain, stream index) through SplitMix64.
// Streams are therefore independent of evaluation order: the counts for a
// given setting depend only on the master seed and that setting's index.

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

enum class StreamDomain : std::uint64_t {
  kSampling = 1,
  kRestarts = 2,
  kTrials = 3,
  kTrueParams = 4,
};

inline constexpr std::uint64_t stream_seed(std::uint64_t master, StreamDomain domain,
                                           std::uint64_t index) noexcept {
  const std::uint64_t tag = splitmix64(static_cast<std::uint64_t>(domain) * 0xD1B54A32D192ED03ULL);
  return splitmix64(splitmix64(master ^ tag) + index);
}

using Rng = std::mt19937_64;

inline Rng make_stream(std::uint64_t master, StreamDomain domain, std::uint64_t index) {
  return Rng(stream_seed(master, domain, index));
}

} // namespace tomolens
