#pragma once

#include <cstdint>
#include <random>

namespace stabground {

// Independent generator for (seed, stream); used for per-trial substreams and
// derived search seeds.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  auto g = substream(seed, stream);
  return g();
}

}  // namespace stabground
