#pragma once

#include <cstdint>
#include <random>

namespace jackflow {

using Rng = std::mt19937_64;

/// Child seed for path `index` of a run with master seed `master`.
/// splitmix64 finalizer applied to master ^ golden·(index+1); fixed forever.
constexpr std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) noexcept {
  std::uint64_t z = master ^ (0x9E3779B97F4A7C15ULL * (index + 1));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t master, std::uint64_t index) { return Rng(child_seed(master, index)); }

}  // namespace jackflow
