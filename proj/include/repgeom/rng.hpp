#pragma once

#include "repgeom/types.hpp"

#include <cstdint>
#include <vector>

namespace repgeom {

/// SplitMix64 (Steele, Lea & Flood 2014). Every subsample and MDS start is
/// drawn from this generator so index traces reproduce across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), rejection-sampled (no modulo bias).
  std::uint64_t bounded(std::uint64_t bound) noexcept;

  /// Standard normal via Box-Muller (one value per two uniforms).
  double normal() noexcept;

 private:
  std::uint64_t state_;
};

/// Partial Fisher-Yates over 0..rows-1 driven by SplitMix64(seed), first
/// `count` positions kept and sorted ascending.
std::vector<Index> subsample_indices(Index rows, Index count, std::uint64_t seed);

}  // namespace repgeom
