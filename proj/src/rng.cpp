#include "repgeom/rng.hpp"

#include "repgeom/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace repgeom {

std::uint64_t SplitMix64::bounded(std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  // Reject the low 2^64 mod bound values so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

double SplitMix64::normal() noexcept {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<Index> subsample_indices(Index rows, Index count, std::uint64_t seed) {
  if (count < 1) fail(ErrorCode::InvalidArgument, "subsample size must be positive");
  if (rows < count) {
    fail(ErrorCode::TooFewRows, "cannot draw " + std::to_string(count) + " rows from " +
                                    std::to_string(rows));
  }
  std::vector<Index> pool(static_cast<std::size_t>(rows));
  std::iota(pool.begin(), pool.end(), Index{0});
  SplitMix64 rng(seed);
  for (Index i = 0; i < count; ++i) {
    const auto j = i + static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(rows - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace repgeom
