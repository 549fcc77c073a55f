#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>

#include "matchrobust/bigcount.hpp"

namespace matchrobust {

/// The one engine used everywhere. mt19937_64 output is fixed by the standard,
/// and every distribution below is implemented here, so streams are portable.
using Rng = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Folds a seed and a list of stream coordinates (grid index, trial index, ...)
/// into one 64-bit seed.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept;

inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  return Rng(derive_seed(seed, keys));
}

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

/// Uniform integer in [0, bound). bound must be positive.
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

/// Uniform big integer in [0, bound). bound must be positive.
BigCount uniform_below(Rng& rng, const BigCount& bound);

/// Standard normal variate (Box-Muller).
double standard_normal(Rng& rng);

/// Index i drawn with probability weights[i] / sum(weights). The sum must be positive.
std::size_t pick_weighted(Rng& rng, std::span<const BigCount> weights);

template <class RandomIt>
void shuffle(RandomIt first, RandomIt last, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const auto j = uniform_index(rng, i);
    using std::swap;
    swap(first[i - 1], first[j]);
  }
}

}  // namespace matchrobust
