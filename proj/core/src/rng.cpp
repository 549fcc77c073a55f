#include "matchrobust/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace matchrobust {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(seed);
  for (const auto k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_index: empty range");
  // Reject the partial top bucket so the modulo is unbiased.
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

BigCount uniform_below(Rng& rng, const BigCount& bound) {
  if (bound <= 0) throw std::invalid_argument("uniform_below: empty range");
  if (bound <= UINT64_MAX) return BigCount(uniform_index(rng, static_cast<std::uint64_t>(bound)));
  const std::size_t bits = boost::multiprecision::msb(bound) + 1;
  const std::size_t words = (bits + 63) / 64;
  const std::size_t top_bits = bits - 64 * (words - 1);
  const std::uint64_t top_mask = top_bits == 64 ? UINT64_MAX : ((std::uint64_t{1} << top_bits) - 1);
  for (;;) {
    BigCount x = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t chunk = rng();
      if (w == 0) chunk &= top_mask;
      x <<= 64;
      x += chunk;
    }
    if (x < bound) return x;
  }
}

double standard_normal(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t pick_weighted(Rng& rng, std::span<const BigCount> weights) {
  BigCount total = 0;
  for (const auto& w : weights) total += w;
  if (total <= 0) throw std::invalid_argument("pick_weighted: zero total weight");
  BigCount r = uniform_below(rng, total);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (r < weights[i]) return i;
    r -= weights[i];
  }
  return weights.size() - 1;  // unreachable
}

}  // namespace matchrobust
