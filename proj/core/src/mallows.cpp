#include "matchrobust/mallows.hpp"

#include <cmath>
#include <stdexcept>

namespace matchrobust {

double expected_kendall_distance(double phi, std::size_t n) {
  if (!(phi >= 0 && phi <= 1)) throw std::invalid_argument("phi must lie in [0, 1]");
  double total = 0;
  for (std::size_t i = 2; i <= n; ++i) {
    // Mean of the insertion offset for the i-th item.
    double num = 0, den = 0, power = 1;
    for (std::size_t j = 0; j < i; ++j) {
      num += static_cast<double>(j) * power;
      den += power;
      power *= phi;
    }
    total += num / den;
  }
  return total;
}

double max_expected_distance(std::size_t n) {
  return static_cast<double>(n) * (static_cast<double>(n) - 1) / 4.0;
}

double normalize(double norm_phi, std::size_t n) {
  if (!(norm_phi >= 0 && norm_phi <= 1)) throw std::invalid_argument("norm_phi must lie in [0, 1]");
  if (n < 2 || norm_phi == 0 || norm_phi == 1) return norm_phi;
  const double target = norm_phi * max_expected_distance(n);
  double lo = 0, hi = 1;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (expected_kendall_distance(mid, n) < target) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// Inverse CDF of the truncated geometric; mass = 1 - phi^i.
std::size_t offset_from_uniform(double u, double phi, double log_phi, double mass, std::size_t i) {
  // P(0) = (1 - phi) / (1 - phi^i); most draws stop here for small phi.
  if (u * mass < 1 - phi) return 0;
  const double j = std::floor(std::log1p(-u * mass) / log_phi);
  if (!(j >= 0)) return 0;
  return std::min(static_cast<std::size_t>(j), i - 1);
}

}  // namespace

std::size_t sample_insertion_offset(double phi, std::size_t i, Rng& rng) {
  if (i <= 1 || phi == 0) return 0;
  if (phi >= 1) return uniform_index(rng, i);
  const double log_phi = std::log(phi);
  return offset_from_uniform(uniform01(rng), phi, log_phi, -std::expm1(static_cast<double>(i) * log_phi), i);
}

std::vector<std::size_t> sample_list(std::span<const std::size_t> center, double phi, Rng& rng) {
  std::vector<std::size_t> out;
  out.reserve(center.size());
  if (phi == 0 || phi >= 1) {
    for (std::size_t i = 0; i < center.size(); ++i) {
      const auto j = sample_insertion_offset(phi, i + 1, rng);
      out.insert(out.end() - static_cast<std::ptrdiff_t>(j), center[i]);
    }
    return out;
  }
  // Same draws as sample_insertion_offset, with the log hoisted and phi^i kept as a running product.
  const double log_phi = std::log(phi);
  double power = 1;
  for (std::size_t i = 0; i < center.size(); ++i) {
    power *= phi;
    std::size_t j = 0;
    if (i > 0) j = offset_from_uniform(uniform01(rng), phi, log_phi, 1 - power, i + 1);
    out.insert(out.end() - static_cast<std::ptrdiff_t>(j), center[i]);
  }
  return out;
}

MallowsNoise::MallowsNoise(double norm_phi) : norm_phi_(norm_phi) {
  if (!(norm_phi >= 0 && norm_phi <= 1)) throw std::invalid_argument("norm_phi must lie in [0, 1]");
}

double MallowsNoise::phi_for(std::size_t length) const {
  std::lock_guard lock(mutex_);
  auto it = cache_.find(length);
  if (it == cache_.end()) it = cache_.emplace(length, normalize(norm_phi_, length)).first;
  return it->second;
}

Instance MallowsNoise::perturb(const Instance& inst, Rng& rng) const {
  const double phi_men = phi_for(inst.num_women());
  const double phi_women = phi_for(inst.num_men());
  std::vector<std::vector<std::size_t>> men(inst.num_men()), women(inst.num_women());
  for (std::size_t u = 0; u < inst.num_men(); ++u) men[u] = sample_list(inst.man_list(u), phi_men, rng);
  for (std::size_t w = 0; w < inst.num_women(); ++w) {
    women[w] = sample_list(inst.woman_list(w), phi_women, rng);
  }
  return Instance(std::move(men), std::move(women));
}

Instance perturb_instance(const Instance& inst, double norm_phi, Rng& rng) {
  return MallowsNoise(norm_phi).perturb(inst, rng);
}

}  // namespace matchrobust
