#pragma once

#include <cstddef>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "matchrobust/model.hpp"
#include "matchrobust/rng.hpp"

namespace matchrobust {

/// Expected Kendall distance of a Mallows(phi) list of length n to its center.
double expected_kendall_distance(double phi, std::size_t n);

/// n(n-1)/4, the expectation at phi = 1.
double max_expected_distance(std::size_t n);

/// The phi whose expected distance is norm_phi * n(n-1)/4. Bisection to 1e-12.
double normalize(double norm_phi, std::size_t n);

/// Offset from the back at which the i-th item is inserted: j in [0, i) with
/// probability proportional to phi^j.
std::size_t sample_insertion_offset(double phi, std::size_t i, Rng& rng);

/// Mallows sample around `center` by repeated insertion.
std::vector<std::size_t> sample_list(std::span<const std::size_t> center, double phi, Rng& rng);

/// Resamples every list of an instance from a Mallows model centred on it, with
/// dispersion chosen per list length from a normalized dispersion.
class MallowsNoise {
 public:
  explicit MallowsNoise(double norm_phi);

  double norm_phi() const noexcept { return norm_phi_; }
  double phi_for(std::size_t length) const;

  Instance perturb(const Instance& inst, Rng& rng) const;

 private:
  double norm_phi_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::size_t, double> cache_;
};

Instance perturb_instance(const Instance& inst, double norm_phi, Rng& rng);

}  // namespace matchrobust
