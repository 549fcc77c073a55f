#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "matchrobust/counting.hpp"
#include "matchrobust/model.hpp"
#include "matchrobust/rng.hpp"

namespace matchrobust {

/// norm-phi values 0, 0.0002, ..., 0.01, then 0.015, ..., 0.63, then 0.65, ..., 1.0.
std::vector<double> default_grid();

/// About 70 points drawn from default_grid(): dense below 0.01 where matchings
/// tip over, sparse above 0.3.
std::vector<double> coarse_grid();

/// Trials per grid point, master seed and worker threads. Trial t at grid index g
/// always uses stream (seed, g, t).
struct MonteCarloConfig {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Fraction of `trials` Mallows perturbations under which the object stays stable.
double stability_probability(const Instance& inst, const StabilityObject& object, double norm_phi,
                             std::size_t trials, Rng& rng);

struct StabilityCurve {
  std::vector<double> grid;
  std::vector<double> probs;
  std::size_t trials = 0;
};

/// Curves for several objects; every object sees the same perturbed instances.
std::vector<StabilityCurve> stability_curves(const Instance& inst,
                                             std::span<const StabilityObject> objects,
                                             std::span<const double> grid, const MonteCarloConfig& cfg);

StabilityCurve stability_curve(const Instance& inst, const StabilityObject& object,
                               std::span<const double> grid, const MonteCarloConfig& cfg);

/// First grid value whose estimate is below 0.5, or nothing if the object never
/// drops that far. Grid points past the last threshold are not evaluated.
std::vector<std::optional<double>> fifty_percent_thresholds(const Instance& inst,
                                                            std::span<const StabilityObject> objects,
                                                            std::span<const double> grid,
                                                            const MonteCarloConfig& cfg);

std::optional<double> fifty_percent_threshold(const Instance& inst, const StabilityObject& object,
                                              std::span<const double> grid, const MonteCarloConfig& cfg);

/// A missing threshold counts as the last grid value.
double threshold_value(const std::optional<double>& threshold, std::span<const double> grid);

/// Swaps needed to make the pair block M. Throws std::invalid_argument if the pair is in M.
std::size_t beta(const Instance& inst, const Matching& m, Pair pair);

struct ProximityReport {
  std::size_t depth = 0;
  std::vector<std::size_t> histogram;  // histogram[k - 1] = pairs with beta = k, k = 1..depth
  std::size_t blocking = 0;            // beta = 0
  std::size_t beyond = 0;              // beta > depth
  /// log_n of sum_k n^(depth-k) * histogram[k-1]; empty when that sum is 0,
  /// meaning no pair is within `depth` swaps of blocking.
  std::optional<double> proximity;
};

ProximityReport blocking_pair_proximity(const Instance& inst, const Matching& m, std::size_t depth = 5);

/// Mean number of blocking pairs of M over `trials` perturbations.
double avg_blocking_pairs(const Instance& inst, const Matching& m, double norm_phi, std::size_t trials,
                          Rng& rng);

/// Same, with trial t drawn from stream (seed, t).
double avg_blocking_pairs(const Instance& inst, const Matching& m, double norm_phi,
                          const MonteCarloConfig& cfg);

std::size_t blocking_score(const Instance& inst, Pair pair);

struct PairStats {
  std::vector<Pair> pairs;
  std::vector<std::optional<double>> thresholds;
  double average = 0;
  double variance = 0;
  double max = 0;
  double min = 0;
};

/// Thresholds of all stable pairs, with missing thresholds counted as the last grid value.
PairStats pair_statistics(const Instance& inst, std::span<const double> grid, const MonteCarloConfig& cfg);

/// Throws std::invalid_argument for mismatched or short input and
/// std::domain_error when either series is constant.
double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

}  // namespace matchrobust
