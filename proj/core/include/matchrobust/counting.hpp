#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "matchrobust/bigcount.hpp"
#include "matchrobust/model.hpp"
#include "matchrobust/rng.hpp"

namespace matchrobust {

inline constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

/// n(n-1)/2.
constexpr std::size_t max_inversions(std::size_t n) noexcept { return n < 2 ? 0 : n * (n - 1) / 2; }

/// T[n][k]: permutations of n items with exactly k inversions, for n <= max_n
/// and k <= max_k. Entries past either bound read as zero.
class InversionTable {
 public:
  explicit InversionTable(std::size_t max_n, std::size_t max_k = kNoLimit);

  std::size_t max_n() const noexcept { return rows_.size() - 1; }
  std::size_t max_k() const noexcept { return max_k_; }

  const BigCount& operator()(std::size_t n, std::size_t k) const;
  std::span<const BigCount> row(std::size_t n) const { return rows_.at(n); }

 private:
  std::size_t max_k_;
  std::vector<std::vector<BigCount>> rows_;
};

/// T[n][k]; zero for k < 0 or k > n(n-1)/2.
BigCount permutations_by_inversions(std::size_t n, std::int64_t k);

/// out[k] = sum_{j < len} in[k - j], truncated to max_k + 1 entries. This is the
/// effect on inversion counts of inserting one item into a list of length len - 1.
std::vector<BigCount> convolve_box(std::span<const BigCount> in, std::size_t len, std::size_t max_k);

/// Full convolution truncated to max_k + 1 entries.
std::vector<BigCount> convolve(std::span<const BigCount> a, std::span<const BigCount> b,
                               std::size_t max_k);

/// Uniform permutation of [0, n) with exactly k inversions. out[p] is the
/// original position of the item placed at p. Requires table(n, k) > 0.
std::vector<std::size_t> sample_permutation(const InversionTable& table, std::size_t n,
                                            std::size_t k, Rng& rng);

/// Permutations of n positions by inversion count in which the item starting at
/// position i ends up before the item starting at j (0-based, i != j).
class ConstrainedPermutations {
 public:
  ConstrainedPermutations(std::size_t n, std::size_t i, std::size_t j, std::size_t max_k = kNoLimit);

  /// counts()[k] for k <= min(max_k, n(n-1)/2).
  const std::vector<BigCount>& counts() const { return layers_.back(); }
  const BigCount& count(std::size_t k) const;

  /// Uniform among the counted permutations with k inversions.
  std::vector<std::size_t> sample(std::size_t k, Rng& rng) const;

 private:
  std::size_t n_, i_, j_, max_k_;
  std::size_t block_;  // |i - j| + 1
  InversionTable middle_;
  // layers_[0] counts the block alone; each later layer adds one item.
  std::vector<std::vector<BigCount>> layers_;
};

/// t(n, k, i, j) with 1-based positions i != j.
BigCount constrained_permutations(std::size_t n, std::int64_t k, std::size_t i, std::size_t j);

/// Profiles of a fixed shape counted by swap distance, up to max_distance.
/// Men's lists have length num_women, women's lists length num_men.
class ProfileCounter {
 public:
  ProfileCounter(std::size_t num_men, std::size_t num_women, std::size_t max_distance);

  std::size_t max_distance() const noexcept { return max_distance_; }

  /// sigma[l]: all lists perturbed, total distance l.
  const BigCount& count(std::size_t l) const;

  /// c men's lists (resp. women's lists) with total distance r.
  const BigCount& men_lists(std::size_t c, std::size_t r) const;
  const BigCount& women_lists(std::size_t c, std::size_t r) const;

  /// Counts for `men` men's lists together with `women` women's lists, by distance.
  std::vector<BigCount> mixed(std::size_t men, std::size_t women) const;

  /// Per-list distances, men's lists first, drawn so that the resulting profile
  /// is uniform among those with total distance l.
  std::vector<std::size_t> sample_budgets(std::size_t men, std::size_t women, std::size_t l,
                                          Rng& rng) const;

  const InversionTable& table() const noexcept { return table_; }

 private:
  std::size_t num_men_, num_women_, max_distance_;
  InversionTable table_;
  std::vector<std::vector<BigCount>> men_power_;    // [c][r]
  std::vector<std::vector<BigCount>> women_power_;  // [c][r]
  std::vector<BigCount> total_;
};

/// Number of preference profiles at swap distance exactly l.
BigCount profiles_at_swap_distance(const Instance& inst, std::size_t l);

/// binom(agents, l); zero when l > agents.
BigCount deletion_sets_count(std::size_t agents, std::size_t l);

/// Reorders a list: out[p] = list[perm[p]].
std::vector<std::size_t> permute_list(std::span<const std::size_t> list,
                                      std::span<const std::size_t> perm);

/// Uniform profile at swap distance exactly l. Throws std::invalid_argument if none exists.
Instance sample_profile_at_distance(const Instance& inst, std::size_t l, Rng& rng);
Instance sample_profile_at_distance(const Instance& inst, std::size_t l, const ProfileCounter& counter,
                                    Rng& rng);

/// Profiles at distance exactly l in which a given pair outside M blocks M.
class BlockingProfiles {
 public:
  BlockingProfiles(const Instance& inst, const Matching& m, Pair pair, std::size_t l,
                   const ProfileCounter& counter);

  const BigCount& count() const noexcept { return total_; }
  Pair pair() const noexcept { return pair_; }

  /// Uniform among the counted profiles. Throws std::invalid_argument if there are none.
  Instance sample(Rng& rng) const;

 private:
  const Instance* inst_;
  const ProfileCounter* counter_;
  Pair pair_;
  std::size_t l_;
  // Man's and woman's list counts by distance; each is either constrained or free.
  std::vector<BigCount> man_counts_, woman_counts_, rest_;
  std::optional<ConstrainedPermutations> man_sampler_, woman_sampler_;
  BigCount total_;
};

/// b_{m,w}: profiles at distance exactly l in which `pair` blocks M.
/// Throws std::invalid_argument if the pair is in M.
BigCount blocking_profile_count(const Instance& inst, const Matching& m, Pair pair, std::size_t l);

Instance sample_blocking_profile(const Instance& inst, const Matching& m, Pair pair, std::size_t l,
                                 Rng& rng);

/// b = sum of b_{m,w} over pairs outside M. An upper bound on the number of
/// profiles at distance l where M is unstable, tight up to a factor n^2 - n.
BigCount unstable_profiles_upper(const Instance& inst, const Matching& m, std::size_t l);

// Estimators.

struct EstimatorConfig {
  double epsilon = 0.05;
  double delta = 0.05;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// ceil(ln(2 / delta) / (2 epsilon^2)).
std::size_t hoeffding_sample_size(double epsilon, double delta);

/// ceil(3 n^2 ln 8 / epsilon^2).
std::size_t fpras_sample_size(std::size_t n, double epsilon);

struct FprasEstimate {
  BigRational estimate;  // X * b / s
  BigCount upper;        // b
  std::size_t samples = 0;
  std::size_t hits = 0;  // X

  double value() const;
};

/// Estimates the number of profiles at distance exactly l where M is unstable,
/// with relative error epsilon with probability at least 3/4.
FprasEstimate fpras_unstable_count(const Instance& inst, const Matching& m, std::size_t l,
                                   double epsilon, Rng& rng);

/// Object whose stability is measured: a matching (no blocking pair), a pair
/// (in some stable matching) or an agent (assigned in the stable matchings).
using StabilityObject = std::variant<Matching, Pair, AgentId>;

enum class PerturbationMode { Swap, Delete };

bool object_is_stable(const Instance& inst, const StabilityObject& object);

/// Agents that deletions may not remove: the endpoints of a pair, an agent itself.
std::vector<AgentId> protected_agents(const StabilityObject& object);

/// Removes `victims` and checks the object in the reduced instance.
bool object_survives_deletion(const Instance& inst, const StabilityObject& object,
                              std::span<const AgentId> victims);

struct McEstimate {
  double probability = 0;
  std::size_t samples = 0;
  std::size_t stable = 0;
};

/// Fraction of hoeffding_sample_size(epsilon, delta) uniform perturbations at
/// distance exactly l under which the object stays stable. Trial t draws from
/// stream (seed, t). Throws std::invalid_argument if no perturbation exists.
McEstimate mc_stability_probability(const Instance& inst, const StabilityObject& object,
                                    std::size_t l, const EstimatorConfig& cfg,
                                    PerturbationMode mode = PerturbationMode::Swap);

}  // namespace matchrobust
