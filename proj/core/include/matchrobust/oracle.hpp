#pragma once

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "matchrobust/bigcount.hpp"
#include "matchrobust/counting.hpp"
#include "matchrobust/model.hpp"
#include "matchrobust/worstcase.hpp"

/// Exhaustive reference solvers. Every search is bounded by a guard and throws
/// GuardExceeded instead of silently truncating.
namespace matchrobust::oracle {

inline constexpr std::size_t kDefaultGuard = 10'000'000;

/// Longest list whose permutations are enumerated.
inline constexpr std::size_t kMaxListLength = 8;

/// Counts work units and throws GuardExceeded once more than `limit` are charged.
class OracleGuard {
 public:
  explicit OracleGuard(std::size_t limit = kDefaultGuard) : limit_(limit) {}

  void charge(std::size_t units = 1);
  /// Fails up front when a search is known to need more than the limit.
  void require(const BigCount& planned, const char* what) const;
  std::size_t used() const noexcept { return used_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t limit_;
  std::size_t used_ = 0;
};

/// Visits every profile at swap distance exactly l, each once.
void for_each_profile_at_distance(const Instance& inst, std::size_t l,
                                  const std::function<void(const Instance&)>& visit,
                                  std::size_t guard = kDefaultGuard);

std::vector<Instance> enumerate_profiles_at_distance(const Instance& inst, std::size_t l,
                                                     std::size_t guard = kDefaultGuard);

/// Visits every l-subset of `pool` in lexicographic order of positions.
void for_each_subset(std::span<const AgentId> pool, std::size_t l,
                     const std::function<void(std::span<const AgentId>)>& visit,
                     std::size_t guard = kDefaultGuard);

/// S*: profiles at distance exactly l in which M is not stable.
BigCount exact_unstable_count(const Instance& inst, const Matching& m, std::size_t l,
                              std::size_t guard = kDefaultGuard);

/// Exact probability that the object stays stable under a uniform perturbation
/// at distance exactly l (profiles for Swap, l-subsets of deletable agents for Delete).
BigRational exact_stability_probability(const Instance& inst, const StabilityObject& object,
                                        std::size_t l, PerturbationMode mode,
                                        std::size_t guard = kDefaultGuard);

/// Target for the blocking-pairs variants: M must end up with at least (or
/// exactly) `count` blocking pairs.
struct BlockingPairsTarget {
  Matching matching;
  std::size_t count = 1;
  bool exactly = false;
};

using WorstCaseTarget = std::variant<Matching, Pair, AgentId, BlockingPairsTarget>;

/// Whether the target's goal is reached in `inst` (matching unstable, pair not a
/// stable pair, agent not a stable agent, enough blocking pairs).
bool target_reached(const Instance& inst, const WorstCaseTarget& target);

/// Same after deleting `victims`, with the target mapped into the reduced instance.
/// A deleted pair endpoint or agent never counts as reaching the goal.
bool target_reached_after_deletion(const Instance& inst, const WorstCaseTarget& target,
                                   std::span<const AgentId> victims);

/// Smallest budget up to max_budget reaching the target, with a witness that has
/// been replayed against the definition. In delete mode, the endpoints of a pair
/// target and an agent target itself are never deleted.
WorstCaseResult exhaustive_worstcase(const Instance& inst, const WorstCaseTarget& target,
                                     PerturbationMode mode, std::size_t max_budget,
                                     std::size_t guard = kDefaultGuard);

/// Adjacent swaps turning `from` into `to` (bubble order, minimal in number).
std::vector<Swap> swaps_between(const Instance& from, const Instance& to);

/// All matchings, or only those of size min(n, m). At most 8 agents per side.
void for_each_matching(const Instance& inst, bool maximum_only,
                       const std::function<void(const Matching&)>& visit,
                       std::size_t guard = kDefaultGuard);

std::vector<Matching> enumerate_all_matchings(const Instance& inst, bool maximum_only,
                                              std::size_t guard = kDefaultGuard);

/// Stable matchings by checking every matching, sorted.
std::vector<Matching> brute_force_stable_matchings(const Instance& inst, std::size_t guard = kDefaultGuard);
std::vector<Pair> brute_force_stable_pairs(const Instance& inst, std::size_t guard = kDefaultGuard);
std::vector<AgentId> brute_force_stable_agents(const Instance& inst, std::size_t guard = kDefaultGuard);

}  // namespace matchrobust::oracle
