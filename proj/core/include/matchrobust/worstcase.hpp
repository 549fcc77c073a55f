#pragma once

#include <optional>
#include <vector>

#include "matchrobust/model.hpp"

namespace matchrobust {

/// Minimum perturbation budget that destroys stability, with a witness.
/// `budget` is empty when no budget suffices.
struct WorstCaseResult {
  std::optional<std::size_t> budget;
  std::vector<Swap> swaps;          // applied in order (swap mode)
  std::vector<AgentId> deletions;   // removed agents (delete mode)
  std::optional<Pair> blocking;     // a pair that blocks after the perturbation, original indices
};

/// Swap cost c_a(b, M(a)): swaps in a's list needed before a prefers b to its partner.
std::size_t swap_cost(const Instance& inst, const Matching& m, AgentId a, AgentId b);

/// Fewest adjacent swaps after which M admits a blocking pair. 0 if M is unstable.
/// Ties between equally cheap pairs go to the smallest pair.
WorstCaseResult matching_swap_robustness(const Instance& inst, const Matching& m);

/// Fewest agent deletions after which M restricted to the survivors is unstable.
WorstCaseResult matching_delete_robustness(const Instance& inst, const Matching& m);

/// Whether the swap robustness of M is at most the number of men.
bool swap_upper_bound_check(const Instance& inst, const Matching& m);

}  // namespace matchrobust
