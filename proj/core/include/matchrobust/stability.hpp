#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "matchrobust/bigcount.hpp"
#include "matchrobust/model.hpp"

namespace matchrobust {

/// Deferred acceptance. The result is stable and optimal for the proposing side.
Matching gale_shapley(const Instance& inst, Side proposing = Side::Man);

/// A rotation [(m_0, w_0), ..., (m_{r-1}, w_{r-1})]: eliminating it moves every
/// m_i from w_i to w_{i+1 mod r}.
struct Rotation {
  std::vector<Pair> cycle;
  std::size_t index = 0;

  /// Pairs created by eliminating the rotation.
  std::vector<Pair> produced() const;
};

/// Rotations of an instance together with their precedence DAG. Rotations are
/// stored in a topological order (`index` equals the position). Closed subsets
/// of the DAG correspond one-to-one to stable matchings.
struct RotationPoset {
  std::vector<Rotation> rotations;
  /// predecessors[r]: rotations that must be eliminated before r. The closure of
  /// these edges is the precedence relation; it is not transitively reduced.
  std::vector<std::vector<std::size_t>> predecessors;
  Matching men_optimal;
  Matching women_optimal;

  /// The stable matching reached by eliminating `closed_set` from the
  /// men-optimal matching. Rotation ids need not be sorted; the set must be closed.
  Matching apply(std::span<const std::size_t> closed_set) const;

  /// Whether every predecessor of every member is also a member.
  bool is_closed(std::span<const std::size_t> set) const;
};

/// Builds the poset between the men-optimal and women-optimal matchings. Works
/// for any shape: agents unassigned in every stable matching take no part.
RotationPoset build_rotation_poset(const Instance& inst);

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/// Visits every stable matching once, men-optimal first, in a deterministic
/// order. Throws CapExceeded when more than `cap` exist (after visiting `cap`).
void for_each_stable_matching(const Instance& inst, std::size_t cap,
                              const std::function<void(const Matching&)>& visit);

std::vector<Matching> enumerate_stable_matchings(const Instance& inst,
                                                 std::size_t cap = kDefaultEnumerationCap);

/// Pairs contained in at least one stable matching, sorted.
std::vector<Pair> stable_pairs(const Instance& inst);

/// Agents assigned in the stable matchings, men first, then women.
std::vector<AgentId> stable_agents(const Instance& inst);

/// Stable matching minimising the sum of partner ranks over all agents.
/// Ties go to the lexicographically smallest sorted pair list.
Matching summed_rank_min_matching(const Instance& inst);

/// Minimum number of swaps making p blocking for M:
/// max(0, rk_m(w) - rk_m(M(m))) + max(0, rk_w(m) - rk_w(M(w))), with an
/// unassigned endpoint contributing 0. Throws std::invalid_argument if p is in M.
std::size_t blocking_distance(const Instance& inst, const Matching& m, Pair p);

/// sum_{k=1..depth} n^(depth-k) * #{pairs outside M at blocking distance k},
/// with n the number of men. Minimising this is equivalent to minimising the
/// blocking-pair proximity.
BigCount proximity_objective(const Instance& inst, const Matching& m, std::size_t depth);

/// Stable matching minimising proximity_objective, by enumeration.
/// Ties go to the lexicographically smallest sorted pair list.
Matching proximity_robust_matching(const Instance& inst, std::size_t depth = 5,
                                   std::size_t cap = kDefaultEnumerationCap);

}  // namespace matchrobust
