#include "matchrobust/worstcase.hpp"

#include <stdexcept>

#include "matchrobust/stability.hpp"

namespace matchrobust {

std::size_t swap_cost(const Instance& inst, const Matching& m, AgentId a, AgentId b) {
  const auto partner = m.partner(a);
  if (!partner) return 0;
  const auto target = rank_of(inst, a, b);
  const auto current = rank_of(inst, a, *partner);
  return target > current ? target - current : 0;
}

namespace {

// Moves b up in a's list until it sits directly above a's partner.
void push_swaps(const Instance& inst, const Matching& m, AgentId a, AgentId b,
                std::vector<Swap>& out) {
  const auto partner = m.partner(a);
  if (!partner) return;
  const auto from = rank_of(inst, a, b) - 1;
  const auto to = rank_of(inst, a, *partner) - 1;
  for (auto p = from; p > to; --p) out.push_back({a, p - 1});
}

}  // namespace

WorstCaseResult matching_swap_robustness(const Instance& inst, const Matching& m) {
  WorstCaseResult result;
  std::optional<std::size_t> best;
  Pair best_pair{};
  for (std::size_t u = 0; u < inst.num_men(); ++u) {
    for (std::size_t w = 0; w < inst.num_women(); ++w) {
      if (m.contains({u, w})) continue;
      const auto c = swap_cost(inst, m, AgentId::man(u), AgentId::woman(w)) +
                     swap_cost(inst, m, AgentId::woman(w), AgentId::man(u));
      if (!best || c < *best) {
        best = c;
        best_pair = {u, w};
      }
    }
  }
  if (!best) return result;
  result.budget = best;
  result.blocking = best_pair;
  push_swaps(inst, m, AgentId::man(best_pair.man), AgentId::woman(best_pair.woman), result.swaps);
  push_swaps(inst, m, AgentId::woman(best_pair.woman), AgentId::man(best_pair.man), result.swaps);
  return result;
}

WorstCaseResult matching_delete_robustness(const Instance& inst, const Matching& m) {
  WorstCaseResult result;
  const auto blocking = blocking_pairs(inst, m);
  if (!blocking.empty()) {
    result.budget = 0;
    result.blocking = blocking.front();
    return result;
  }

  // Deleting a frees M(a); any a' on a's side who is single or prefers M(a)
  // to its own partner then blocks with M(a).
  for (const Side side : {Side::Man, Side::Woman}) {
    for (std::size_t a = 0; a < inst.size(side); ++a) {
      const auto freed = m.partner({side, a});
      if (!freed) continue;
      for (std::size_t other = 0; other < inst.size(side); ++other) {
        if (other == a) continue;
        const AgentId rival{side, other};
        const auto own = m.partner(rival);
        if (own && rank_of(inst, rival, *freed) > rank_of(inst, rival, *own)) continue;
        result.budget = 1;
        result.deletions = {AgentId{side, a}};
        result.blocking = side == Side::Man ? Pair{other, freed->index} : Pair{freed->index, other};
        return result;
      }
    }
  }

  const auto pairs = m.pairs();
  if (pairs.size() >= 2) {
    // Delete one man and another pair's woman; their partners are left single.
    result.budget = 2;
    result.deletions = {AgentId::man(pairs[0].man), AgentId::woman(pairs[1].woman)};
    result.blocking = Pair{pairs[1].man, pairs[0].woman};
  }
  return result;
}

bool swap_upper_bound_check(const Instance& inst, const Matching& m) {
  const auto r = matching_swap_robustness(inst, m);
  return r.budget && *r.budget <= inst.num_men();
}

}  // namespace matchrobust
