#include "matchrobust/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "matchrobust/errors.hpp"
#include "matchrobust/stability.hpp"

namespace matchrobust::oracle {

void OracleGuard::charge(std::size_t units) {
  used_ += units;
  if (used_ > limit_) throw GuardExceeded("exhaustive search", limit_);
}

void OracleGuard::require(const BigCount& planned, const char* what) const {
  if (planned > limit_) throw GuardExceeded(what, limit_);
}

namespace {

// Permutations of [0, len) grouped by inversion count.
std::vector<std::vector<std::vector<std::size_t>>> permutations_by_count(std::size_t len) {
  if (len > kMaxListLength) throw GuardExceeded("list length", kMaxListLength);
  std::vector<std::vector<std::vector<std::size_t>>> out(max_inversions(len) + 1);
  std::vector<std::size_t> p(len);
  std::iota(p.begin(), p.end(), 0);
  do {
    std::size_t inv = 0;
    for (std::size_t a = 0; a < len; ++a) {
      for (std::size_t b = a + 1; b < len; ++b) inv += p[a] > p[b];
    }
    out[inv].push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<AgentId> deletable_agents(const Instance& inst, const std::vector<AgentId>& fixed) {
  std::vector<AgentId> pool;
  for (const Side side : {Side::Man, Side::Woman}) {
    for (std::size_t i = 0; i < inst.size(side); ++i) {
      const AgentId a{side, i};
      if (std::find(fixed.begin(), fixed.end(), a) == fixed.end()) pool.push_back(a);
    }
  }
  return pool;
}

std::vector<AgentId> fixed_agents(const WorstCaseTarget& target) {
  if (const auto* p = std::get_if<Pair>(&target)) return {AgentId::man(p->man), AgentId::woman(p->woman)};
  if (const auto* a = std::get_if<AgentId>(&target)) return {*a};
  return {};
}

bool enough_blocking(std::size_t found, const BlockingPairsTarget& t) {
  return t.exactly ? found == t.count : found >= t.count;
}

}  // namespace

void for_each_profile_at_distance(const Instance& inst, std::size_t l,
                                  const std::function<void(const Instance&)>& visit, std::size_t guard) {
  OracleGuard g(guard);
  g.require(profiles_at_swap_distance(inst, l), "profile enumeration");
  const std::size_t n = inst.num_men(), m = inst.num_women();
  const auto men_perms = permutations_by_count(m);
  const auto women_perms = permutations_by_count(n);
  auto men = inst.men_prefs();
  auto women = inst.women_prefs();
  const std::size_t lists = n + m;

  // Remaining budget that the lists after index i can still absorb.
  std::vector<std::size_t> capacity(lists + 1, 0);
  for (std::size_t i = lists; i-- > 0;) {
    capacity[i] = capacity[i + 1] + (i < n ? max_inversions(m) : max_inversions(n));
  }

  auto rec = [&](auto&& self, std::size_t i, std::size_t budget) -> void {
    if (i == lists) {
      if (budget != 0) return;
      g.charge();
      visit(Instance(men, women));
      return;
    }
    if (budget > capacity[i]) return;
    const bool is_man = i < n;
    const auto& perms = is_man ? men_perms : women_perms;
    const auto center = is_man ? inst.man_list(i) : inst.woman_list(i - n);
    auto& slot = is_man ? men[i] : women[i - n];
    for (std::size_t k = 0; k < perms.size() && k <= budget; ++k) {
      for (const auto& p : perms[k]) {
        for (std::size_t q = 0; q < p.size(); ++q) slot[q] = center[p[q]];
        self(self, i + 1, budget - k);
      }
    }
    slot.assign(center.begin(), center.end());
  };
  rec(rec, 0, l);
}

std::vector<Instance> enumerate_profiles_at_distance(const Instance& inst, std::size_t l, std::size_t guard) {
  std::vector<Instance> out;
  for_each_profile_at_distance(inst, l, [&](const Instance& p) { out.push_back(p); }, guard);
  return out;
}

void for_each_subset(std::span<const AgentId> pool, std::size_t l,
                     const std::function<void(std::span<const AgentId>)>& visit, std::size_t guard) {
  if (l > pool.size()) return;
  OracleGuard g(guard);
  g.require(deletion_sets_count(pool.size(), l), "subset enumeration");
  std::vector<std::size_t> idx(l);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<AgentId> chosen(l);
  for (;;) {
    for (std::size_t i = 0; i < l; ++i) chosen[i] = pool[idx[i]];
    g.charge();
    visit(chosen);
    // Next combination.
    std::size_t i = l;
    while (i > 0 && idx[i - 1] == pool.size() - l + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < l; ++j) idx[j] = idx[j - 1] + 1;
  }
}

BigCount exact_unstable_count(const Instance& inst, const Matching& m, std::size_t l, std::size_t guard) {
  BigCount count = 0;
  for_each_profile_at_distance(inst, l, [&](const Instance& p) { count += !is_stable(p, m); }, guard);
  return count;
}

BigRational exact_stability_probability(const Instance& inst, const StabilityObject& object,
                                        std::size_t l, PerturbationMode mode, std::size_t guard) {
  BigCount stable = 0, total = 0;
  if (mode == PerturbationMode::Swap) {
    for_each_profile_at_distance(
        inst, l,
        [&](const Instance& p) {
          ++total;
          stable += object_is_stable(p, object);
        },
        guard);
  } else {
    const auto pool = deletable_agents(inst, protected_agents(object));
    for_each_subset(
        pool, l,
        [&](std::span<const AgentId> victims) {
          ++total;
          stable += object_survives_deletion(inst, object, victims);
        },
        guard);
  }
  if (total == 0) throw std::invalid_argument("no perturbation at this distance");
  return BigRational(stable, total);
}

bool target_reached(const Instance& inst, const WorstCaseTarget& target) {
  if (const auto* m = std::get_if<Matching>(&target)) return !is_stable(inst, *m);
  if (const auto* p = std::get_if<Pair>(&target)) return !object_is_stable(inst, *p);
  if (const auto* a = std::get_if<AgentId>(&target)) return !object_is_stable(inst, *a);
  const auto& t = std::get<BlockingPairsTarget>(target);
  return enough_blocking(count_blocking_pairs(inst, t.matching), t);
}

bool target_reached_after_deletion(const Instance& inst, const WorstCaseTarget& target,
                                   std::span<const AgentId> victims) {
  const auto red = delete_agents(inst, victims);
  if (const auto* m = std::get_if<Matching>(&target)) {
    return !is_stable(red.instance, restrict_matching(*m, red));
  }
  if (const auto* p = std::get_if<Pair>(&target)) {
    const auto q = red.map(*p);
    return q && !object_is_stable(red.instance, *q);
  }
  if (const auto* a = std::get_if<AgentId>(&target)) {
    const auto b = red.map(*a);
    return b && !object_is_stable(red.instance, *b);
  }
  const auto& t = std::get<BlockingPairsTarget>(target);
  return enough_blocking(count_blocking_pairs(red.instance, restrict_matching(t.matching, red)), t);
}

std::vector<Swap> swaps_between(const Instance& from, const Instance& to) {
  if (from.num_men() != to.num_men() || from.num_women() != to.num_women()) {
    throw std::invalid_argument("swaps_between: shape mismatch");
  }
  std::vector<Swap> out;
  auto one = [&](AgentId a, std::span<const std::size_t> src, std::span<const std::size_t> dst) {
    std::vector<std::size_t> cur(src.begin(), src.end());
    for (std::size_t p = 0; p < cur.size(); ++p) {
      auto q = static_cast<std::size_t>(std::find(cur.begin() + static_cast<std::ptrdiff_t>(p), cur.end(), dst[p]) -
                                        cur.begin());
      for (; q > p; --q) {
        std::swap(cur[q - 1], cur[q]);
        out.push_back({a, q - 1});
      }
    }
  };
  for (std::size_t u = 0; u < from.num_men(); ++u) one(AgentId::man(u), from.man_list(u), to.man_list(u));
  for (std::size_t w = 0; w < from.num_women(); ++w) {
    one(AgentId::woman(w), from.woman_list(w), to.woman_list(w));
  }
  return out;
}

WorstCaseResult exhaustive_worstcase(const Instance& inst, const WorstCaseTarget& target,
                                     PerturbationMode mode, std::size_t max_budget, std::size_t guard) {
  WorstCaseResult result;
  if (mode == PerturbationMode::Swap) {
    for (std::size_t l = 0; l <= max_budget && !result.budget; ++l) {
      std::optional<Instance> found;
      for_each_profile_at_distance(
          inst, l,
          [&](const Instance& p) {
            if (!found && target_reached(p, target)) found = p;
          },
          guard);
      if (!found) continue;
      result.budget = l;
      result.swaps = swaps_between(inst, *found);
      // Replay the witness.
      const auto replayed = apply_swaps(inst, result.swaps);
      if (result.swaps.size() != l || !(replayed == *found) || !target_reached(replayed, target)) {
        throw std::logic_error("exhaustive_worstcase: witness failed replay");
      }
      if (const auto* m = std::get_if<Matching>(&target)) {
        const auto bp = blocking_pairs(replayed, *m);
        result.blocking = bp.front();
      }
    }
    return result;
  }

  const auto pool = deletable_agents(inst, fixed_agents(target));
  for (std::size_t l = 0; l <= max_budget && l <= pool.size() && !result.budget; ++l) {
    std::optional<std::vector<AgentId>> found;
    for_each_subset(
        pool, l,
        [&](std::span<const AgentId> victims) {
          if (found) return;
          if (target_reached_after_deletion(inst, target, victims)) found.emplace(victims.begin(), victims.end());
        },
        guard);
    if (!found) continue;
    if (!target_reached_after_deletion(inst, target, *found)) {
      throw std::logic_error("exhaustive_worstcase: witness failed replay");
    }
    result.budget = l;
    result.deletions = *found;
  }
  return result;
}

void for_each_matching(const Instance& inst, bool maximum_only,
                       const std::function<void(const Matching&)>& visit, std::size_t guard) {
  const std::size_t n = inst.num_men(), m = inst.num_women();
  if (n > kMaxListLength || m > kMaxListLength) throw GuardExceeded("matching enumeration size", kMaxListLength);
  OracleGuard g(guard);
  const std::size_t target = std::min(n, m);
  std::vector<Pair> pairs;
  std::vector<bool> used(m, false);
  auto rec = [&](auto&& self, std::size_t u) -> void {
    if (u == n) {
      if (maximum_only && pairs.size() != target) return;
      g.charge();
      visit(Matching(n, m, pairs));
      return;
    }
    // Prune: not enough men left to reach the maximum size.
    if (maximum_only && pairs.size() + (n - u) < target) return;
    self(self, u + 1);
    for (std::size_t w = 0; w < m; ++w) {
      if (used[w]) continue;
      used[w] = true;
      pairs.push_back({u, w});
      self(self, u + 1);
      pairs.pop_back();
      used[w] = false;
    }
  };
  rec(rec, 0);
}

std::vector<Matching> enumerate_all_matchings(const Instance& inst, bool maximum_only, std::size_t guard) {
  std::vector<Matching> out;
  for_each_matching(inst, maximum_only, [&](const Matching& mt) { out.push_back(mt); }, guard);
  return out;
}

std::vector<Matching> brute_force_stable_matchings(const Instance& inst, std::size_t guard) {
  std::vector<Matching> out;
  for_each_matching(
      inst, false,
      [&](const Matching& mt) {
        if (is_stable(inst, mt)) out.push_back(mt);
      },
      guard);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Pair> brute_force_stable_pairs(const Instance& inst, std::size_t guard) {
  std::vector<Pair> out;
  for (const auto& mt : brute_force_stable_matchings(inst, guard)) {
    for (const auto& p : mt.pairs()) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<AgentId> brute_force_stable_agents(const Instance& inst, std::size_t guard) {
  std::vector<AgentId> out;
  for (const auto& mt : brute_force_stable_matchings(inst, guard)) {
    for (const auto& p : mt.pairs()) {
      out.push_back(AgentId::man(p.man));
      out.push_back(AgentId::woman(p.woman));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace matchrobust::oracle
