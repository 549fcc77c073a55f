#include "doctest.h"

#include <set>

#include "../support/generators.hpp"

using namespace matchrobust;
using namespace testsupport;

namespace {

std::vector<Matching> sorted(std::vector<Matching> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("deferred acceptance on small instances") {
  const Instance inst({{0, 1}, {0, 1}}, {{1, 0}, {0, 1}});
  const auto men = gale_shapley(inst, Side::Man);
  CHECK(men == Matching(2, 2, {{0, 1}, {1, 0}}));
  CHECK(is_stable(inst, men));
  const Instance empty({}, {});
  CHECK(gale_shapley(empty).size() == 0);
}

TEST_CASE("deferred acceptance is stable and side-optimal") {
  for_seeds(21, 300, [](Rng& rng, std::uint64_t seed) {
    const auto n = uniform_index(rng, 6);
    const auto m = uniform_index(rng, 6);
    const auto inst = random_instance(n, m, rng);
    const auto men = gale_shapley(inst, Side::Man);
    const auto women = gale_shapley(inst, Side::Woman);
    INFO("seed " << seed);
    REQUIRE(is_stable(inst, men));
    REQUIRE(is_stable(inst, women));
    for (const auto& s : oracle::brute_force_stable_matchings(inst)) {
      for (std::size_t u = 0; u < n; ++u) {
        const auto a = men.partner_of_man(u), b = s.partner_of_man(u), c = women.partner_of_man(u);
        if (!a) continue;
        CHECK(inst.man_rank(u, *a) <= inst.man_rank(u, *b));
        CHECK(inst.man_rank(u, *c) >= inst.man_rank(u, *b));
      }
    }
  });
}

TEST_CASE("enumeration matches brute force, square and rectangular") {
  for_seeds(22, 400, [](Rng& rng, std::uint64_t seed) {
    const auto n = 1 + uniform_index(rng, 5);
    const auto m = rng() % 3 == 0 ? 1 + uniform_index(rng, 5) : n;
    const auto inst = random_instance(n, m, rng);
    INFO("seed " << seed);
    const auto fast = enumerate_stable_matchings(inst);
    const auto slow = oracle::brute_force_stable_matchings(inst);
    REQUIRE(fast.size() == slow.size());
    CHECK(sorted(fast) == slow);
    CHECK(fast.front() == gale_shapley(inst, Side::Man));
    CHECK(stable_pairs(inst) == oracle::brute_force_stable_pairs(inst));
    CHECK(stable_agents(inst) == oracle::brute_force_stable_agents(inst));
  });
}

TEST_CASE("rotations on the full instance avoid matchings of the stable-agent sub-instance") {
  // Restricting to stable agents would admit {(0,0),(1,1)}, which man 2 and woman 0 block.
  const Instance inst({{0, 1}, {1, 0}, {0, 1}}, {{1, 2, 0}, {0, 1, 2}});
  const auto all = enumerate_stable_matchings(inst);
  CHECK(all.size() == 1);
  CHECK(all.front() == Matching(3, 2, {{0, 1}, {1, 0}}));
}

TEST_CASE("rural hospitals") {
  for_seeds(23, 200, [](Rng& rng, std::uint64_t) {
    const auto inst = random_instance(1 + uniform_index(rng, 6), 1 + uniform_index(rng, 6), rng);
    std::set<std::vector<AgentId>> seen;
    for_each_stable_matching(inst, kDefaultEnumerationCap, [&](const Matching& mt) {
      std::vector<AgentId> assigned;
      for (const auto& p : mt.pairs()) {
        assigned.push_back(AgentId::man(p.man));
        assigned.push_back(AgentId::woman(p.woman));
      }
      std::sort(assigned.begin(), assigned.end());
      seen.insert(assigned);
    });
    CHECK(seen.size() == 1);
  });
}

TEST_CASE("poset closed sets are exactly the stable matchings") {
  for_seeds(24, 150, [](Rng& rng, std::uint64_t seed) {
    const auto n = 1 + uniform_index(rng, 5);
    const auto inst = random_square(n, rng);
    const auto poset = build_rotation_poset(inst);
    INFO("seed " << seed);
    for (std::size_t r = 0; r < poset.rotations.size(); ++r) {
      CHECK(poset.rotations[r].index == r);
      for (auto p : poset.predecessors[r]) CHECK(p < r);
    }
    const auto R = poset.rotations.size();
    REQUIRE(R <= 16);
    std::vector<Matching> from_closed;
    for (std::uint32_t mask = 0; mask < (1u << R); ++mask) {
      std::vector<std::size_t> set;
      for (std::size_t r = 0; r < R; ++r) {
        if (mask >> r & 1u) set.push_back(r);
      }
      if (!poset.is_closed(set)) continue;
      const auto mt = poset.apply(set);
      CHECK(is_stable(inst, mt));
      from_closed.push_back(mt);
    }
    CHECK(sorted(from_closed) == oracle::brute_force_stable_matchings(inst));
    std::vector<std::size_t> everything(R);
    std::iota(everything.begin(), everything.end(), 0);
    CHECK(poset.apply(everything) == poset.women_optimal);
  });
}

TEST_CASE("enumeration cap") {
  const auto inst = generate({CultureKind::MutualDisagreement, 0, 6, 0});
  const auto all = enumerate_stable_matchings(inst);
  REQUIRE(all.size() > 2);
  CHECK_THROWS_AS(enumerate_stable_matchings(inst, 2), CapExceeded);
  CHECK(enumerate_stable_matchings(inst, all.size()).size() == all.size());
}

TEST_CASE("summed-rank minimum matches enumeration with lexicographic ties") {
  for_seeds(25, 300, [](Rng& rng, std::uint64_t seed) {
    const auto n = 1 + uniform_index(rng, 6);
    const auto m = rng() % 4 == 0 ? 1 + uniform_index(rng, 6) : n;
    const auto inst = random_instance(n, m, rng);
    INFO("seed " << seed);
    std::optional<Matching> best;
    for (const auto& mt : enumerate_stable_matchings(inst)) {
      if (!best || rank_sum(inst, mt) < rank_sum(inst, *best) ||
          (rank_sum(inst, mt) == rank_sum(inst, *best) && mt < *best)) {
        best = mt;
      }
    }
    CHECK(summed_rank_min_matching(inst) == *best);
  });
}

TEST_CASE("summed-rank minimum on cyclic instances with many ties") {
  for (std::size_t n = 1; n <= 7; ++n) {
    const auto inst = generate({CultureKind::MutualDisagreement, 0, n, 0});
    const auto all = enumerate_stable_matchings(inst);
    auto best = all.front();
    for (const auto& mt : all) {
      if (rank_sum(inst, mt) < rank_sum(inst, best) || (rank_sum(inst, mt) == rank_sum(inst, best) && mt < best)) {
        best = mt;
      }
    }
    CHECK(summed_rank_min_matching(inst) == best);
  }
}

TEST_CASE("blocking distance") {
  const Instance id({{0, 1}, {0, 1}}, {{0, 1}, {0, 1}});
  const Matching m(2, 2, {{0, 0}, {1, 1}});
  CHECK(blocking_distance(id, m, {0, 1}) == 1);
  CHECK(blocking_distance(id, m, {1, 0}) == 1);
  CHECK_THROWS_AS(blocking_distance(id, m, {0, 0}), std::invalid_argument);
  const auto rob = generate({CultureKind::Robust, 0, 50, 0});
  const auto diag = identity_matching(50);
  CHECK(blocking_distance(rob, diag, {3, 17}) == 50);
  CHECK(proximity_objective(rob, diag, 5) == 0);
  CHECK(proximity_objective(id, m, 5) == 32);  // 2 * 2^4
}

TEST_CASE("proximity-robust matching matches enumeration") {
  for_seeds(26, 200, [](Rng& rng, std::uint64_t seed) {
    const auto n = 2 + uniform_index(rng, 5);
    const auto inst = random_square(n, rng);
    INFO("seed " << seed);
    std::optional<Matching> best;
    BigCount best_value;
    for (const auto& mt : oracle::brute_force_stable_matchings(inst)) {
      const auto v = proximity_objective(inst, mt, 5);
      if (!best || v < best_value) {
        best = mt;
        best_value = v;
      }
    }
    CHECK(proximity_robust_matching(inst) == *best);
  });
  const auto rob = generate({CultureKind::Robust, 0, 50, 0});
  CHECK(proximity_robust_matching(rob) == identity_matching(50));
}
