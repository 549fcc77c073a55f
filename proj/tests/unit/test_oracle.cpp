#include "doctest.h"

#include "../support/generators.hpp"

using namespace matchrobust;
using namespace testsupport;

TEST_CASE("profile enumeration") {
  const Instance id2({{0, 1}, {0, 1}}, {{0, 1}, {0, 1}});
  CHECK(oracle::enumerate_profiles_at_distance(id2, 0) == std::vector<Instance>{id2});
  const auto one = oracle::enumerate_profiles_at_distance(id2, 1);
  CHECK(one.size() == 4);
  for (const auto& p : one) CHECK(profile_swap_distance(id2, p) == 1);
  Rng rng(51);
  const auto big = random_square(8, rng);
  CHECK_THROWS_AS(oracle::enumerate_profiles_at_distance(big, 10, 1000), GuardExceeded);
}

TEST_CASE("exact unstable counts") {
  Rng rng(52);
  const auto inst = random_square(2, rng);
  const auto m = gale_shapley(inst);
  CHECK(oracle::exact_unstable_count(inst, m, 0) == 0);
  for (const auto& bad : oracle::enumerate_all_matchings(inst, true)) {
    if (!is_stable(inst, bad)) CHECK(oracle::exact_unstable_count(inst, bad, 0) == 1);
  }
  std::size_t stable_at_one = 0;
  for (const auto& p : oracle::enumerate_profiles_at_distance(inst, 1)) stable_at_one += is_stable(p, m);
  CHECK(oracle::exact_unstable_count(inst, m, 1) == 4 - stable_at_one);
  CHECK(oracle::exact_stability_probability(inst, m, 1, PerturbationMode::Swap) ==
        BigRational(static_cast<long>(stable_at_one), 4));
}

TEST_CASE("matching enumeration") {
  Rng rng(53);
  CHECK(oracle::enumerate_all_matchings(random_square(2, rng), true).size() == 2);
  CHECK(oracle::enumerate_all_matchings(random_square(3, rng), true).size() == 6);
  // Partial matchings of K_{2,2}: empty, 4 singles, 2 perfect.
  CHECK(oracle::enumerate_all_matchings(random_square(2, rng), false).size() == 7);
  CHECK_THROWS_AS(oracle::enumerate_all_matchings(random_square(9, rng), true), GuardExceeded);
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto inst = random_square(n, rng);
    auto fast = enumerate_stable_matchings(inst);
    std::sort(fast.begin(), fast.end(), [](const Matching& a, const Matching& b) { return a.pairs() < b.pairs(); });
    CHECK(fast == oracle::brute_force_stable_matchings(inst));
  }
}

TEST_CASE("exhaustive worst case") {
  const Instance id2({{0, 1}, {0, 1}}, {{0, 1}, {0, 1}});
  const Pair p00{0, 0};
  CHECK_FALSE(oracle::target_reached(id2, p00));
  CHECK_FALSE(oracle::exhaustive_worstcase(id2, p00, PerturbationMode::Swap, 0).budget.has_value());
  const auto r = oracle::exhaustive_worstcase(id2, p00, PerturbationMode::Swap, 4);
  REQUIRE(r.budget);
  CHECK(*r.budget > 0);
  CHECK(oracle::target_reached(apply_swaps(id2, r.swaps), p00));

  Rng rng(54);
  for (int t = 0; t < 40; ++t) {
    const auto inst = random_square(3, rng);
    const auto m = gale_shapley(inst);
    const auto via_matching = oracle::exhaustive_worstcase(inst, m, PerturbationMode::Swap, 6);
    const auto via_count = oracle::exhaustive_worstcase(inst, oracle::BlockingPairsTarget{m, 1, false},
                                                        PerturbationMode::Swap, 6);
    CHECK(via_matching.budget == via_count.budget);
    const auto agent = AgentId::man(0);
    const auto del = oracle::exhaustive_worstcase(inst, agent, PerturbationMode::Delete, 4);
    for (const auto& v : del.deletions) CHECK_FALSE(v == agent);
    if (del.budget) CHECK(oracle::target_reached_after_deletion(inst, agent, del.deletions));
  }
}

TEST_CASE("swaps_between is minimal") {
  Rng rng(55);
  for (int t = 0; t < 30; ++t) {
    const auto a = random_instance(3, 4, rng);
    const auto b = random_instance(3, 4, rng);
    const auto sw = oracle::swaps_between(a, b);
    CHECK(sw.size() == profile_swap_distance(a, b));
    CHECK(apply_swaps(a, sw) == b);
  }
}

TEST_CASE("guards") {
  oracle::OracleGuard g(3);
  g.charge(3);
  CHECK_THROWS_AS(g.charge(), GuardExceeded);
  CHECK_THROWS_AS(g.require(BigCount(4), "test"), GuardExceeded);
}

TEST_CASE("swap distance is a metric") {
  Rng rng(56);
  for (int t = 0; t < 100; ++t) {
    const auto n = 1 + uniform_index(rng, 4);
    const auto a = random_square(n, rng), b = random_square(n, rng), c = random_square(n, rng);
    CHECK(profile_swap_distance(a, a) == 0);
    CHECK(profile_swap_distance(a, b) == profile_swap_distance(b, a));
    CHECK(profile_swap_distance(a, c) <= profile_swap_distance(a, b) + profile_swap_distance(b, c));
  }
}
