#include "doctest.h"

#include <map>

#include "../support/generators.hpp"

using namespace matchrobust;
using namespace testsupport;

namespace {

std::vector<std::vector<std::size_t>> all_perms(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::size_t position(const std::vector<std::size_t>& perm, std::size_t item) {
  return static_cast<std::size_t>(std::find(perm.begin(), perm.end(), item) - perm.begin());
}

}  // namespace

TEST_CASE("inversion table") {
  CHECK(permutations_by_inversions(3, 0) == 1);
  CHECK(permutations_by_inversions(3, 1) == 2);
  CHECK(permutations_by_inversions(3, 3) == 1);
  CHECK(permutations_by_inversions(3, 4) == 0);
  CHECK(permutations_by_inversions(3, -1) == 0);
  const InversionTable t(9);
  BigCount factorial = 1;
  for (std::size_t n = 1; n <= 9; ++n) {
    factorial *= n;
    BigCount sum = 0;
    for (std::size_t k = 0; k <= max_inversions(n); ++k) {
      sum += t(n, k);
      CHECK(t(n, k) == t(n, max_inversions(n) - k));
    }
    CHECK(sum == factorial);
    CHECK(t(n, 0) == 1);
  }
  // Grows past 64 bits well before n = 50.
  CHECK(permutations_by_inversions(50, 600) > BigCount(std::numeric_limits<std::uint64_t>::max()));
}

TEST_CASE("constrained counts match enumeration for n <= 6") {
  CHECK(constrained_permutations(2, 0, 1, 2) == 1);
  CHECK(constrained_permutations(3, 1, 1, 2) == 1);
  CHECK(constrained_permutations(3, 1, 2, 1) == 1);
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto perms = all_perms(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        std::vector<BigCount> expected(max_inversions(n) + 1);
        for (const auto& p : perms) {
          if (position(p, i) < position(p, j)) expected[inversions(p)] += 1;
        }
        const ConstrainedPermutations c(n, i, j);
        CHECK(c.counts() == expected);
        for (std::size_t k = 0; k <= max_inversions(n); ++k) {
          CHECK(constrained_permutations(n, static_cast<std::int64_t>(k), i + 1, j + 1) == expected[k]);
        }
      }
    }
  }
}

TEST_CASE("constrained sampler output satisfies its constraint") {
  Rng rng(5);
  for (std::size_t n = 2; n <= 9; ++n) {
    for (std::size_t trial = 0; trial < 30; ++trial) {
      const auto i = uniform_index(rng, n);
      auto j = uniform_index(rng, n - 1);
      if (j >= i) ++j;
      const ConstrainedPermutations c(n, i, j);
      const auto k = uniform_index(rng, max_inversions(n) + 1);
      if (c.count(k) == 0) continue;
      const auto p = c.sample(k, rng);
      CHECK(inversions(p) == k);
      CHECK(position(p, i) < position(p, j));
      auto sorted = p;
      std::sort(sorted.begin(), sorted.end());
      CHECK(sorted == [&] {
        std::vector<std::size_t> id(n);
        std::iota(id.begin(), id.end(), 0);
        return id;
      }());
    }
  }
}

TEST_CASE("constrained sampler is uniform") {
  Rng rng(6);
  const std::size_t n = 5;
  for (const auto& [i, j, k] : std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>{
           {1, 3, 3}, {3, 1, 4}, {0, 4, 5}, {4, 0, 6}, {2, 3, 2}}) {
    const ConstrainedPermutations c(n, i, j);
    std::map<std::vector<std::size_t>, std::size_t> freq;
    const std::size_t draws = 20000;
    for (std::size_t d = 0; d < draws; ++d) ++freq[c.sample(k, rng)];
    CHECK(BigCount(freq.size()) == c.count(k));
    std::vector<std::size_t> counts;
    for (const auto& [perm, count] : freq) counts.push_back(count);
    if (counts.size() > 1) CHECK(chi_squared_uniform(counts) < chi_squared_critical(counts.size() - 1, 1e-3));
  }
}

TEST_CASE("unconstrained permutation sampler hits every permutation uniformly") {
  Rng rng(7);
  const InversionTable t(5);
  std::map<std::vector<std::size_t>, std::size_t> freq;
  for (std::size_t d = 0; d < 30000; ++d) {
    const auto p = sample_permutation(t, 5, 4, rng);
    CHECK(inversions(p) == 4);
    ++freq[p];
  }
  CHECK(BigCount(freq.size()) == t(5, 4));
  std::vector<std::size_t> counts;
  for (const auto& [perm, count] : freq) counts.push_back(count);
  CHECK(chi_squared_uniform(counts) < chi_squared_critical(counts.size() - 1, 1e-3));
}

TEST_CASE("profile counts") {
  const Instance one({{0}}, {{0}});
  CHECK(profiles_at_swap_distance(one, 0) == 1);
  CHECK(profiles_at_swap_distance(one, 1) == 0);
  Rng rng(8);
  const auto two = random_square(2, rng);
  CHECK(profiles_at_swap_distance(two, 1) == 4);
  CHECK(deletion_sets_count(4, 2) == 6);
  CHECK(deletion_sets_count(7, 0) == 1);
  CHECK(deletion_sets_count(3, 3) == 1);
  CHECK(deletion_sets_count(3, 4) == 0);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t m = 1; m <= 3; ++m) {
      const auto inst = random_instance(n, m, rng);
      for (std::size_t l = 0; l <= 4; ++l) {
        CHECK(profiles_at_swap_distance(inst, l) == oracle::enumerate_profiles_at_distance(inst, l).size());
      }
    }
  }
}

TEST_CASE("blocking profile counts match enumeration") {
  for_seeds(41, 12, [](Rng& rng, std::uint64_t seed) {
    const auto n = 1 + uniform_index(rng, 3);
    const auto inst = random_square(n, rng);
    const auto m = rng() % 2 ? gale_shapley(inst) : random_perfect_matching(n, rng);
    INFO("seed " << seed);
    for (std::size_t l = 0; l <= 3; ++l) {
      const auto profiles = oracle::enumerate_profiles_at_distance(inst, l);
      BigCount upper = 0;
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t w = 0; w < n; ++w) {
          if (m.contains({u, w})) {
            CHECK_THROWS_AS(blocking_profile_count(inst, m, {u, w}, l), std::invalid_argument);
            continue;
          }
          std::size_t expected = 0;
          for (const auto& p : profiles) expected += is_blocking(p, m, {u, w});
          CHECK(blocking_profile_count(inst, m, {u, w}, l) == expected);
          upper += expected;
        }
      }
      const auto exact = oracle::exact_unstable_count(inst, m, l);
      CHECK(unstable_profiles_upper(inst, m, l) == upper);
      CHECK(exact <= upper);
      if (n >= 2) CHECK(upper <= exact * (n * n - n));
    }
  });
}

TEST_CASE("blocking counts with unassigned endpoints") {
  Rng rng(9);
  const auto inst = random_instance(3, 2, rng);
  const Matching m(3, 2, {{0, 1}});
  for (std::size_t l = 0; l <= 3; ++l) {
    const auto profiles = oracle::enumerate_profiles_at_distance(inst, l);
    for (std::size_t u = 0; u < 3; ++u) {
      for (std::size_t w = 0; w < 2; ++w) {
        if (m.contains({u, w})) continue;
        std::size_t expected = 0;
        for (const auto& p : profiles) expected += is_blocking(p, m, {u, w});
        CHECK(blocking_profile_count(inst, m, {u, w}, l) == expected);
      }
    }
  }
}

TEST_CASE("profile samplers are uniform on two by two instances") {
  const Instance inst({{0, 1}, {1, 0}}, {{1, 0}, {0, 1}});
  const Matching m(2, 2, {{0, 0}, {1, 1}});
  const std::size_t draws = 100000;
  for (std::size_t l = 1; l <= 2; ++l) {
    Rng rng(100 + l);
    const ProfileCounter counter(2, 2, l);
    std::map<std::string, std::size_t> freq;
    for (std::size_t d = 0; d < draws; ++d) {
      const auto p = sample_profile_at_distance(inst, l, counter, rng);
      ++freq[profile_key(p)];
    }
    CHECK(BigCount(freq.size()) == counter.count(l));
    std::vector<std::size_t> counts;
    for (const auto& [k, c] : freq) counts.push_back(c);
    CHECK(chi_squared_uniform(counts) < chi_squared_critical(counts.size() - 1, 1e-3));

    const BlockingProfiles bp(inst, m, {0, 1}, l, counter);
    std::map<std::string, std::size_t> bfreq;
    for (std::size_t d = 0; d < draws; ++d) {
      const auto p = bp.sample(rng);
      CHECK(is_blocking(p, m, {0, 1}));
      ++bfreq[profile_key(p)];
    }
    CHECK(BigCount(bfreq.size()) == bp.count());
    counts.clear();
    for (const auto& [k, c] : bfreq) counts.push_back(c);
    if (counts.size() > 1) CHECK(chi_squared_uniform(counts) < chi_squared_critical(counts.size() - 1, 1e-3));
  }
}

TEST_CASE("samplers hold their postconditions on larger instances") {
  for_seeds(42, 40, [](Rng& rng, std::uint64_t) {
    const auto n = 2 + uniform_index(rng, 7);
    const auto inst = random_square(n, rng);
    const auto m = gale_shapley(inst);
    const auto l = uniform_index(rng, 12);
    if (profiles_at_swap_distance(inst, l) == 0) {
      CHECK_THROWS_AS(sample_profile_at_distance(inst, l, rng), std::invalid_argument);
      return;
    }
    const auto p = sample_profile_at_distance(inst, l, rng);
    CHECK(profile_swap_distance(inst, p) == l);
    Pair pair{uniform_index(rng, n), uniform_index(rng, n)};
    if (m.contains(pair)) return;
    if (blocking_profile_count(inst, m, pair, l) == 0) return;
    const auto q = sample_blocking_profile(inst, m, pair, l, rng);
    CHECK(profile_swap_distance(inst, q) == l);
    CHECK(is_blocking(q, m, pair));
  });
  const Instance inst({{0, 1}, {0, 1}}, {{0, 1}, {0, 1}});
  Rng rng(1);
  CHECK(sample_profile_at_distance(inst, 0, rng) == inst);
  CHECK(sample_blocking_profile(inst, Matching(2, 2, {{0, 1}, {1, 0}}), {0, 0}, 0, rng) == inst);
  CHECK_THROWS_AS(sample_profile_at_distance(inst, 5, rng), std::invalid_argument);
}
