#include "doctest.h"

#include <cmath>

#include "../support/generators.hpp"

using namespace matchrobust;
using namespace testsupport;

TEST_CASE("sample sizes") {
  CHECK(hoeffding_sample_size(0.05, 0.05) == 738);
  CHECK(fpras_sample_size(3, 0.2) == static_cast<std::size_t>(std::ceil(27 * std::log(8.0) / 0.04)));
  CHECK_THROWS_AS(hoeffding_sample_size(0, 0.05), std::invalid_argument);
}

TEST_CASE("Monte Carlo estimate at distance zero") {
  const auto inst = generate({CultureKind::Identity, 0, 4, 0});
  const auto m = gale_shapley(inst);
  const auto est = mc_stability_probability(inst, m, 0, {});
  CHECK(est.samples == 738);
  CHECK(est.probability == 1.0);
  CHECK(mc_stability_probability(inst, Matching(4, 4, {{0, 1}, {1, 0}, {2, 2}, {3, 3}}), 0, {}).probability == 0.0);
  CHECK_THROWS_AS(mc_stability_probability(inst, m, 1000, {}), std::invalid_argument);
}

TEST_CASE("Monte Carlo estimate tracks the exact probability") {
  Rng rng(11);
  const auto inst = random_square(2, rng);
  const auto m = gale_shapley(inst);
  const double exact = oracle::exact_stability_probability(inst, m, 1, PerturbationMode::Swap).convert_to<double>();
  std::size_t close = 0;
  const std::size_t runs = 200;
  for (std::size_t r = 0; r < runs; ++r) {
    EstimatorConfig cfg;
    cfg.seed = 1000 + r;
    close += std::abs(mc_stability_probability(inst, m, 1, cfg).probability - exact) <= 0.05;
  }
  CHECK(close >= 190);
}

TEST_CASE("Monte Carlo estimate is thread-count independent") {
  Rng rng(12);
  const auto inst = random_square(5, rng);
  const auto m = gale_shapley(inst);
  EstimatorConfig one{0.1, 0.1, 3, 1}, four{0.1, 0.1, 3, 4};
  const auto a = mc_stability_probability(inst, m, 3, one);
  const auto b = mc_stability_probability(inst, m, 3, four);
  CHECK(a.stable == b.stable);
  CHECK(a.samples == b.samples);
}

TEST_CASE("Monte Carlo for pairs, agents and deletions agrees with the oracle") {
  for_seeds(13, 6, [](Rng& rng, std::uint64_t seed) {
    const auto inst = random_instance(3, 2 + uniform_index(rng, 2), rng);
    INFO("seed " << seed);
    std::vector<StabilityObject> objects;
    objects.emplace_back(gale_shapley(inst));
    for (const auto& p : stable_pairs(inst)) objects.emplace_back(p);
    for (const auto& a : stable_agents(inst)) objects.emplace_back(a);
    for (const auto mode : {PerturbationMode::Swap, PerturbationMode::Delete}) {
      for (const auto& obj : objects) {
        const double exact = oracle::exact_stability_probability(inst, obj, 1, mode).convert_to<double>();
        EstimatorConfig cfg{0.05, 0.01, seed, 1};
        const auto est = mc_stability_probability(inst, obj, 1, cfg, mode);
        CHECK(std::abs(est.probability - exact) <= 0.08);
      }
    }
  });
}

TEST_CASE("deletions never touch protected agents") {
  const auto inst = generate({CultureKind::Robust, 0, 3, 0});
  const StabilityObject pair = Pair{0, 0};
  CHECK(protected_agents(pair) == std::vector<AgentId>{AgentId::man(0), AgentId::woman(0)});
  // Deleting the four other agents leaves the pair alone and stable.
  EstimatorConfig cfg;
  CHECK(mc_stability_probability(inst, pair, 4, cfg, PerturbationMode::Delete).probability == 1.0);
  CHECK_THROWS_AS(mc_stability_probability(inst, pair, 5, cfg, PerturbationMode::Delete), std::invalid_argument);
}

TEST_CASE("FPRAS") {
  Rng rng(14);
  const auto inst = random_square(3, rng);
  const auto m = gale_shapley(inst);
  const auto zero = fpras_unstable_count(inst, m, 0, 0.2, rng);
  CHECK(zero.estimate == 0);
  CHECK(zero.upper == 0);
  const auto exact = oracle::exact_unstable_count(inst, m, 2);
  REQUIRE(exact > 0);
  std::size_t close = 0;
  const std::size_t runs = 30;
  for (std::size_t r = 0; r < runs; ++r) {
    Rng run_rng(500 + r);
    const auto est = fpras_unstable_count(inst, m, 2, 0.2, run_rng);
    CHECK(est.samples == fpras_sample_size(3, 0.2));
    CHECK(est.hits <= est.samples);
    const BigRational rel = abs(est.estimate - BigRational(exact)) / BigRational(exact);
    close += rel <= BigRational(1, 5);
  }
  CHECK(close * 10 >= runs * 7);
}
