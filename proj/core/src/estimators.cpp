#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "matchrobust/counting.hpp"
#include "matchrobust/parallel.hpp"
#include "matchrobust/stability.hpp"

namespace matchrobust {

std::size_t hoeffding_sample_size(double epsilon, double delta) {
  if (!(epsilon > 0 && epsilon < 1 && delta > 0 && delta < 1)) {
    throw std::invalid_argument("epsilon and delta must lie in (0, 1)");
  }
  return static_cast<std::size_t>(std::ceil(std::log(2.0 / delta) / (2.0 * epsilon * epsilon)));
}

std::size_t fpras_sample_size(std::size_t n, double epsilon) {
  if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  const double nn = static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(3.0 * nn * nn * std::log(8.0) / (epsilon * epsilon)));
}

double FprasEstimate::value() const { return static_cast<double>(estimate); }

FprasEstimate fpras_unstable_count(const Instance& inst, const Matching& m, std::size_t l,
                                   double epsilon, Rng& rng) {
  FprasEstimate out;
  out.estimate = 0;
  out.upper = 0;
  const ProfileCounter counter(inst.num_men(), inst.num_women(), l);
  std::vector<BlockingProfiles> parts;
  std::vector<BigCount> weights;
  for (std::size_t u = 0; u < inst.num_men(); ++u) {
    for (std::size_t w = 0; w < inst.num_women(); ++w) {
      if (m.contains({u, w})) continue;
      parts.emplace_back(inst, m, Pair{u, w}, l, counter);
      weights.push_back(parts.back().count());
      out.upper += weights.back();
    }
  }
  if (out.upper == 0) return out;

  out.samples = fpras_sample_size(inst.num_men(), epsilon);
  for (std::size_t s = 0; s < out.samples; ++s) {
    const auto k = pick_weighted(rng, weights);
    const auto profile = parts[k].sample(rng);
    // Count the sample only if its pair is the first blocking pair in lexicographic order.
    bool first = true;
    for (std::size_t e = 0; e < k && first; ++e) {
      if (is_blocking(profile, m, parts[e].pair())) first = false;
    }
    if (first) ++out.hits;
  }
  out.estimate = BigRational(BigCount(out.hits) * out.upper, BigCount(out.samples));
  return out;
}

bool object_is_stable(const Instance& inst, const StabilityObject& object) {
  if (const auto* m = std::get_if<Matching>(&object)) return is_stable(inst, *m);
  if (const auto* p = std::get_if<Pair>(&object)) {
    const auto pairs = stable_pairs(inst);
    return std::binary_search(pairs.begin(), pairs.end(), *p);
  }
  const auto a = std::get<AgentId>(object);
  const auto m = gale_shapley(inst, Side::Man);
  return m.is_assigned(a);
}

std::vector<AgentId> protected_agents(const StabilityObject& object) {
  if (const auto* p = std::get_if<Pair>(&object)) return {AgentId::man(p->man), AgentId::woman(p->woman)};
  if (const auto* a = std::get_if<AgentId>(&object)) return {*a};
  return {};
}

bool object_survives_deletion(const Instance& inst, const StabilityObject& object,
                              std::span<const AgentId> victims) {
  const auto red = delete_agents(inst, victims);
  if (const auto* m = std::get_if<Matching>(&object)) return is_stable(red.instance, restrict_matching(*m, red));
  if (const auto* p = std::get_if<Pair>(&object)) {
    const auto q = red.map(*p);
    return q && object_is_stable(red.instance, *q);
  }
  const auto a = red.map(std::get<AgentId>(object));
  return a && object_is_stable(red.instance, *a);
}

McEstimate mc_stability_probability(const Instance& inst, const StabilityObject& object,
                                    std::size_t l, const EstimatorConfig& cfg, PerturbationMode mode) {
  McEstimate out;
  out.samples = hoeffding_sample_size(cfg.epsilon, cfg.delta);
  std::vector<char> stable(out.samples, 0);

  if (mode == PerturbationMode::Swap) {
    const ProfileCounter counter(inst.num_men(), inst.num_women(), l);
    if (counter.count(l) == 0) throw std::invalid_argument("no profile at this swap distance");
    parallel_for(out.samples, cfg.threads, [&](std::size_t t) {
      auto rng = make_stream(cfg.seed, {t});
      stable[t] = object_is_stable(sample_profile_at_distance(inst, l, counter, rng), object);
    });
  } else {
    const auto fixed = protected_agents(object);
    std::vector<AgentId> pool;
    for (const Side side : {Side::Man, Side::Woman}) {
      for (std::size_t i = 0; i < inst.size(side); ++i) {
        const AgentId a{side, i};
        if (std::find(fixed.begin(), fixed.end(), a) == fixed.end()) pool.push_back(a);
      }
    }
    if (l > pool.size()) throw std::invalid_argument("more deletions than deletable agents");
    parallel_for(out.samples, cfg.threads, [&](std::size_t t) {
      auto rng = make_stream(cfg.seed, {t});
      auto order = pool;
      // Partial Fisher-Yates: the first l entries form a uniform l-subset.
      for (std::size_t i = 0; i < l; ++i) {
        const auto j = i + uniform_index(rng, order.size() - i);
        std::swap(order[i], order[j]);
      }
      stable[t] = object_survives_deletion(inst, object, std::span(order.data(), l));
    });
  }
  out.stable = static_cast<std::size_t>(std::count(stable.begin(), stable.end(), 1));
  out.probability = static_cast<double>(out.stable) / static_cast<double>(out.samples);
  return out;
}

}  // namespace matchrobust
