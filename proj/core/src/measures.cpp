#include "matchrobust/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "matchrobust/mallows.hpp"
#include "matchrobust/parallel.hpp"
#include "matchrobust/stability.hpp"

namespace matchrobust {

std::vector<double> default_grid() {
  std::vector<double> grid;
  auto add = [&](double x) { grid.push_back(std::round(x * 1e4) / 1e4); };
  for (int i = 0; i <= 50; ++i) add(i * 0.0002);
  for (int i = 1; i <= 124; ++i) add(0.01 + i * 0.005);
  for (int i = 1; 0.63 + i * 0.02 < 1.0 - 1e-9; ++i) add(0.63 + i * 0.02);
  add(1.0);
  return grid;
}

std::vector<double> coarse_grid() {
  std::vector<double> grid;
  auto add = [&](double x) { grid.push_back(std::round(x * 1e4) / 1e4); };
  for (int i = 0; i <= 10; ++i) add(i * 0.0002);
  for (int i = 1; i <= 20; ++i) add(0.002 + i * 0.0004);
  for (int i = 1; i <= 18; ++i) add(0.01 + i * 0.005);
  for (int i = 1; i <= 10; ++i) add(0.1 + i * 0.02);
  for (int i = 1; i <= 6; ++i) add(0.3 + i * 0.05);
  for (double x : {0.65, 0.75, 0.85, 0.95, 1.0}) add(x);
  return grid;
}

namespace {

// Stability of several objects in one instance, sharing the stable-pair and
// deferred-acceptance computations.
class Evaluator {
 public:
  explicit Evaluator(const Instance& inst) : inst_(inst) {}

  bool stable(const StabilityObject& object) {
    if (const auto* m = std::get_if<Matching>(&object)) return is_stable(inst_, *m);
    if (const auto* p = std::get_if<Pair>(&object)) {
      if (!pairs_) pairs_ = stable_pairs(inst_);
      return std::binary_search(pairs_->begin(), pairs_->end(), *p);
    }
    if (!men_optimal_) men_optimal_ = gale_shapley(inst_, Side::Man);
    return men_optimal_->is_assigned(std::get<AgentId>(object));
  }

 private:
  const Instance& inst_;
  std::optional<std::vector<Pair>> pairs_;
  std::optional<Matching> men_optimal_;
};

// Stable counts per object at one grid point, over objects with active[o] set.
std::vector<std::size_t> run_grid_point(const Instance& inst, std::span<const StabilityObject> objects,
                                        const std::vector<bool>& active, double norm_phi,
                                        std::size_t grid_index, const MonteCarloConfig& cfg) {
  const MallowsNoise noise(norm_phi);
  std::vector<std::vector<char>> hits(cfg.trials, std::vector<char>(objects.size(), 0));
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    auto rng = make_stream(cfg.seed, {grid_index, t});
    const auto perturbed = noise.perturb(inst, rng);
    Evaluator eval(perturbed);
    for (std::size_t o = 0; o < objects.size(); ++o) {
      if (active[o]) hits[t][o] = eval.stable(objects[o]);
    }
  });
  std::vector<std::size_t> counts(objects.size(), 0);
  for (const auto& row : hits) {
    for (std::size_t o = 0; o < objects.size(); ++o) counts[o] += static_cast<std::size_t>(row[o]);
  }
  return counts;
}

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("empty norm-phi grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("norm-phi grid must be strictly ascending");
  }
}

}  // namespace

double stability_probability(const Instance& inst, const StabilityObject& object, double norm_phi,
                             std::size_t trials, Rng& rng) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  const MallowsNoise noise(norm_phi);
  std::size_t stable = 0;
  for (std::size_t t = 0; t < trials; ++t) stable += object_is_stable(noise.perturb(inst, rng), object);
  return static_cast<double>(stable) / static_cast<double>(trials);
}

std::vector<StabilityCurve> stability_curves(const Instance& inst,
                                             std::span<const StabilityObject> objects,
                                             std::span<const double> grid, const MonteCarloConfig& cfg) {
  check_grid(grid);
  if (cfg.trials == 0) throw std::invalid_argument("trials must be positive");
  std::vector<StabilityCurve> curves(objects.size());
  for (auto& c : curves) {
    c.grid.assign(grid.begin(), grid.end());
    c.trials = cfg.trials;
  }
  const std::vector<bool> active(objects.size(), true);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto counts = run_grid_point(inst, objects, active, grid[g], g, cfg);
    for (std::size_t o = 0; o < objects.size(); ++o) {
      curves[o].probs.push_back(static_cast<double>(counts[o]) / static_cast<double>(cfg.trials));
    }
  }
  return curves;
}

StabilityCurve stability_curve(const Instance& inst, const StabilityObject& object,
                               std::span<const double> grid, const MonteCarloConfig& cfg) {
  return stability_curves(inst, std::span(&object, 1), grid, cfg).front();
}

std::vector<std::optional<double>> fifty_percent_thresholds(const Instance& inst,
                                                            std::span<const StabilityObject> objects,
                                                            std::span<const double> grid,
                                                            const MonteCarloConfig& cfg) {
  check_grid(grid);
  if (cfg.trials == 0) throw std::invalid_argument("trials must be positive");
  std::vector<std::optional<double>> out(objects.size());
  std::vector<bool> active(objects.size(), true);
  std::size_t remaining = objects.size();
  for (std::size_t g = 0; g < grid.size() && remaining > 0; ++g) {
    const auto counts = run_grid_point(inst, objects, active, grid[g], g, cfg);
    for (std::size_t o = 0; o < objects.size(); ++o) {
      if (!active[o]) continue;
      // estimate < 0.5, in integers
      if (2 * counts[o] < cfg.trials) {
        out[o] = grid[g];
        active[o] = false;
        --remaining;
      }
    }
  }
  return out;
}

std::optional<double> fifty_percent_threshold(const Instance& inst, const StabilityObject& object,
                                              std::span<const double> grid, const MonteCarloConfig& cfg) {
  return fifty_percent_thresholds(inst, std::span(&object, 1), grid, cfg).front();
}

double threshold_value(const std::optional<double>& threshold, std::span<const double> grid) {
  if (threshold) return *threshold;
  if (grid.empty()) throw std::invalid_argument("empty norm-phi grid");
  return grid.back();
}

std::size_t beta(const Instance& inst, const Matching& m, Pair pair) {
  return blocking_distance(inst, m, pair);
}

ProximityReport blocking_pair_proximity(const Instance& inst, const Matching& m, std::size_t depth) {
  ProximityReport r;
  r.depth = depth;
  r.histogram.assign(depth, 0);
  for (std::size_t u = 0; u < inst.num_men(); ++u) {
    for (std::size_t w = 0; w < inst.num_women(); ++w) {
      if (m.contains({u, w})) continue;
      const auto b = blocking_distance(inst, m, {u, w});
      if (b == 0) ++r.blocking;
      else if (b > depth) ++r.beyond;
      else ++r.histogram[b - 1];
    }
  }
  const auto sum = proximity_objective(inst, m, depth);
  if (sum > 0) {
    const double base = static_cast<double>(inst.num_men());
    const double value = static_cast<double>(sum);
    r.proximity = base >= 2 ? std::log(value) / std::log(base) : 0.0;
  }
  return r;
}

double avg_blocking_pairs(const Instance& inst, const Matching& m, double norm_phi, std::size_t trials,
                          Rng& rng) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  const MallowsNoise noise(norm_phi);
  double total = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    total += static_cast<double>(count_blocking_pairs(noise.perturb(inst, rng), m));
  }
  return total / static_cast<double>(trials);
}

double avg_blocking_pairs(const Instance& inst, const Matching& m, double norm_phi,
                          const MonteCarloConfig& cfg) {
  if (cfg.trials == 0) throw std::invalid_argument("trials must be positive");
  const MallowsNoise noise(norm_phi);
  std::vector<std::size_t> counts(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    auto rng = make_stream(cfg.seed, {t});
    counts[t] = count_blocking_pairs(noise.perturb(inst, rng), m);
  });
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  return total / static_cast<double>(cfg.trials);
}

std::size_t blocking_score(const Instance& inst, Pair pair) {
  const std::size_t n_men = inst.num_men(), n_women = inst.num_women();
  std::size_t score = 0;
  const auto ml = inst.man_list(pair.man);
  for (std::size_t i = 0; i + 1 < inst.man_rank(pair.man, pair.woman); ++i) {
    score += n_men - inst.woman_rank(ml[i], pair.man);
  }
  const auto wl = inst.woman_list(pair.woman);
  for (std::size_t i = 0; i + 1 < inst.woman_rank(pair.woman, pair.man); ++i) {
    score += n_women - inst.man_rank(wl[i], pair.woman);
  }
  return score;
}

PairStats pair_statistics(const Instance& inst, std::span<const double> grid, const MonteCarloConfig& cfg) {
  PairStats s;
  s.pairs = stable_pairs(inst);
  std::vector<StabilityObject> objects(s.pairs.begin(), s.pairs.end());
  s.thresholds = fifty_percent_thresholds(inst, objects, grid, cfg);
  if (s.pairs.empty()) return s;
  std::vector<double> values;
  for (const auto& t : s.thresholds) values.push_back(threshold_value(t, grid));
  const double n = static_cast<double>(values.size());
  s.average = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double sq = 0;
  for (auto v : values) sq += (v - s.average) * (v - s.average);
  s.variance = sq / n;
  s.max = *std::max_element(values.begin(), values.end());
  s.min = *std::min_element(values.begin(), values.end());
  return s;
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson_correlation: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("pearson_correlation: need at least two points");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0 || syy == 0) throw std::domain_error("pearson_correlation: constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace matchrobust
