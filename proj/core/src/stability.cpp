#include "matchrobust/stability.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>

#include "matchrobust/errors.hpp"
#include "rotation_trace.hpp"

namespace matchrobust {

Matching gale_shapley(const Instance& inst, Side proposing) {
  const bool men_propose = proposing == Side::Man;
  const std::size_t p_count = men_propose ? inst.num_men() : inst.num_women();
  const std::size_t r_count = men_propose ? inst.num_women() : inst.num_men();
  auto p_list = [&](std::size_t a) { return men_propose ? inst.man_list(a) : inst.woman_list(a); };
  auto r_rank = [&](std::size_t b, std::size_t a) {
    return men_propose ? inst.woman_rank(b, a) : inst.man_rank(b, a);
  };

  constexpr auto kFree = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> next(p_count, 0);
  std::vector<std::size_t> held(r_count, kFree);
  std::vector<std::size_t> free;
  free.reserve(p_count);
  for (std::size_t a = p_count; a-- > 0;) free.push_back(a);

  while (!free.empty()) {
    const auto a = free.back();
    if (next[a] == r_count) {
      free.pop_back();  // exhausted his list, stays single
      continue;
    }
    const auto b = p_list(a)[next[a]++];
    if (held[b] == kFree) {
      held[b] = a;
      free.pop_back();
    } else if (r_rank(b, a) < r_rank(b, held[b])) {
      free.back() = held[b];
      held[b] = a;
    }
  }

  std::vector<Pair> pairs;
  for (std::size_t b = 0; b < r_count; ++b) {
    if (held[b] == kFree) continue;
    pairs.push_back(men_propose ? Pair{held[b], b} : Pair{b, held[b]});
  }
  return Matching(inst.num_men(), inst.num_women(), pairs);
}

void for_each_stable_matching(const Instance& inst, std::size_t cap,
                              const std::function<void(const Matching&)>& visit) {
  const auto poset = build_rotation_poset(inst);
  const std::size_t n = inst.num_men();
  const std::size_t r_count = poset.rotations.size();

  std::vector<std::optional<std::size_t>> partner(n);
  for (std::size_t u = 0; u < n; ++u) partner[u] = poset.men_optimal.partner_of_man(u);
  std::vector<bool> included(r_count, false);
  std::size_t visited = 0;

  auto emit = [&] {
    if (visited == cap) throw CapExceeded(cap);
    ++visited;
    std::vector<Pair> pairs;
    for (std::size_t u = 0; u < n; ++u) {
      if (partner[u]) pairs.push_back({u, *partner[u]});
    }
    visit(Matching(n, inst.num_women(), pairs));
  };

  // Include/exclude search over rotations in topological order. Every leaf is a
  // distinct closed set.
  auto dfs = [&](auto&& self, std::size_t i) -> void {
    if (i == r_count) {
      emit();
      return;
    }
    self(self, i + 1);
    const auto& preds = poset.predecessors[i];
    if (!std::all_of(preds.begin(), preds.end(), [&](std::size_t p) { return included[p]; })) return;
    const auto& cycle = poset.rotations[i].cycle;
    const std::size_t len = cycle.size();
    for (std::size_t k = 0; k < len; ++k) partner[cycle[k].man] = cycle[(k + 1) % len].woman;
    included[i] = true;
    self(self, i + 1);
    included[i] = false;
    for (const auto& p : cycle) partner[p.man] = p.woman;
  };
  dfs(dfs, 0);
}

std::vector<Matching> enumerate_stable_matchings(const Instance& inst, std::size_t cap) {
  std::vector<Matching> out;
  for_each_stable_matching(inst, cap, [&](const Matching& m) { out.push_back(m); });
  return out;
}

std::vector<Pair> stable_pairs(const Instance& inst) {
  const auto trace = detail::trace_rotations(inst, false);
  auto out = trace.men_optimal.pairs();
  for (const auto& rot : trace.rotations) {
    for (const auto& p : rot.produced()) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<AgentId> stable_agents(const Instance& inst) {
  // Every stable matching assigns the same agents.
  const auto m = gale_shapley(inst, Side::Man);
  std::vector<AgentId> out;
  for (std::size_t u = 0; u < inst.num_men(); ++u) {
    if (m.partner_of_man(u)) out.push_back(AgentId::man(u));
  }
  for (std::size_t w = 0; w < inst.num_women(); ++w) {
    if (m.partner_of_woman(w)) out.push_back(AgentId::woman(w));
  }
  return out;
}

namespace {

class Dinic {
 public:
  explicit Dinic(std::size_t nodes) : adj_(nodes), level_(nodes), it_(nodes) {}

  void add_edge(std::size_t from, std::size_t to, std::int64_t cap) {
    adj_[from].push_back({to, adj_[to].size(), cap});
    adj_[to].push_back({from, adj_[from].size() - 1, 0});
  }

  std::int64_t max_flow(std::size_t s, std::size_t t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (auto f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) flow += f;
    }
    return flow;
  }

 private:
  struct Edge {
    std::size_t to;
    std::size_t rev;
    std::int64_t cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      for (const auto& e : adj_[v]) {
        if (e.cap > 0 && level_[e.to] < 0) {
          level_[e.to] = level_[v] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(std::size_t v, std::size_t t, std::int64_t limit) {
    if (v == t) return limit;
    for (auto& i = it_[v]; i < adj_[v].size(); ++i) {
      auto& e = adj_[v][i];
      if (e.cap <= 0 || level_[e.to] != level_[v] + 1) continue;
      if (auto f = dfs(e.to, t, std::min(limit, e.cap))) {
        e.cap -= f;
        adj_[e.to][e.rev].cap += f;
        return f;
      }
    }
    return 0;
  }

  std::vector<std::vector<Edge>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

constexpr std::int64_t kInf = 1'000'000'000'000'000;

// Change of the summed rank when eliminating the rotation.
std::int64_t rotation_weight(const Instance& inst, const Rotation& rot) {
  std::int64_t w = 0;
  const std::size_t len = rot.cycle.size();
  for (std::size_t i = 0; i < len; ++i) {
    const auto u = rot.cycle[i].man;
    const auto from = rot.cycle[i].woman;
    const auto to = rot.cycle[(i + 1) % len].woman;
    const auto old_man = rot.cycle[(i + 1) % len].man;
    w += static_cast<std::int64_t>(inst.man_rank(u, to)) - static_cast<std::int64_t>(inst.man_rank(u, from));
    w += static_cast<std::int64_t>(inst.woman_rank(to, u)) -
         static_cast<std::int64_t>(inst.woman_rank(to, old_man));
  }
  return w;
}

}  // namespace

Matching summed_rank_min_matching(const Instance& inst) {
  const auto poset = build_rotation_poset(inst);
  const std::size_t r_count = poset.rotations.size();
  std::vector<std::int64_t> profit(r_count);
  std::int64_t positive = 0;
  for (std::size_t r = 0; r < r_count; ++r) {
    profit[r] = -rotation_weight(inst, poset.rotations[r]);
    if (profit[r] > 0) positive += profit[r];
  }

  // Best closure profit subject to forced inclusions and exclusions.
  auto best_profit = [&](const std::vector<std::size_t>& forced_in,
                         const std::vector<std::size_t>& forced_out) {
    const std::size_t s = r_count, t = r_count + 1;
    Dinic g(r_count + 2);
    for (std::size_t r = 0; r < r_count; ++r) {
      if (profit[r] > 0) g.add_edge(s, r, profit[r]);
      if (profit[r] < 0) g.add_edge(r, t, -profit[r]);
      for (auto p : poset.predecessors[r]) g.add_edge(r, p, kInf);
    }
    for (auto r : forced_in) g.add_edge(s, r, kInf);
    for (auto r : forced_out) g.add_edge(r, t, kInf);
    return positive - g.max_flow(s, t);
  };

  const auto optimum = best_profit({}, {});

  // Each man's partners in elimination order, with the rotation reaching each.
  const std::size_t n = inst.num_men();
  struct Step {
    std::size_t woman;
    std::optional<std::size_t> enter;  // rotation moving him to `woman`
    std::optional<std::size_t> leave;  // rotation moving him away
  };
  std::vector<std::vector<Step>> chain(n);
  for (std::size_t u = 0; u < n; ++u) {
    if (auto w = poset.men_optimal.partner_of_man(u)) chain[u].push_back({*w, std::nullopt, std::nullopt});
  }
  for (std::size_t r = 0; r < r_count; ++r) {
    const auto& cycle = poset.rotations[r].cycle;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const auto u = cycle[i].man;
      chain[u].back().leave = r;
      chain[u].push_back({cycle[(i + 1) % cycle.size()].woman, r, std::nullopt});
    }
  }

  std::vector<std::size_t> forced_in, forced_out;
  std::vector<Pair> pairs;
  for (std::size_t u = 0; u < n; ++u) {
    if (chain[u].empty()) continue;
    auto options = chain[u];
    std::sort(options.begin(), options.end(),
              [](const Step& a, const Step& b) { return a.woman < b.woman; });
    bool chosen = false;
    for (const auto& step : options) {
      auto in = forced_in;
      auto out = forced_out;
      if (step.enter) in.push_back(*step.enter);
      if (step.leave) out.push_back(*step.leave);
      if (best_profit(in, out) == optimum) {
        forced_in = std::move(in);
        forced_out = std::move(out);
        pairs.push_back({u, step.woman});
        chosen = true;
        break;
      }
    }
    if (!chosen) throw std::logic_error("summed_rank_min_matching: no partner keeps the optimum");
  }
  return Matching(n, inst.num_women(), pairs);
}

std::size_t blocking_distance(const Instance& inst, const Matching& m, Pair p) {
  if (m.contains(p)) throw std::invalid_argument("blocking_distance: pair is in the matching");
  std::size_t d = 0;
  if (auto w = m.partner_of_man(p.man)) {
    const auto a = inst.man_rank(p.man, p.woman), b = inst.man_rank(p.man, *w);
    if (a > b) d += a - b;
  }
  if (auto u = m.partner_of_woman(p.woman)) {
    const auto a = inst.woman_rank(p.woman, p.man), b = inst.woman_rank(p.woman, *u);
    if (a > b) d += a - b;
  }
  return d;
}

BigCount proximity_objective(const Instance& inst, const Matching& m, std::size_t depth) {
  std::vector<std::size_t> hist(depth + 1, 0);
  for (std::size_t u = 0; u < inst.num_men(); ++u) {
    for (std::size_t w = 0; w < inst.num_women(); ++w) {
      if (m.contains({u, w})) continue;
      const auto d = blocking_distance(inst, m, {u, w});
      if (d >= 1 && d <= depth) ++hist[d];
    }
  }
  BigCount total = 0;
  const BigCount base = inst.num_men();
  for (std::size_t k = 1; k <= depth; ++k) {
    total = total * base + hist[k];
  }
  return total;
}

Matching proximity_robust_matching(const Instance& inst, std::size_t depth, std::size_t cap) {
  std::optional<Matching> best;
  BigCount best_value;
  for_each_stable_matching(inst, cap, [&](const Matching& m) {
    auto value = proximity_objective(inst, m, depth);
    if (!best || value < best_value || (value == best_value && m < *best)) {
      best = m;
      best_value = std::move(value);
    }
  });
  return *best;
}

}  // namespace matchrobust
