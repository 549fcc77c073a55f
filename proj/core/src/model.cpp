#include "matchrobust/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace matchrobust {

namespace {

void fill_side(const std::vector<std::vector<std::size_t>>& prefs, std::size_t other,
               const char* side, std::vector<std::size_t>& lists, std::vector<std::size_t>& rank) {
  lists.assign(prefs.size() * other, 0);
  rank.assign(prefs.size() * other, 0);
  for (std::size_t a = 0; a < prefs.size(); ++a) {
    const auto& list = prefs[a];
    if (list.size() != other) {
      throw std::invalid_argument(std::string(side) + " " + std::to_string(a) + ": expected " +
                                  std::to_string(other) + " entries");
    }
    for (std::size_t pos = 0; pos < other; ++pos) {
      const auto b = list[pos];
      if (b >= other) {
        throw std::invalid_argument(std::string(side) + " " + std::to_string(a) +
                                    ": index out of range");
      }
      if (rank[a * other + b] != 0) {
        throw std::invalid_argument(std::string(side) + " " + std::to_string(a) +
                                    ": not a permutation");
      }
      lists[a * other + pos] = b;
      rank[a * other + b] = pos + 1;
    }
  }
}

}  // namespace

Instance::Instance(std::vector<std::vector<std::size_t>> men_prefs,
                   std::vector<std::vector<std::size_t>> women_prefs)
    : num_men_(men_prefs.size()), num_women_(women_prefs.size()) {
  fill_side(men_prefs, num_women_, "man", men_lists_, men_rank_);
  fill_side(women_prefs, num_men_, "woman", women_lists_, women_rank_);
}

std::span<const std::size_t> Instance::man_list(std::size_t man) const {
  if (man >= num_men_) throw std::out_of_range("man index out of range");
  return {men_lists_.data() + man * num_women_, num_women_};
}

std::span<const std::size_t> Instance::woman_list(std::size_t woman) const {
  if (woman >= num_women_) throw std::out_of_range("woman index out of range");
  return {women_lists_.data() + woman * num_men_, num_men_};
}

std::span<const std::size_t> Instance::list(AgentId a) const {
  return a.side == Side::Man ? man_list(a.index) : woman_list(a.index);
}

std::vector<std::vector<std::size_t>> Instance::men_prefs() const {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(num_men_);
  for (std::size_t u = 0; u < num_men_; ++u) {
    auto l = man_list(u);
    out.emplace_back(l.begin(), l.end());
  }
  return out;
}

std::vector<std::vector<std::size_t>> Instance::women_prefs() const {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(num_women_);
  for (std::size_t w = 0; w < num_women_; ++w) {
    auto l = woman_list(w);
    out.emplace_back(l.begin(), l.end());
  }
  return out;
}

std::size_t rank_of(const Instance& inst, AgentId a, AgentId b) {
  if (a.side == b.side) throw std::domain_error("rank_of: agents on the same side");
  if (a.index >= inst.size(a.side) || b.index >= inst.size(b.side)) {
    throw std::out_of_range("rank_of: agent index out of range");
  }
  return a.side == Side::Man ? inst.man_rank(a.index, b.index) : inst.woman_rank(a.index, b.index);
}

Matching::Matching(std::size_t num_men, std::size_t num_women)
    : man_partner_(num_men), woman_partner_(num_women) {}

Matching::Matching(std::size_t num_men, std::size_t num_women, std::span<const Pair> pairs)
    : Matching(num_men, num_women) {
  for (const auto& p : pairs) {
    if (p.man >= num_men || p.woman >= num_women) {
      throw std::invalid_argument("matching: pair index out of range");
    }
    if (man_partner_[p.man] || woman_partner_[p.woman]) {
      throw std::invalid_argument("matching: agent occurs in more than one pair");
    }
    man_partner_[p.man] = p.woman;
    woman_partner_[p.woman] = p.man;
    ++size_;
  }
}

std::optional<AgentId> Matching::partner(AgentId a) const {
  if (a.side == Side::Man) {
    if (auto w = partner_of_man(a.index)) return AgentId::woman(*w);
  } else {
    if (auto u = partner_of_woman(a.index)) return AgentId::man(*u);
  }
  return std::nullopt;
}

bool Matching::contains(Pair p) const {
  return p.man < man_partner_.size() && man_partner_[p.man] == p.woman;
}

std::vector<Pair> Matching::pairs() const {
  std::vector<Pair> out;
  out.reserve(size_);
  for (std::size_t u = 0; u < man_partner_.size(); ++u) {
    if (man_partner_[u]) out.push_back({u, *man_partner_[u]});
  }
  return out;
}

namespace {

void check_shape(const Instance& inst, const Matching& m) {
  if (inst.num_men() != m.num_men() || inst.num_women() != m.num_women()) {
    throw std::invalid_argument("matching shape does not match instance");
  }
}

// Precondition: p not in m.
bool blocks_unchecked(const Instance& inst, const Matching& m, Pair p) {
  const auto mw = m.partner_of_man(p.man);
  if (mw && inst.man_rank(p.man, p.woman) > inst.man_rank(p.man, *mw)) return false;
  const auto wm = m.partner_of_woman(p.woman);
  if (wm && inst.woman_rank(p.woman, p.man) > inst.woman_rank(p.woman, *wm)) return false;
  return true;
}

}  // namespace

bool is_blocking(const Instance& inst, const Matching& m, Pair p) {
  check_shape(inst, m);
  if (p.man >= inst.num_men() || p.woman >= inst.num_women()) {
    throw std::out_of_range("is_blocking: pair index out of range");
  }
  if (m.contains(p)) return false;
  return blocks_unchecked(inst, m, p);
}

std::vector<Pair> blocking_pairs(const Instance& inst, const Matching& m) {
  check_shape(inst, m);
  std::vector<Pair> out;
  for (std::size_t u = 0; u < inst.num_men(); ++u) {
    for (std::size_t w = 0; w < inst.num_women(); ++w) {
      const Pair p{u, w};
      if (!m.contains(p) && blocks_unchecked(inst, m, p)) out.push_back(p);
    }
  }
  return out;
}

std::size_t count_blocking_pairs(const Instance& inst, const Matching& m) {
  check_shape(inst, m);
  std::size_t count = 0;
  for (std::size_t u = 0; u < inst.num_men(); ++u) {
    const auto mw = m.partner_of_man(u);
    // Only women u ranks above his partner can block with him.
    const auto list = inst.man_list(u);
    const std::size_t limit = mw ? inst.man_rank(u, *mw) - 1 : list.size();
    for (std::size_t pos = 0; pos < limit; ++pos) {
      if (blocks_unchecked(inst, m, {u, list[pos]})) ++count;
    }
  }
  return count;
}

bool is_stable(const Instance& inst, const Matching& m) {
  check_shape(inst, m);
  for (std::size_t u = 0; u < inst.num_men(); ++u) {
    const auto mw = m.partner_of_man(u);
    const auto list = inst.man_list(u);
    const std::size_t limit = mw ? inst.man_rank(u, *mw) - 1 : list.size();
    for (std::size_t pos = 0; pos < limit; ++pos) {
      if (blocks_unchecked(inst, m, {u, list[pos]})) return false;
    }
  }
  return true;
}

std::size_t rank_sum(const Instance& inst, const Matching& m) {
  check_shape(inst, m);
  std::size_t total = 0;
  for (const auto& p : m.pairs()) {
    total += inst.man_rank(p.man, p.woman) + inst.woman_rank(p.woman, p.man);
  }
  return total;
}

std::size_t kendall_distance(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("kendall_distance: length mismatch");
  const std::size_t n = a.size();
  std::vector<std::size_t> pos_in_b(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (b[i] >= n) throw std::invalid_argument("kendall_distance: item out of range");
    pos_in_b[b[i]] = i;
  }
  std::size_t inversions = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (pos_in_b[a[i]] > pos_in_b[a[j]]) ++inversions;
    }
  }
  return inversions;
}

std::size_t profile_swap_distance(const Instance& a, const Instance& b) {
  if (a.num_men() != b.num_men() || a.num_women() != b.num_women()) {
    throw std::invalid_argument("profile_swap_distance: shape mismatch");
  }
  std::size_t total = 0;
  for (std::size_t u = 0; u < a.num_men(); ++u) total += kendall_distance(a.man_list(u), b.man_list(u));
  for (std::size_t w = 0; w < a.num_women(); ++w) {
    total += kendall_distance(a.woman_list(w), b.woman_list(w));
  }
  return total;
}

Instance apply_swaps(const Instance& inst, std::span<const Swap> swaps) {
  auto men = inst.men_prefs();
  auto women = inst.women_prefs();
  for (const auto& s : swaps) {
    auto& lists = s.agent.side == Side::Man ? men : women;
    if (s.agent.index >= lists.size()) throw std::out_of_range("apply_swaps: agent out of range");
    auto& list = lists[s.agent.index];
    if (s.position + 1 >= list.size()) throw std::out_of_range("apply_swaps: position out of range");
    std::swap(list[s.position], list[s.position + 1]);
  }
  return Instance(std::move(men), std::move(women));
}

std::optional<AgentId> Reduction::map(AgentId a) const {
  const auto& table = a.side == Side::Man ? man_map : woman_map;
  if (a.index >= table.size() || !table[a.index]) return std::nullopt;
  return AgentId{a.side, *table[a.index]};
}

std::optional<Pair> Reduction::map(Pair p) const {
  if (p.man >= man_map.size() || p.woman >= woman_map.size()) return std::nullopt;
  if (!man_map[p.man] || !woman_map[p.woman]) return std::nullopt;
  return Pair{*man_map[p.man], *woman_map[p.woman]};
}

Reduction delete_agents(const Instance& inst, std::span<const AgentId> victims) {
  std::vector<bool> dead_man(inst.num_men(), false);
  std::vector<bool> dead_woman(inst.num_women(), false);
  for (const auto& v : victims) {
    if (v.index >= inst.size(v.side)) throw std::out_of_range("delete_agents: agent out of range");
    (v.side == Side::Man ? dead_man : dead_woman)[v.index] = true;
  }
  Reduction r;
  r.man_map.resize(inst.num_men());
  r.woman_map.resize(inst.num_women());
  std::size_t next = 0;
  for (std::size_t u = 0; u < inst.num_men(); ++u) {
    if (!dead_man[u]) r.man_map[u] = next++;
  }
  next = 0;
  for (std::size_t w = 0; w < inst.num_women(); ++w) {
    if (!dead_woman[w]) r.woman_map[w] = next++;
  }

  std::vector<std::vector<std::size_t>> men;
  for (std::size_t u = 0; u < inst.num_men(); ++u) {
    if (dead_man[u]) continue;
    std::vector<std::size_t> list;
    for (auto w : inst.man_list(u)) {
      if (!dead_woman[w]) list.push_back(*r.woman_map[w]);
    }
    men.push_back(std::move(list));
  }
  std::vector<std::vector<std::size_t>> women;
  for (std::size_t w = 0; w < inst.num_women(); ++w) {
    if (dead_woman[w]) continue;
    std::vector<std::size_t> list;
    for (auto u : inst.woman_list(w)) {
      if (!dead_man[u]) list.push_back(*r.man_map[u]);
    }
    women.push_back(std::move(list));
  }
  r.instance = Instance(std::move(men), std::move(women));
  return r;
}

Matching restrict_matching(const Matching& m, const Reduction& r) {
  std::vector<Pair> kept;
  for (const auto& p : m.pairs()) {
    if (auto q = r.map(p)) kept.push_back(*q);
  }
  return Matching(r.instance.num_men(), r.instance.num_women(), kept);
}

}  // namespace matchrobust
