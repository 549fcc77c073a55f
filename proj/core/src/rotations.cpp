#include <algorithm>
#include <stdexcept>

#include "rotation_trace.hpp"

namespace matchrobust {

namespace detail {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

}  // namespace

RotationTrace trace_rotations(const Instance& inst, bool with_precedence) {
  RotationTrace trace;
  trace.men_optimal = gale_shapley(inst, Side::Man);
  trace.women_optimal = gale_shapley(inst, Side::Woman);

  const std::size_t n = inst.num_men();
  const std::size_t m = inst.num_women();

  std::vector<std::size_t> man_partner(n, kNone), woman_partner(m, kNone);
  std::vector<std::size_t> pos(n, 0), last_pos(n, 0), cursor(n, 0);
  for (const auto& p : trace.men_optimal.pairs()) {
    man_partner[p.man] = p.woman;
    woman_partner[p.woman] = p.man;
    pos[p.man] = inst.man_rank(p.man, p.woman) - 1;
    cursor[p.man] = pos[p.man] + 1;
  }
  for (const auto& p : trace.women_optimal.pairs()) last_pos[p.man] = inst.man_rank(p.man, p.woman) - 1;

  auto active = [&](std::size_t u) { return man_partner[u] != kNone && pos[u] != last_pos[u]; };

  // First woman after u's partner who prefers u to her own partner. Women only
  // improve as rotations are eliminated, so skipped women stay skipped.
  auto next_woman = [&](std::size_t u) {
    const auto list = inst.man_list(u);
    while (cursor[u] <= last_pos[u]) {
      const auto w = list[cursor[u]];
      const auto held = woman_partner[w];
      if (held == kNone) throw std::logic_error("rotation search: unassigned woman inside a stable range");
      if (inst.woman_rank(w, u) < inst.woman_rank(w, held)) return w;
      ++cursor[u];
    }
    throw std::logic_error("rotation search: active man without a next woman");
  };

  // Precedence bookkeeping.
  std::vector<std::size_t> last_rotation_of_man(n, kNone);
  std::vector<std::size_t> last_rotation_of_woman(m, kNone);
  // crossing[w * n + u]: rotation that moved w from a man ranked below u to one ranked above u.
  std::vector<std::size_t> crossing;
  if (with_precedence) crossing.assign(m * n, kNone);

  std::vector<std::size_t> stack;
  std::vector<bool> on_stack(n, false);
  std::size_t scan = 0;

  for (;;) {
    if (stack.empty()) {
      while (scan < n && !active(scan)) ++scan;
      if (scan == n) break;
      stack.push_back(scan);
      on_stack[scan] = true;
    }
    const auto top = stack.back();
    const auto w = next_woman(top);
    const auto holder = woman_partner[w];
    if (!active(holder)) throw std::logic_error("rotation search: reached an inactive man");
    if (!on_stack[holder]) {
      stack.push_back(holder);
      on_stack[holder] = true;
      continue;
    }

    // Pop the cycle holder ... top.
    const auto start = static_cast<std::size_t>(
        std::find(stack.begin(), stack.end(), holder) - stack.begin());
    std::vector<std::size_t> men(stack.begin() + static_cast<std::ptrdiff_t>(start), stack.end());
    stack.resize(start);

    Rotation rot;
    rot.index = trace.rotations.size();
    for (auto u : men) {
      rot.cycle.push_back({u, man_partner[u]});
      on_stack[u] = false;
    }

    if (with_precedence) {
      std::vector<std::size_t> preds;
      const std::size_t r = rot.cycle.size();
      for (std::size_t i = 0; i < r; ++i) {
        const auto u = rot.cycle[i].man;
        const auto w_from = rot.cycle[i].woman;
        const auto w_to = rot.cycle[(i + 1) % r].woman;
        if (last_rotation_of_man[u] != kNone) preds.push_back(last_rotation_of_man[u]);
        if (last_rotation_of_woman[w_to] != kNone) preds.push_back(last_rotation_of_woman[w_to]);
        const auto list = inst.man_list(u);
        for (auto k = inst.man_rank(u, w_from); k + 1 < inst.man_rank(u, w_to); ++k) {
          const auto between = list[k];
          const auto c = crossing[between * n + u];
          if (c != kNone) preds.push_back(c);
        }
      }
      std::sort(preds.begin(), preds.end());
      preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
      trace.predecessors.push_back(std::move(preds));

      for (std::size_t i = 0; i < r; ++i) {
        const auto w_to = rot.cycle[(i + 1) % r].woman;
        const auto new_man = rot.cycle[i].man;
        const auto old_man = rot.cycle[(i + 1) % r].man;
        const auto wl = inst.woman_list(w_to);
        for (auto k = inst.woman_rank(w_to, new_man); k + 1 < inst.woman_rank(w_to, old_man); ++k) {
          crossing[w_to * n + wl[k]] = rot.index;
        }
        last_rotation_of_man[new_man] = rot.index;
        last_rotation_of_woman[w_to] = rot.index;
      }
    }

    // Eliminate.
    const std::size_t r = rot.cycle.size();
    for (std::size_t i = 0; i < r; ++i) {
      const auto u = rot.cycle[i].man;
      const auto w_to = rot.cycle[(i + 1) % r].woman;
      man_partner[u] = w_to;
      woman_partner[w_to] = u;
      pos[u] = inst.man_rank(u, w_to) - 1;
      cursor[u] = pos[u] + 1;
    }
    trace.rotations.push_back(std::move(rot));
  }
  return trace;
}

}  // namespace detail

std::vector<Pair> Rotation::produced() const {
  std::vector<Pair> out;
  const std::size_t r = cycle.size();
  out.reserve(r);
  for (std::size_t i = 0; i < r; ++i) out.push_back({cycle[i].man, cycle[(i + 1) % r].woman});
  return out;
}

RotationPoset build_rotation_poset(const Instance& inst) {
  auto trace = detail::trace_rotations(inst, true);
  RotationPoset poset;
  poset.rotations = std::move(trace.rotations);
  poset.predecessors = std::move(trace.predecessors);
  poset.men_optimal = std::move(trace.men_optimal);
  poset.women_optimal = std::move(trace.women_optimal);
  return poset;
}

bool RotationPoset::is_closed(std::span<const std::size_t> set) const {
  std::vector<bool> in(rotations.size(), false);
  for (auto r : set) in.at(r) = true;
  for (auto r : set) {
    for (auto p : predecessors[r]) {
      if (!in[p]) return false;
    }
  }
  return true;
}

Matching RotationPoset::apply(std::span<const std::size_t> closed_set) const {
  std::vector<std::size_t> order(closed_set.begin(), closed_set.end());
  std::sort(order.begin(), order.end());
  std::vector<std::optional<std::size_t>> partner(men_optimal.num_men());
  for (std::size_t u = 0; u < partner.size(); ++u) partner[u] = men_optimal.partner_of_man(u);
  for (auto r : order) {
    for (const auto& p : rotations.at(r).produced()) partner[p.man] = p.woman;
  }
  std::vector<Pair> pairs;
  for (std::size_t u = 0; u < partner.size(); ++u) {
    if (partner[u]) pairs.push_back({u, *partner[u]});
  }
  return Matching(men_optimal.num_men(), men_optimal.num_women(), pairs);
}

}  // namespace matchrobust
