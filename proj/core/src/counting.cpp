#include <algorithm>
#include <stdexcept>

#include "matchrobust/counting.hpp"

namespace matchrobust {

namespace {

const BigCount kZero = 0;

// powers[c] = row convolved with itself c times, truncated at max_k.
std::vector<std::vector<BigCount>> convolution_powers(std::span<const BigCount> row, std::size_t count,
                                                      std::size_t max_k) {
  std::vector<std::vector<BigCount>> powers;
  powers.reserve(count + 1);
  powers.push_back({BigCount(1)});
  for (std::size_t c = 1; c <= count; ++c) powers.push_back(convolve(powers.back(), row, max_k));
  return powers;
}

const BigCount& at_or_zero(const std::vector<BigCount>& v, std::size_t k) {
  return k < v.size() ? v[k] : kZero;
}

template <class Weight>
std::size_t draw(Rng& rng, const BigCount& total, std::size_t count, Weight&& weight) {
  if (total <= 0) throw std::invalid_argument("sampling from an empty set");
  BigCount r = uniform_below(rng, total);
  for (std::size_t c = 0; c < count; ++c) {
    const BigCount w = weight(c);
    if (r < w) return c;
    r -= w;
  }
  throw std::logic_error("draw: weights do not sum to the total");
}

// Per-list budgets for `lists` lists of one length, summing to r.
void sample_side(const std::vector<std::vector<BigCount>>& powers, std::span<const BigCount> row,
                 std::size_t lists, std::size_t r, Rng& rng, std::vector<std::size_t>& out) {
  for (std::size_t c = lists; c >= 1; --c) {
    const auto x = draw(rng, at_or_zero(powers[c], r), std::min(r + 1, row.size()), [&](std::size_t x) {
      return BigCount(row[x] * at_or_zero(powers[c - 1], r - x));
    });
    out.push_back(x);
    r -= x;
  }
}

}  // namespace

ProfileCounter::ProfileCounter(std::size_t num_men, std::size_t num_women, std::size_t max_distance)
    : num_men_(num_men), num_women_(num_women), max_distance_(max_distance),
      table_(std::max(num_men, num_women), max_distance) {
  men_power_ = convolution_powers(table_.row(num_women), num_men, max_distance);
  women_power_ = convolution_powers(table_.row(num_men), num_women, max_distance);
  total_ = convolve(men_power_.back(), women_power_.back(), max_distance);
}

const BigCount& ProfileCounter::count(std::size_t l) const {
  if (l > max_distance_) throw std::out_of_range("ProfileCounter: distance above the table bound");
  return at_or_zero(total_, l);
}

const BigCount& ProfileCounter::men_lists(std::size_t c, std::size_t r) const {
  return at_or_zero(men_power_.at(c), r);
}

const BigCount& ProfileCounter::women_lists(std::size_t c, std::size_t r) const {
  return at_or_zero(women_power_.at(c), r);
}

std::vector<BigCount> ProfileCounter::mixed(std::size_t men, std::size_t women) const {
  return convolve(men_power_.at(men), women_power_.at(women), max_distance_);
}

std::vector<std::size_t> ProfileCounter::sample_budgets(std::size_t men, std::size_t women,
                                                        std::size_t l, Rng& rng) const {
  if (l > max_distance_) throw std::out_of_range("ProfileCounter: distance above the table bound");
  const auto both = mixed(men, women);
  const auto men_total = draw(rng, at_or_zero(both, l), l + 1, [&](std::size_t x) {
    return BigCount(men_lists(men, x) * women_lists(women, l - x));
  });
  std::vector<std::size_t> out;
  out.reserve(men + women);
  sample_side(men_power_, table_.row(num_women_), men, men_total, rng, out);
  sample_side(women_power_, table_.row(num_men_), women, l - men_total, rng, out);
  return out;
}

BigCount profiles_at_swap_distance(const Instance& inst, std::size_t l) {
  return ProfileCounter(inst.num_men(), inst.num_women(), l).count(l);
}

BigCount deletion_sets_count(std::size_t agents, std::size_t l) {
  if (l > agents) return 0;
  BigCount c = 1;
  for (std::size_t i = 0; i < l; ++i) c = c * (agents - i) / (i + 1);
  return c;
}

std::vector<std::size_t> permute_list(std::span<const std::size_t> list,
                                      std::span<const std::size_t> perm) {
  std::vector<std::size_t> out(list.size());
  for (std::size_t p = 0; p < list.size(); ++p) out[p] = list[perm[p]];
  return out;
}

Instance sample_profile_at_distance(const Instance& inst, std::size_t l, Rng& rng) {
  return sample_profile_at_distance(inst, l, ProfileCounter(inst.num_men(), inst.num_women(), l), rng);
}

Instance sample_profile_at_distance(const Instance& inst, std::size_t l, const ProfileCounter& counter,
                                    Rng& rng) {
  if (counter.count(l) == 0) throw std::invalid_argument("no profile at this swap distance");
  const auto budgets = counter.sample_budgets(inst.num_men(), inst.num_women(), l, rng);
  const auto& table = counter.table();
  std::vector<std::vector<std::size_t>> men(inst.num_men()), women(inst.num_women());
  std::size_t b = 0;
  for (std::size_t u = 0; u < inst.num_men(); ++u) {
    men[u] = permute_list(inst.man_list(u), sample_permutation(table, inst.num_women(), budgets[b++], rng));
  }
  for (std::size_t w = 0; w < inst.num_women(); ++w) {
    women[w] = permute_list(inst.woman_list(w), sample_permutation(table, inst.num_men(), budgets[b++], rng));
  }
  return Instance(std::move(men), std::move(women));
}

// The pair blocks iff the man's list keeps w before M(m) and the woman's list
// keeps m before M(w). An unassigned endpoint imposes nothing.
BlockingProfiles::BlockingProfiles(const Instance& inst, const Matching& m, Pair pair, std::size_t l,
                                   const ProfileCounter& counter)
    : inst_(&inst), counter_(&counter), pair_(pair), l_(l) {
  if (m.contains(pair)) throw std::invalid_argument("blocking profiles: pair is in the matching");
  if (l > counter.max_distance()) throw std::out_of_range("blocking profiles: distance above the table bound");
  const auto& table = counter.table();
  if (auto w = m.partner_of_man(pair.man)) {
    man_sampler_.emplace(inst.num_women(), inst.man_rank(pair.man, pair.woman) - 1,
                         inst.man_rank(pair.man, *w) - 1, l);
    man_counts_ = man_sampler_->counts();
  } else {
    const auto row = table.row(inst.num_women());
    man_counts_.assign(row.begin(), row.end());
  }
  if (auto u = m.partner_of_woman(pair.woman)) {
    woman_sampler_.emplace(inst.num_men(), inst.woman_rank(pair.woman, pair.man) - 1,
                           inst.woman_rank(pair.woman, *u) - 1, l);
    woman_counts_ = woman_sampler_->counts();
  } else {
    const auto row = table.row(inst.num_men());
    woman_counts_.assign(row.begin(), row.end());
  }
  rest_ = counter.mixed(inst.num_men() - 1, inst.num_women() - 1);
  const auto ends = convolve(man_counts_, woman_counts_, l);
  total_ = 0;
  for (std::size_t x = 0; x <= l && x < ends.size(); ++x) total_ += ends[x] * at_or_zero(rest_, l - x);
}

Instance BlockingProfiles::sample(Rng& rng) const {
  // Joint draw of (man's distance, woman's distance); the rest takes the remainder.
  const std::size_t span_m = std::min(l_ + 1, man_counts_.size());
  const std::size_t span_w = std::min(l_ + 1, woman_counts_.size());
  const auto flat = draw(rng, total_, span_m * span_w, [&](std::size_t c) {
    const auto x = c / span_w, y = c % span_w;
    if (x + y > l_) return BigCount(0);
    return BigCount(man_counts_[x] * woman_counts_[y] * at_or_zero(rest_, l_ - x - y));
  });
  const std::size_t lm = flat / span_w, lw = flat % span_w;

  const auto& inst = *inst_;
  const auto& table = counter_->table();
  const auto budgets =
      counter_->sample_budgets(inst.num_men() - 1, inst.num_women() - 1, l_ - lm - lw, rng);
  std::vector<std::vector<std::size_t>> men(inst.num_men()), women(inst.num_women());
  std::size_t b = 0;
  for (std::size_t u = 0; u < inst.num_men(); ++u) {
    std::vector<std::size_t> perm;
    if (u == pair_.man) {
      perm = man_sampler_ ? man_sampler_->sample(lm, rng) : sample_permutation(table, inst.num_women(), lm, rng);
    } else {
      perm = sample_permutation(table, inst.num_women(), budgets[b++], rng);
    }
    men[u] = permute_list(inst.man_list(u), perm);
  }
  for (std::size_t w = 0; w < inst.num_women(); ++w) {
    std::vector<std::size_t> perm;
    if (w == pair_.woman) {
      perm = woman_sampler_ ? woman_sampler_->sample(lw, rng) : sample_permutation(table, inst.num_men(), lw, rng);
    } else {
      perm = sample_permutation(table, inst.num_men(), budgets[b++], rng);
    }
    women[w] = permute_list(inst.woman_list(w), perm);
  }
  return Instance(std::move(men), std::move(women));
}

BigCount blocking_profile_count(const Instance& inst, const Matching& m, Pair pair, std::size_t l) {
  const ProfileCounter counter(inst.num_men(), inst.num_women(), l);
  return BlockingProfiles(inst, m, pair, l, counter).count();
}

Instance sample_blocking_profile(const Instance& inst, const Matching& m, Pair pair, std::size_t l,
                                 Rng& rng) {
  const ProfileCounter counter(inst.num_men(), inst.num_women(), l);
  return BlockingProfiles(inst, m, pair, l, counter).sample(rng);
}

BigCount unstable_profiles_upper(const Instance& inst, const Matching& m, std::size_t l) {
  const ProfileCounter counter(inst.num_men(), inst.num_women(), l);
  BigCount total = 0;
  for (std::size_t u = 0; u < inst.num_men(); ++u) {
    for (std::size_t w = 0; w < inst.num_women(); ++w) {
      if (m.contains({u, w})) continue;
      total += BlockingProfiles(inst, m, {u, w}, l, counter).count();
    }
  }
  return total;
}

}  // namespace matchrobust
