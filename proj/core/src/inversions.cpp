#include <algorithm>
#include <stdexcept>

#include "matchrobust/counting.hpp"

namespace matchrobust {

namespace {

const BigCount kZero = 0;

std::size_t row_length(std::size_t n, std::size_t max_k) {
  return std::min(max_inversions(n), max_k) + 1;
}

// Index c in [0, count) drawn with probability weight(c) / total.
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

}  // namespace

InversionTable::InversionTable(std::size_t max_n, std::size_t max_k) : max_k_(max_k) {
  rows_.reserve(max_n + 1);
  rows_.push_back({BigCount(1)});
  for (std::size_t n = 1; n <= max_n; ++n) {
    rows_.push_back(convolve_box(rows_.back(), n, std::min(max_inversions(n), max_k)));
  }
}

const BigCount& InversionTable::operator()(std::size_t n, std::size_t k) const {
  const auto& row = rows_.at(n);
  return k < row.size() ? row[k] : kZero;
}

BigCount permutations_by_inversions(std::size_t n, std::int64_t k) {
  if (k < 0 || static_cast<std::size_t>(k) > max_inversions(n)) return 0;
  return InversionTable(n, static_cast<std::size_t>(k))(n, static_cast<std::size_t>(k));
}

std::vector<BigCount> convolve_box(std::span<const BigCount> in, std::size_t len, std::size_t max_k) {
  if (in.empty() || len == 0) return {};
  const std::size_t size = std::min(in.size() + len - 1, max_k == kNoLimit ? kNoLimit : max_k + 1);
  std::vector<BigCount> out(size);
  BigCount window = 0;
  for (std::size_t k = 0; k < size; ++k) {
    if (k < in.size()) window += in[k];
    if (k >= len && k - len < in.size()) window -= in[k - len];
    out[k] = window;
  }
  return out;
}

std::vector<BigCount> convolve(std::span<const BigCount> a, std::span<const BigCount> b,
                               std::size_t max_k) {
  if (a.empty() || b.empty()) return {};
  const std::size_t size = std::min(a.size() + b.size() - 1, max_k == kNoLimit ? kNoLimit : max_k + 1);
  std::vector<BigCount> out(size);
  for (std::size_t x = 0; x < a.size() && x < size; ++x) {
    if (a[x] == 0) continue;
    for (std::size_t y = 0; y < b.size() && x + y < size; ++y) out[x + y] += a[x] * b[y];
  }
  return out;
}

std::vector<std::size_t> sample_permutation(const InversionTable& table, std::size_t n,
                                            std::size_t k, Rng& rng) {
  // Item i (the largest so far) goes in with c_i items after it.
  std::vector<std::size_t> after(n);
  for (std::size_t i = n; i >= 1; --i) {
    const auto c = draw(rng, table(i, k), std::min(k, i - 1) + 1,
                        [&](std::size_t c) -> const BigCount& { return table(i - 1, k - c); });
    after[i - 1] = c;
    k -= c;
  }
  std::vector<std::size_t> perm;
  perm.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    perm.insert(perm.begin() + static_cast<std::ptrdiff_t>(i - after[i]), i);
  }
  return perm;
}

// The block of positions a..b (a = min(i,j), b = max(i,j)) is counted first:
// its end items sit at slots p < q with the middle items in the remaining
// slots. Items after b are then appended one at a time, and items before a
// prepended; each insertion into a list of length L adds 0..L inversions.
ConstrainedPermutations::ConstrainedPermutations(std::size_t n, std::size_t i, std::size_t j,
                                                 std::size_t max_k)
    : n_(n), i_(i), j_(j), max_k_(max_k), block_((i < j ? j - i : i - j) + 1),
      middle_(block_ >= 2 ? block_ - 2 : 0, max_k) {
  if (i == j || i >= n || j >= n) throw std::invalid_argument("constrained permutations: bad positions");
  const std::size_t mid = block_ - 2;
  const bool keep = i < j;
  const std::size_t lo = keep ? 0 : block_ - 1;
  const std::size_t hi = keep ? block_ - 2 : 2 * block_ - 3;
  std::vector<BigCount> base(row_length(block_, max_k));
  for (std::size_t k = 0; k < base.size(); ++k) {
    for (std::size_t l = lo; l <= hi && l <= k; ++l) {
      const auto mult = keep ? l + 1 : 2 * (block_ - 1) - l;
      base[k] += middle_(mid, k - l) * mult;
    }
  }
  layers_.push_back(std::move(base));
  for (std::size_t len = block_ + 1; len <= n; ++len) {
    layers_.push_back(convolve_box(layers_.back(), len, std::min(max_inversions(len), max_k)));
  }
}

const BigCount& ConstrainedPermutations::count(std::size_t k) const {
  const auto& c = counts();
  return k < c.size() ? c[k] : kZero;
}

std::vector<std::size_t> ConstrainedPermutations::sample(std::size_t k, Rng& rng) const {
  const std::size_t adds = layers_.size() - 1;
  std::vector<std::size_t> gained(adds);
  for (std::size_t t = adds; t >= 1; --t) {
    const auto& prev = layers_[t - 1];
    const std::size_t len = block_ + t;
    const auto c = draw(rng, layers_[t].at(k), std::min(k, len - 1) + 1, [&](std::size_t c) {
      return k - c < prev.size() ? prev[k - c] : kZero;
    });
    gained[t - 1] = c;
    k -= c;
  }

  const std::size_t mid = block_ - 2;
  const bool keep = i_ < j_;
  const std::size_t lo = keep ? 0 : block_ - 1;
  const std::size_t hi = keep ? block_ - 2 : 2 * block_ - 3;
  const std::size_t span_l = std::min(hi, k) + 1;
  const auto l_off = draw(rng, layers_[0].at(k), span_l > lo ? span_l - lo : 0, [&](std::size_t c) {
    const auto l = lo + c;
    return BigCount(middle_(mid, k - l) * (keep ? l + 1 : 2 * (block_ - 1) - l));
  });
  const std::size_t l = lo + l_off;

  // Slots of the two end items.
  std::size_t p, q;
  if (keep) {
    p = uniform_index(rng, l + 1);
    q = p + block_ - 1 - l;
  } else {
    const std::size_t gap = l - (block_ - 2);
    p = uniform_index(rng, block_ - gap);
    q = p + gap;
  }
  const std::size_t a = std::min(i_, j_);
  const std::size_t b = std::max(i_, j_);
  std::vector<std::size_t> perm(block_);
  perm[p] = keep ? a : b;
  perm[q] = keep ? b : a;
  const auto inner = sample_permutation(middle_, mid, k - l, rng);
  for (std::size_t s = 0, slot = 0; s < block_; ++s) {
    if (s == p || s == q) continue;
    perm[s] = a + 1 + inner[slot++];
  }

  std::size_t t = 0;
  for (std::size_t item = b + 1; item < n_; ++item, ++t) {
    perm.insert(perm.end() - static_cast<std::ptrdiff_t>(gained[t]), item);
  }
  for (std::size_t item = a; item-- > 0; ++t) {
    perm.insert(perm.begin() + static_cast<std::ptrdiff_t>(gained[t]), item);
  }
  return perm;
}

BigCount constrained_permutations(std::size_t n, std::int64_t k, std::size_t i, std::size_t j) {
  if (i == 0 || j == 0 || i > n || j > n || i == j) {
    throw std::invalid_argument("constrained_permutations: positions must be distinct and in 1..n");
  }
  if (k < 0 || static_cast<std::size_t>(k) > max_inversions(n)) return 0;
  return ConstrainedPermutations(n, i - 1, j - 1, static_cast<std::size_t>(k)).count(static_cast<std::size_t>(k));
}

}  // namespace matchrobust
