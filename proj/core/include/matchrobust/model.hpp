#pragma once

#include <compare>
#include <initializer_list>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace matchrobust {

enum class Side { Man, Woman };

constexpr Side opposite(Side s) noexcept { return s == Side::Man ? Side::Woman : Side::Man; }

/// An agent on one side of the market, 0-based within its side.
struct AgentId {
  Side side = Side::Man;
  std::size_t index = 0;

  static constexpr AgentId man(std::size_t i) noexcept { return {Side::Man, i}; }
  static constexpr AgentId woman(std::size_t i) noexcept { return {Side::Woman, i}; }

  friend constexpr auto operator<=>(const AgentId&, const AgentId&) = default;
};

/// A man-woman pair.
struct Pair {
  std::size_t man = 0;
  std::size_t woman = 0;

  friend constexpr auto operator<=>(const Pair&, const Pair&) = default;
};

/// A Stable Marriage instance with complete strict preference lists.
///
/// Lists are stored most-preferred first. Ranks are 1-based: rank 1 is the top
/// choice. Instances are immutable once constructed.
class Instance {
 public:
  Instance() = default;

  /// Validates that every list is a permutation of the opposite side.
  /// Throws std::invalid_argument otherwise.
  Instance(std::vector<std::vector<std::size_t>> men_prefs,
           std::vector<std::vector<std::size_t>> women_prefs);

  std::size_t num_men() const noexcept { return num_men_; }
  std::size_t num_women() const noexcept { return num_women_; }
  std::size_t num_agents() const noexcept { return num_men_ + num_women_; }
  std::size_t size(Side s) const noexcept { return s == Side::Man ? num_men_ : num_women_; }
  bool is_square() const noexcept { return num_men_ == num_women_; }

  std::span<const std::size_t> man_list(std::size_t man) const;
  std::span<const std::size_t> woman_list(std::size_t woman) const;
  std::span<const std::size_t> list(AgentId a) const;

  /// rk_man(woman), 1-based.
  std::size_t man_rank(std::size_t man, std::size_t woman) const noexcept {
    return men_rank_[man * num_women_ + woman];
  }
  /// rk_woman(man), 1-based.
  std::size_t woman_rank(std::size_t woman, std::size_t man) const noexcept {
    return women_rank_[woman * num_men_ + man];
  }

  std::vector<std::vector<std::size_t>> men_prefs() const;
  std::vector<std::vector<std::size_t>> women_prefs() const;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.num_men_ == b.num_men_ && a.num_women_ == b.num_women_ &&
           a.men_lists_ == b.men_lists_ && a.women_lists_ == b.women_lists_;
  }

 private:
  std::size_t num_men_ = 0;
  std::size_t num_women_ = 0;
  std::vector<std::size_t> men_lists_;    // num_men x num_women
  std::vector<std::size_t> women_lists_;  // num_women x num_men
  std::vector<std::size_t> men_rank_;
  std::vector<std::size_t> women_rank_;
};

/// rk_a(b). Throws std::domain_error when a and b are on the same side.
std::size_t rank_of(const Instance& inst, AgentId a, AgentId b);

/// A one-to-one partial assignment between men and women. Unassigned agents
/// have no partner (std::nullopt), never a sentinel index.
class Matching {
 public:
  Matching() = default;
  Matching(std::size_t num_men, std::size_t num_women);

  /// Throws std::invalid_argument if an index is out of range or an agent
  /// occurs in more than one pair.
  Matching(std::size_t num_men, std::size_t num_women, std::span<const Pair> pairs);
  Matching(std::size_t num_men, std::size_t num_women, std::initializer_list<Pair> pairs)
      : Matching(num_men, num_women, std::span<const Pair>(pairs.begin(), pairs.size())) {}

  std::size_t num_men() const noexcept { return man_partner_.size(); }
  std::size_t num_women() const noexcept { return woman_partner_.size(); }

  std::optional<std::size_t> partner_of_man(std::size_t man) const { return man_partner_.at(man); }
  std::optional<std::size_t> partner_of_woman(std::size_t woman) const {
    return woman_partner_.at(woman);
  }
  std::optional<AgentId> partner(AgentId a) const;

  bool contains(Pair p) const;
  bool is_assigned(AgentId a) const { return partner(a).has_value(); }

  /// Number of pairs.
  std::size_t size() const noexcept { return size_; }
  bool is_perfect() const noexcept {
    return size_ == num_men() && size_ == num_women();
  }

  /// Pairs sorted by man index.
  std::vector<Pair> pairs() const;

  friend bool operator==(const Matching&, const Matching&) = default;

  /// Lexicographic order on the sorted pair list.
  friend bool operator<(const Matching& a, const Matching& b) { return a.pairs() < b.pairs(); }

 private:
  std::vector<std::optional<std::size_t>> man_partner_;
  std::vector<std::optional<std::size_t>> woman_partner_;
  std::size_t size_ = 0;
};

/// True iff p is not in M, the man prefers the woman to his partner (or is
/// unassigned), and the woman prefers the man to her partner (or is unassigned).
bool is_blocking(const Instance& inst, const Matching& m, Pair p);

/// All blocking pairs in lexicographic order.
std::vector<Pair> blocking_pairs(const Instance& inst, const Matching& m);

std::size_t count_blocking_pairs(const Instance& inst, const Matching& m);

bool is_stable(const Instance& inst, const Matching& m);

/// Sum of rk_a(M(a)) over all assigned agents of both sides.
std::size_t rank_sum(const Instance& inst, const Matching& m);

/// Kendall-tau distance between two orderings of the same items.
std::size_t kendall_distance(std::span<const std::size_t> a, std::span<const std::size_t> b);

/// Minimum number of adjacent swaps turning one profile into the other.
/// Throws std::invalid_argument on a shape mismatch.
std::size_t profile_swap_distance(const Instance& a, const Instance& b);

/// One adjacent transposition: positions `position` and `position + 1` of
/// `agent`'s list are exchanged.
struct Swap {
  AgentId agent;
  std::size_t position = 0;

  friend constexpr auto operator<=>(const Swap&, const Swap&) = default;
};

Instance apply_swaps(const Instance& inst, std::span<const Swap> swaps);

/// Result of deleting agents. The maps send an old index to its new index, or
/// nullopt for deleted agents.
struct Reduction {
  Instance instance;
  std::vector<std::optional<std::size_t>> man_map;
  std::vector<std::optional<std::size_t>> woman_map;

  std::optional<AgentId> map(AgentId a) const;
  std::optional<Pair> map(Pair p) const;
};

Reduction delete_agents(const Instance& inst, std::span<const AgentId> victims);

/// M restricted to surviving agents, expressed in the reduced indices.
Matching restrict_matching(const Matching& m, const Reduction& r);

// Text formats. See README for the grammar.
Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);
Matching parse_matching(std::string_view text, std::size_t num_men, std::size_t num_women);
std::string serialize_matching(const Matching& m);

Instance read_instance_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace matchrobust
