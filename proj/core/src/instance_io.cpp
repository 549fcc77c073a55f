#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "matchrobust/errors.hpp"
#include "matchrobust/model.hpp"

namespace matchrobust {

namespace {

struct Line {
  std::size_t number;
  std::string_view text;
};

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r") == std::string_view::npos;
}

bool is_comment(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  return first != std::string_view::npos && s[first] == '#';
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  /// Next line that is not a comment. Blank lines are skipped unless
  /// `keep_blank` is set. Returns false at end of input.
  bool next(Line& out, bool keep_blank) {
    while (pos_ <= text_.size()) {
      if (pos_ == text_.size()) {
        pos_ = text_.size() + 1;
        return false;
      }
      auto end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++number_;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (is_comment(line)) continue;
      if (!keep_blank && is_blank(line)) continue;
      out = {number_, line};
      return true;
    }
    return false;
  }

  std::size_t last_line() const { return number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

std::vector<std::size_t> parse_numbers(const Line& line) {
  std::vector<std::size_t> out;
  const char* p = line.text.data();
  const char* end = p + line.text.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    if (p == end) break;
    std::size_t value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t')) {
      throw ParseError(line.number, "expected a non-negative integer");
    }
    out.push_back(value);
    p = next;
  }
  return out;
}

std::vector<std::size_t> parse_list(const Line& line, std::size_t expected) {
  auto values = parse_numbers(line);
  if (values.size() != expected) {
    throw ParseError(line.number, "expected " + std::to_string(expected) + " entries");
  }
  std::vector<bool> seen(expected, false);
  for (auto v : values) {
    if (v >= expected) throw ParseError(line.number, "index " + std::to_string(v) + " out of range");
    if (seen[v]) throw ParseError(line.number, "not a permutation");
    seen[v] = true;
  }
  return values;
}

void append_list(std::string& out, std::span<const std::size_t> list) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(list[i]);
  }
  out += '\n';
}

}  // namespace

Instance parse_instance(std::string_view text) {
  LineReader reader(text);
  Line line{};
  if (!reader.next(line, false)) throw ParseError(reader.last_line() + 1, "missing header \"n m\"");
  const auto header = parse_numbers(line);
  if (header.size() != 2) throw ParseError(line.number, "malformed header, expected \"n m\"");
  const std::size_t n = header[0];
  const std::size_t m = header[1];

  std::vector<std::vector<std::size_t>> men(n), women(m);
  for (std::size_t u = 0; u < n; ++u) {
    if (!reader.next(line, m == 0)) throw ParseError(reader.last_line() + 1, "missing preference list");
    men[u] = parse_list(line, m);
  }
  for (std::size_t w = 0; w < m; ++w) {
    if (!reader.next(line, n == 0)) throw ParseError(reader.last_line() + 1, "missing preference list");
    women[w] = parse_list(line, n);
  }
  if (reader.next(line, false)) throw ParseError(line.number, "unexpected trailing content");
  return Instance(std::move(men), std::move(women));
}

std::string serialize_instance(const Instance& inst) {
  std::string out = std::to_string(inst.num_men()) + " " + std::to_string(inst.num_women()) + "\n";
  for (std::size_t u = 0; u < inst.num_men(); ++u) append_list(out, inst.man_list(u));
  for (std::size_t w = 0; w < inst.num_women(); ++w) append_list(out, inst.woman_list(w));
  return out;
}

Matching parse_matching(std::string_view text, std::size_t num_men, std::size_t num_women) {
  LineReader reader(text);
  Line line{};
  std::vector<Pair> pairs;
  std::vector<bool> man_used(num_men, false), woman_used(num_women, false);
  while (reader.next(line, false)) {
    const auto values = parse_numbers(line);
    if (values.size() != 2) throw ParseError(line.number, "expected \"man woman\"");
    if (values[0] >= num_men || values[1] >= num_women) {
      throw ParseError(line.number, "index out of range");
    }
    if (man_used[values[0]] || woman_used[values[1]]) {
      throw ParseError(line.number, "agent occurs in more than one pair");
    }
    man_used[values[0]] = woman_used[values[1]] = true;
    pairs.push_back({values[0], values[1]});
  }
  return Matching(num_men, num_women, pairs);
}

std::string serialize_matching(const Matching& m) {
  std::string out;
  for (const auto& p : m.pairs()) {
    out += std::to_string(p.man) + " " + std::to_string(p.woman) + "\n";
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << contents;
  if (!out) throw std::ios_base::failure("write failed for " + path);
}

Instance read_instance_file(const std::string& path) { return parse_instance(read_text_file(path)); }

}  // namespace matchrobust
