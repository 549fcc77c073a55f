#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace matchrobust {

/// Malformed instance or matching text. `line()` is the 1-based physical line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// More stable matchings exist than the caller allowed us to enumerate.
class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(std::size_t cap)
      : std::runtime_error("more than " + std::to_string(cap) + " stable matchings"), cap_(cap) {}

  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

/// A brute-force search would exceed its configured size limit.
class GuardExceeded : public std::runtime_error {
 public:
  GuardExceeded(const std::string& what, std::size_t limit)
      : std::runtime_error(what + " exceeds guard of " + std::to_string(limit)), limit_(limit) {}

  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t limit_;
};

}  // namespace matchrobust
