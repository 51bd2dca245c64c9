#pragma once

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mm/word.hpp"

namespace mm {

/// Syntax error with a 1-based position (line 0 means "not from a file").
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : std::runtime_error(format(msg, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& msg, std::size_t line, std::size_t column) {
    if (line == 0) return "column " + std::to_string(column) + ": " + msg;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg;
  }
  std::size_t line_, column_;
};

class AlphabetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline bool is_generator_name(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

inline bool is_theta_name(std::string_view s) {
  return s.size() >= 2 && s[0] == '#' && is_generator_name(s.substr(1));
}

/// Ordered set of distinct generator names. Order fixes shortlex enumeration.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!is_generator_name(names_[i]) && !is_theta_name(names_[i]))
        throw AlphabetError("invalid generator name '" + names_[i] + "'");
      if (!index_.emplace(names_[i], i).second)
        throw AlphabetError("duplicate generator '" + names_[i] + "'");
    }
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t g) const { return names_.at(g); }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Parses the word grammar: whitespace-separated `name` or `name^-1`
  /// tokens; `1` is the empty word. `line` is forwarded into errors.
  Word parse(std::string_view text, std::size_t line = 0) const {
    std::vector<Letter> raw;
    std::size_t i = 0;
    while (i < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
        continue;
      }
      const std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      std::string_view token = text.substr(start, i - start);
      if (token == "1") continue;
      int sign = 1;
      if (token.size() > 3 && token.substr(token.size() - 3) == "^-1") {
        sign = -1;
        token.remove_suffix(3);
      }
      auto g = find(token);
      if (!g) {
        throw ParseError("unknown symbol '" + std::string(token) + "'", line, start + 1);
      }
      raw.push_back(letter(*g, sign));
    }
    return Word(std::move(raw));
  }

  std::string format(const Word& w) const {
    if (w.empty()) return "1";
    std::string out;
    for (Letter l : w) {
      if (!out.empty()) out += ' ';
      out += names_.at(generator_of(l));
      if (l < 0) out += "^-1";
    }
    return out;
  }

  bool operator==(const Alphabet& o) const { return names_ == o.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace mm
