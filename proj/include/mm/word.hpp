#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mm {

/// A signed generator: +(i+1) is generator i, -(i+1) its inverse.
using Letter = std::int32_t;

constexpr Letter letter(std::size_t generator, int sign = 1) {
  auto l = static_cast<Letter>(generator + 1);
  return sign < 0 ? -l : l;
}
constexpr std::size_t generator_of(Letter l) {
  return static_cast<std::size_t>(l < 0 ? -l : l) - 1;
}
constexpr int sign_of(Letter l) { return l < 0 ? -1 : 1; }

/// Shortlex key of a single letter: generator order first, then + before -.
constexpr std::uint32_t letter_key(Letter l) {
  return static_cast<std::uint32_t>(2 * generator_of(l) + (l < 0 ? 1 : 0));
}

/// Freely reduced word in a free group. Reduction happens on construction,
/// so every Word value is reduced.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> raw) : letters_(std::move(raw)) { reduce_in_place(); }
  Word(std::initializer_list<Letter> raw) : letters_(raw) { reduce_in_place(); }

  static Word generator(std::size_t g, int sign = 1) { return Word{letter(g, sign)}; }

  std::span<const Letter> letters() const { return letters_; }
  const std::vector<Letter>& vec() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  Word inverse() const {
    std::vector<Letter> out(letters_.rbegin(), letters_.rend());
    for (auto& l : out) l = -l;
    Word w;
    w.letters_ = std::move(out);
    return w;
  }

  /// Subword [from, from+count) of a reduced word is reduced.
  Word slice(std::size_t from, std::size_t count) const {
    Word w;
    w.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(from),
                      letters_.begin() + static_cast<std::ptrdiff_t>(from + count));
    return w;
  }

  bool contains_generator(std::size_t g) const {
    return std::any_of(letters_.begin(), letters_.end(),
                       [g](Letter l) { return generator_of(l) == g; });
  }

  friend Word operator*(const Word& u, const Word& v) {
    // cancel at the seam only; both sides are already reduced
    std::size_t i = 0;
    const std::size_t n = u.size(), m = v.size();
    while (i < n && i < m && u.letters_[n - 1 - i] == -v.letters_[i]) ++i;
    Word w;
    w.letters_.reserve(n + m - 2 * i);
    w.letters_.insert(w.letters_.end(), u.letters_.begin(),
                      u.letters_.end() - static_cast<std::ptrdiff_t>(i));
    w.letters_.insert(w.letters_.end(), v.letters_.begin() + static_cast<std::ptrdiff_t>(i),
                      v.letters_.end());
    return w;
  }
  Word& operator*=(const Word& v) { return *this = *this * v; }

  friend bool operator==(const Word&, const Word&) = default;

 private:
  void reduce_in_place() {
    std::size_t top = 0;
    for (Letter l : letters_) {
      if (l == 0) throw std::invalid_argument("letter 0 is not a generator");
      if (top > 0 && letters_[top - 1] == -l) {
        --top;
      } else {
        letters_[top++] = l;
      }
    }
    letters_.resize(top);
  }

  std::vector<Letter> letters_;
};

/// Free reduction of a raw letter sequence.
inline Word reduce(std::vector<Letter> raw) { return Word(std::move(raw)); }
inline Word invert(const Word& w) { return w.inverse(); }
inline Word concat(const Word& u, const Word& v) { return u * v; }
/// g w g^-1
inline Word conjugate(const Word& w, const Word& g) { return g * w * g.inverse(); }

inline Word power(const Word& w, long exponent) {
  Word base = exponent < 0 ? w.inverse() : w;
  Word out;
  for (long i = 0, n = std::labs(exponent); i < n; ++i) out *= base;
  return out;
}

/// Strict shortlex order: length, then letter keys lexicographically.
inline bool shortlex_less(const Word& u, const Word& v) {
  if (u.size() != v.size()) return u.size() < v.size();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] != v[i]) return letter_key(u[i]) < letter_key(v[i]);
  }
  return false;
}

struct ShortlexLess {
  bool operator()(const Word& u, const Word& v) const { return shortlex_less(u, v); }
};

struct CyclicReduction {
  Word core;
  Word conj;  // conj * core * conj^-1 == input
};

inline CyclicReduction cyclic_reduce(const Word& w) {
  std::size_t i = 0;
  const std::size_t n = w.size();
  while (2 * i + 1 < n && w[i] == -w[n - 1 - i]) ++i;
  return {w.slice(i, n - 2 * i), w.slice(0, i)};
}

inline bool is_cyclically_reduced(const Word& w) {
  return w.size() < 2 || w.front() != -w.back();
}

/// Rotation w[k:] w[:k] of a word (caller ensures the result is reduced,
/// e.g. w cyclically reduced).
inline Word rotate(const Word& w, std::size_t k) {
  std::vector<Letter> out(w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
  out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
  return Word(std::move(out));
}

/// Visit every reduced word of length exactly `length` over the given
/// generators (in alphabet order), in shortlex order. The visitor returns
/// false to stop; the function returns false if stopped.
inline bool for_each_word_of_length(std::span<const std::size_t> generators, std::size_t length,
                                    const std::function<bool(const Word&)>& visit) {
  std::vector<Letter> letters;
  letters.reserve(2 * generators.size());
  for (auto g : generators) {
    letters.push_back(letter(g, 1));
    letters.push_back(letter(g, -1));
  }
  std::sort(letters.begin(), letters.end(),
            [](Letter a, Letter b) { return letter_key(a) < letter_key(b); });
  std::vector<Letter> buf(length);
  std::function<bool(std::size_t)> rec = [&](std::size_t pos) -> bool {
    if (pos == length) return visit(Word(buf));
    for (Letter l : letters) {
      if (pos > 0 && buf[pos - 1] == -l) continue;
      buf[pos] = l;
      if (!rec(pos + 1)) return false;
    }
    return true;
  };
  return rec(0);
}

/// All reduced words of length <= max_length in shortlex order.
inline bool for_each_word_up_to(std::span<const std::size_t> generators, std::size_t max_length,
                                const std::function<bool(const Word&)>& visit) {
  for (std::size_t len = 0; len <= max_length; ++len) {
    if (!for_each_word_of_length(generators, len, visit)) return false;
  }
  return true;
}

inline std::vector<Word> words_up_to(std::span<const std::size_t> generators,
                                     std::size_t max_length) {
  std::vector<Word> out;
  for_each_word_up_to(generators, max_length, [&](const Word& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL ^ w.size();
    for (Letter l : w) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(l)) + 0x9e3779b97f4a7c15ULL +
           (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace mm
