#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mm/decision.hpp"
#include "mm/word.hpp"

namespace mm {

class EnumerationLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Regular representation of a finite group given by a presentation, found
/// by HLT coset enumeration over the trivial subgroup. Coset 0 is the identity.
class CosetTable {
 public:
  CosetTable(std::size_t generators, const std::vector<Word>& relators, std::size_t max_cosets)
      : cols_(2 * generators), limit_(max_cosets) {
    new_coset();
    for (std::size_t a = 0; a < live_count_total(); ++a) {
      if (!live(a)) continue;
      for (const Word& r : relators) {
        scan_and_fill(a, r);
        if (!live(a)) break;
      }
      for (std::size_t x = 0; x < cols_ && live(a); ++x) {
        if (at(a, x) < 0) define(a, x);
      }
    }
    compact();
  }

  std::size_t size() const { return rows_; }

  std::size_t act(std::size_t coset, Letter l) const {
    return static_cast<std::size_t>(table_[coset * cols_ + column(l)]);
  }

  std::size_t trace(const Word& w, std::size_t from = 0) const {
    for (Letter l : w) from = act(from, l);
    return from;
  }

 private:
  static std::size_t column(Letter l) { return 2 * generator_of(l) + (l < 0 ? 1 : 0); }
  static std::size_t inv(std::size_t x) { return x ^ 1U; }

  std::size_t live_count_total() const { return parent_.size(); }
  bool live(std::size_t c) const { return parent_[c] == static_cast<std::int64_t>(c); }
  std::int64_t& at(std::size_t c, std::size_t x) { return table_[c * cols_ + x]; }

  std::size_t new_coset() {
    if (parent_.size() >= limit_) {
      throw EnumerationLimit("coset enumeration exceeded " + std::to_string(limit_) + " cosets");
    }
    count_step();
    parent_.push_back(static_cast<std::int64_t>(parent_.size()));
    table_.resize(table_.size() + cols_, -1);
    return parent_.size() - 1;
  }

  void define(std::size_t c, std::size_t x) {
    std::size_t d = new_coset();
    at(c, x) = static_cast<std::int64_t>(d);
    at(d, inv(x)) = static_cast<std::int64_t>(c);
  }

  std::size_t rep(std::size_t c) {
    std::size_t r = c;
    while (parent_[r] != static_cast<std::int64_t>(r)) r = static_cast<std::size_t>(parent_[r]);
    while (parent_[c] != static_cast<std::int64_t>(r)) {
      std::size_t next = static_cast<std::size_t>(parent_[c]);
      parent_[c] = static_cast<std::int64_t>(r);
      c = next;
    }
    return r;
  }

  void merge(std::size_t k, std::size_t l, std::vector<std::size_t>& queue) {
    k = rep(k);
    l = rep(l);
    if (k == l) return;
    if (l < k) std::swap(k, l);
    parent_[l] = static_cast<std::int64_t>(k);
    queue.push_back(l);
  }

  void coincidence(std::size_t a, std::size_t b) {
    std::vector<std::size_t> queue;
    merge(a, b, queue);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const std::size_t e = queue[i];
      for (std::size_t x = 0; x < cols_; ++x) {
        if (at(e, x) < 0) continue;
        const std::size_t f = static_cast<std::size_t>(at(e, x));
        at(f, inv(x)) = -1;
        const std::size_t e1 = rep(e), f1 = rep(f);
        if (at(e1, x) >= 0) {
          merge(f1, static_cast<std::size_t>(at(e1, x)), queue);
        } else if (at(f1, inv(x)) >= 0) {
          merge(e1, static_cast<std::size_t>(at(f1, inv(x))), queue);
        } else {
          at(e1, x) = static_cast<std::int64_t>(f1);
          at(f1, inv(x)) = static_cast<std::int64_t>(e1);
        }
      }
    }
  }

  void scan_and_fill(std::size_t a, const Word& w) {
    long i = 0, j = static_cast<long>(w.size()) - 1;
    std::size_t f = a, b = a;
    for (;;) {
      while (i <= j && at(f, column(w[i])) >= 0) {
        f = static_cast<std::size_t>(at(f, column(w[i])));
        ++i;
      }
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && at(b, inv(column(w[j]))) >= 0) {
        b = static_cast<std::size_t>(at(b, inv(column(w[j]))));
        --j;
      }
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        // deduction
        at(f, column(w[i])) = static_cast<std::int64_t>(b);
        at(b, inv(column(w[i]))) = static_cast<std::int64_t>(f);
        return;
      }
      define(f, column(w[i]));
    }
  }

  void compact() {
    std::vector<std::int64_t> number(parent_.size(), -1);
    rows_ = 0;
    for (std::size_t c = 0; c < parent_.size(); ++c) {
      if (live(c)) number[c] = static_cast<std::int64_t>(rows_++);
    }
    std::vector<std::int64_t> out(rows_ * cols_, -1);
    for (std::size_t c = 0; c < parent_.size(); ++c) {
      if (!live(c)) continue;
      for (std::size_t x = 0; x < cols_; ++x) {
        std::int64_t d = at(c, x);
        if (d < 0) throw std::logic_error("coset table incomplete after enumeration");
        out[static_cast<std::size_t>(number[c]) * cols_ + x] = number[rep(static_cast<std::size_t>(d))];
      }
    }
    table_ = std::move(out);
    parent_.clear();
  }

  std::size_t cols_;
  std::size_t limit_;
  std::size_t rows_ = 0;
  std::vector<std::int64_t> table_;
  std::vector<std::int64_t> parent_;
};

}  // namespace mm
