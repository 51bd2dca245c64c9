#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mm/decision.hpp"
#include "mm/presentation.hpp"
#include "mm/word.hpp"

namespace mm {

/// Product of conjugates w_i r_i^{sign_i} w_i^-1, in order.
struct RelatorExpression {
  struct Factor {
    Word w;
    std::size_t relator;
    int sign;
    bool operator==(const Factor&) const = default;
  };
  std::vector<Factor> factors;

  std::size_t size() const { return factors.size(); }

  Word expand(const std::vector<Word>& relators) const {
    Word out;
    for (const auto& f : factors) out *= conjugate(power(relators.at(f.relator), f.sign), f.w);
    return out;
  }
};

/// m + ||w_1|| + ||w_m|| + sum ||w_i^-1 w_{i+1}||
inline std::size_t f_value(const RelatorExpression& e) {
  const auto& fs = e.factors;
  if (fs.empty()) return 0;
  std::size_t out = fs.size() + fs.front().w.size() + fs.back().w.size();
  for (std::size_t i = 0; i + 1 < fs.size(); ++i) out += (fs[i].w.inverse() * fs[i + 1].w).size();
  return out;
}

struct SearchLimits {
  std::size_t steps = 2'000'000;
  double cap_factor = 2.0;  // delta_of: intermediate words longer than factor*(|g|+max|r|) are dropped
};

namespace detail {

inline void require_trivial(const Presentation& p, const Word& g) {
  if (p.word_problem(g).is_false()) {
    throw std::invalid_argument("word is not trivial in the group");
  }
}

}  // namespace detail

/// Least number of relator conjugates whose product is g, by breadth-first
/// relator insertion from g down to the empty word.
inline Decision<RelatorExpression> delta_of(const Presentation& p, const Word& g,
                                            const SearchLimits& limits = {}) {
  detail::require_trivial(p, g);
  if (g.empty()) return Decision<RelatorExpression>::yes({});
  const auto shifts = relator_shifts(p.relators());
  const auto cap = static_cast<std::size_t>(
      std::floor(limits.cap_factor * static_cast<double>(g.size() + p.max_relator_length())));
  struct Parent {
    Word prev;
    std::size_t position;
    std::size_t shift;
  };
  std::unordered_map<Word, Parent, WordHash> parent;
  parent.emplace(g, Parent{});
  std::vector<Word> frontier{g};
  std::optional<std::size_t> first_pruned_depth;
  std::size_t spent = 0;
  for (std::size_t depth = 1; !frontier.empty(); ++depth) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (std::size_t pos = 0; pos <= w.size(); ++pos) {
        for (std::size_t s = 0; s < shifts.size(); ++s) {
          if (++spent > limits.steps) {
            return Decision<RelatorExpression>::unknown(limits.steps, "step budget exhausted");
          }
          count_step();
          Word v = insert_at(w, pos, shifts[s].word);
          if (v.size() > cap) {
            if (!first_pruned_depth) first_pruned_depth = depth;
            continue;
          }
          if (!parent.emplace(v, Parent{w, pos, s}).second) continue;
          if (!v.empty()) {
            next.push_back(std::move(v));
            continue;
          }
          // a dropped word at depth k could only beat this path if k + 1 < depth
          if (first_pruned_depth && *first_pruned_depth + 1 < depth) {
            return Decision<RelatorExpression>::unknown(cap, "length cap bound the search");
          }
          // each step multiplied by u r' u^-1 with u a prefix; invert the chain
          RelatorExpression e;
          Word cur;
          while (!(cur == g)) {
            const Parent& par = parent.at(cur);
            const RelatorShift& sh = shifts[par.shift];
            Word u = par.prev.slice(0, par.position) * sh.prefix(p.relators()).inverse();
            e.factors.push_back({u, sh.relator, -sh.sign});
            cur = par.prev;
          }
          // collected from the empty word back to g; g = c_0^-1 ... c_{d-1}^-1
          std::reverse(e.factors.begin(), e.factors.end());
          return Decision<RelatorExpression>::yes(std::move(e));
        }
      }
    }
    frontier = std::move(next);
  }
  return Decision<RelatorExpression>::unknown(cap, "length cap bound the search");
}

namespace detail {

struct PairHash {
  std::size_t operator()(const std::pair<Word, Word>& s) const noexcept {
    WordHash h;
    return h(s.first) * 0x100000001b3ULL ^ h(s.second);
  }
};

// Breadth-first search over (position, partial product) for every target at
// once. Moving the position by one letter or placing one relator costs 1.
inline std::unordered_map<Word, RelatorExpression, WordHash> lambda_search(
    const Presentation& p, const std::vector<Word>& targets, std::size_t steps, bool& exhausted) {
  std::unordered_map<Word, RelatorExpression, WordHash> found;
  std::unordered_set<Word, WordHash> wanted(targets.begin(), targets.end());
  exhausted = false;
  struct Node {
    Word pos, product;
    std::size_t parent;
    int relator_sign;  // 0 for a move
    std::size_t relator;
  };
  std::vector<Node> nodes{{Word{}, Word{}, 0, 0, 0}};
  std::unordered_set<std::pair<Word, Word>, PairHash> seen{{Word{}, Word{}}};
  auto record = [&](std::size_t idx) {
    RelatorExpression e;
    for (std::size_t i = idx; i != 0; i = nodes[i].parent) {
      if (nodes[i].relator_sign != 0) {
        e.factors.push_back({nodes[i].pos, nodes[i].relator, nodes[i].relator_sign});
      }
    }
    std::reverse(e.factors.begin(), e.factors.end());
    found.emplace(nodes[idx].product, std::move(e));
    wanted.erase(nodes[idx].product);
  };
  if (wanted.count(Word{})) record(0);
  std::vector<Letter> letters;
  for (std::size_t g = 0; g < p.generator_count(); ++g) {
    letters.push_back(letter(g, 1));
    letters.push_back(letter(g, -1));
  }
  std::size_t level_start = 0;
  std::size_t spent = 0;
  while (!wanted.empty() && level_start < nodes.size()) {
    const std::size_t level_end = nodes.size();
    for (std::size_t i = level_start; i < level_end && !wanted.empty(); ++i) {
      auto expand = [&](Word pos, Word product, int sign, std::size_t relator) {
        count_step();
        if (!seen.emplace(pos, product).second) return;
        nodes.push_back({std::move(pos), std::move(product), i, sign, relator});
        if (nodes.back().pos.empty() && wanted.count(nodes.back().product)) record(nodes.size() - 1);
      };
      if (++spent > steps) {
        exhausted = true;
        return found;
      }
      const Word pos = nodes[i].pos, product = nodes[i].product;
      for (Letter l : letters) expand(pos * Word{l}, product, 0, 0);
      for (std::size_t r = 0; r < p.relators().size(); ++r) {
        for (int sign : {1, -1}) {
          expand(pos, product * conjugate(power(p.relators()[r], sign), pos), sign, r);
        }
      }
    }
    level_start = level_end;
  }
  return found;
}

}  // namespace detail

/// Cheapest expression of g under f_value.
inline Decision<RelatorExpression> lambda_of(const Presentation& p, const Word& g,
                                             const SearchLimits& limits = {}) {
  detail::require_trivial(p, g);
  bool exhausted = false;
  auto found = detail::lambda_search(p, {g}, limits.steps, exhausted);
  auto it = found.find(g);
  if (it == found.end()) return Decision<RelatorExpression>::unknown(limits.steps, "step budget exhausted");
  return Decision<RelatorExpression>::yes(it->second);
}

/// Trivial words of length <= n in shortlex order; nullopt if the oracle
/// could not decide some candidate.
inline std::optional<std::vector<Word>> trivial_words_up_to(const Presentation& p, std::size_t n) {
  std::vector<Word> out;
  bool undecided = false;
  auto gens = p.generators();
  for_each_word_up_to(gens, n, [&](const Word& w) {
    auto a = p.word_problem(w);
    if (a.is_unknown()) {
      undecided = true;
      return false;
    }
    if (a.is_true()) out.push_back(w);
    return true;
  });
  if (undecided) return std::nullopt;
  return out;
}

/// max delta(g) over trivial g with ||g|| <= n (0 over the empty set).
inline Decision<long> dehn_function(const Presentation& p, std::size_t n,
                                    const SearchLimits& limits = {}) {
  auto words = trivial_words_up_to(p, n);
  if (!words) return Decision<long>::unknown(n, "word problem undecided");
  long best = 0;
  for (const Word& g : *words) {
    auto d = delta_of(p, g, limits);
    if (!d.is_yes()) return Decision<long>::unknown(d.bound, d.reason);
    best = std::max(best, static_cast<long>(d.value().size()));
  }
  return Decision<long>::yes(best);
}

/// max lambda(g) over trivial g with ||g|| <= n (0 over the empty set).
inline Decision<long> lambda_function(const Presentation& p, std::size_t n,
                                      const SearchLimits& limits = {}) {
  auto words = trivial_words_up_to(p, n);
  if (!words) return Decision<long>::unknown(n, "word problem undecided");
  bool exhausted = false;
  auto found = detail::lambda_search(p, *words, limits.steps, exhausted);
  long best = 0;
  for (const Word& g : *words) {
    auto it = found.find(g);
    if (it == found.end()) return Decision<long>::unknown(limits.steps, "step budget exhausted");
    best = std::max(best, static_cast<long>(f_value(it->second)));
  }
  return Decision<long>::yes(best);
}

}  // namespace mm
