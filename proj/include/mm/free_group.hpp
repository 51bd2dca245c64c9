#pragma once

#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "mm/decision.hpp"
#include "mm/stallings.hpp"
#include "mm/word.hpp"

namespace mm {

struct ConjugacyCertificate {
  Word conjugator;  // conjugate(source, conjugator) == target
  Word root;        // primitive root of the source; conjugators form conjugator * <root>
};

struct PrimitiveRoot {
  Word root;
  long exponent = 1;
};

/// a = root^exponent with root not a proper power. Throws on the empty word.
inline PrimitiveRoot primitive_root(const Word& a) {
  if (a.empty()) throw std::invalid_argument("primitive_root of the empty word");
  auto [core, c] = cyclic_reduce(a);
  const std::size_t n = core.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = core[i] == core[i - d];
    if (periodic) return {c * core.slice(0, d) * c.inverse(), static_cast<long>(n / d)};
  }
  return {a, 1};  // unreachable: d = n always works
}

/// Exact free-group conjugacy by rotation matching of cyclic cores.
inline Decision<ConjugacyCertificate> free_conjugacy(const Word& a, const Word& b) {
  if (a.size() % 2 != b.size() % 2) return Decision<ConjugacyCertificate>::no();
  auto [ca_core, ca] = cyclic_reduce(a);
  auto [cb_core, cb] = cyclic_reduce(b);
  if (ca_core.size() != cb_core.size()) return Decision<ConjugacyCertificate>::no();
  Word root = a.empty() ? Word{} : primitive_root(a).root;
  const std::size_t n = ca_core.size();
  for (std::size_t k = 0; k < std::max<std::size_t>(n, 1); ++k) {
    bool match = true;
    for (std::size_t i = 0; i < n && match; ++i) match = ca_core[(i + k) % n] == cb_core[i];
    if (!match) continue;
    Word gamma = cb * ca_core.slice(0, k).inverse() * ca.inverse();
    return Decision<ConjugacyCertificate>::yes({gamma, root});
  }
  return Decision<ConjugacyCertificate>::no();
}

/// b == a^m for some m.
inline Decision<long> power_membership(const Word& a, const Word& b) {
  if (b.empty()) return Decision<long>::yes(0);
  if (a.empty()) return Decision<long>::no();
  auto ra = primitive_root(a);
  auto rb = primitive_root(b);
  long sign = 0;
  if (rb.root == ra.root) sign = 1;
  else if (rb.root == ra.root.inverse()) sign = -1;
  if (sign == 0 || rb.exponent % ra.exponent != 0) return Decision<long>::no();
  return Decision<long>::yes(sign * (rb.exponent / ra.exponent));
}

/// Solution set of a simultaneous conjugacy problem s a_i s^-1 = b_i:
/// empty, everything, a coset base*<root>, or the single element base.
struct ConjugatorSet {
  enum class Kind { empty, all, coset, single };
  Kind kind = Kind::empty;
  Word base;
  Word root;

  bool is_empty() const { return kind == Kind::empty; }

  bool contains(const Word& s) const {
    switch (kind) {
      case Kind::empty: return false;
      case Kind::all: return true;
      case Kind::single: return s == base;
      case Kind::coset: return power_membership(root, base.inverse() * s).is_yes();
    }
    return false;
  }
};

namespace detail {

// Exponents m with conjugate(a, base*root^m) == b, searched in 0,1,-1,2,-2,...
// up to a length bound past which the conjugate only grows.
inline std::vector<long> coset_exponents(const Word& base, const Word& root, const Word& a,
                                         const Word& b) {
  const Word target = base.inverse() * b * base;
  const std::size_t rlen = cyclic_reduce(root).core.size();
  const long bound = static_cast<long>((a.size() + b.size() + 2 * base.size() + 3 * root.size()) /
                                       std::max<std::size_t>(rlen, 1)) + 2;
  std::vector<long> out;
  Word pos, neg;  // root^m and root^-m
  const Word root_inv = root.inverse();
  for (long m = 0; m <= bound; ++m) {
    count_step();
    if (conjugate(a, pos) == target) out.push_back(m);
    if (m > 0 && conjugate(a, neg) == target) out.push_back(-m);
    pos *= root;
    neg *= root_inv;
  }
  return out;
}

}  // namespace detail

/// All s with conjugate(as[i], s) == bs[i] for every i.
inline ConjugatorSet list_conjugators(const std::vector<Word>& as, const std::vector<Word>& bs) {
  if (as.size() != bs.size()) throw std::invalid_argument("list conjugacy: arity mismatch");
  using Kind = ConjugatorSet::Kind;
  ConjugatorSet set{Kind::all, {}, {}};
  for (std::size_t i = 0; i < as.size(); ++i) {
    const Word &a = as[i], &b = bs[i];
    switch (set.kind) {
      case Kind::empty: return set;
      case Kind::single:
        if (conjugate(a, set.base) != b) return {Kind::empty, {}, {}};
        break;
      case Kind::all: {
        if (a.empty() || b.empty()) {
          if (a.empty() != b.empty()) return {Kind::empty, {}, {}};
          break;
        }
        auto d = free_conjugacy(a, b);
        if (!d.is_yes()) return {Kind::empty, {}, {}};
        set = {Kind::coset, d.value().conjugator, d.value().root};
        break;
      }
      case Kind::coset: {
        if (a.empty() || b.empty()) {
          if (a.empty() != b.empty()) return {Kind::empty, {}, {}};
          break;
        }
        if (power_membership(set.root, a).is_yes()) {
          // a commutes with the whole coset's root
          if (conjugate(a, set.base) != b) return {Kind::empty, {}, {}};
          break;
        }
        auto ms = detail::coset_exponents(set.base, set.root, a, b);
        if (ms.empty()) return {Kind::empty, {}, {}};
        set = {Kind::single, set.base * power(set.root, ms.front()), {}};
        break;
      }
    }
  }
  return set;
}

/// Some s with conjugate(as[i], s) == bs[i] for all i, preferring the
/// coset base (which is 1 when every pair is trivial).
inline Decision<Word> free_list_conjugacy(const std::vector<Word>& as,
                                          const std::vector<Word>& bs) {
  auto set = list_conjugators(as, bs);
  if (set.is_empty()) return Decision<Word>::no();
  return Decision<Word>::yes(set.base);
}

/// Generator g (shortlex-minimal among g, g^-1) of the intersection of the
/// cyclic subgroups <v_i>. Empty input means the whole group and is rejected.
inline Word cyclic_intersection(const std::vector<Word>& vs) {
  if (vs.empty()) throw std::invalid_argument("cyclic_intersection of an empty family");
  for (const Word& v : vs) {
    if (v.empty()) return {};
  }
  FoldedGraph g = FoldedGraph::from_generators(std::span<const Word>(&vs[0], 1));
  for (std::size_t i = 1; i < vs.size(); ++i) {
    g = FoldedGraph::pullback(g, FoldedGraph::from_generators(std::span<const Word>(&vs[i], 1)));
  }
  auto basis = g.basis();
  if (basis.size() > 1) throw std::logic_error("intersection of cyclic subgroups is not cyclic");
  if (basis.empty()) return {};
  Word gen = basis.front();
  Word inv = gen.inverse();
  return shortlex_less(inv, gen) ? inv : gen;
}

}  // namespace mm
