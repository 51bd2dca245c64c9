#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mm/decision.hpp"
#include "mm/free_group.hpp"
#include "mm/iclc.hpp"
#include "mm/miller.hpp"

namespace mm {

using ConjDecision = Decision<Word>;

struct ConjParams {
  double c = 2.0;                     // constant in the step-1 radius 3*C*t^2*(|x|+|y|)
  std::size_t iclc_bound = 6;
  bool iclc_certified = false;        // treat iclc_bound as a proven bound
  std::size_t step_budget = 20'000;   // candidates tried by each brute search
};

/// Shortlex search for gamma with gamma x gamma^-1 = y over the given generators
/// (default: every Miller generator). Never answers No.
inline ConjDecision brute_conjugator_search(const MillerAlphabet& ma, const Word& x, const Word& y,
                                            std::size_t radius, std::size_t budget = SIZE_MAX,
                                            std::optional<std::vector<std::size_t>> gens = std::nullopt) {
  const std::vector<std::size_t> letters = gens ? *gens : ma.all_generators();
  const NormalForm target = normalize(ma, y);
  std::optional<Word> found;
  std::size_t spent = 0;
  bool exhausted = false;
  for_each_word_up_to(letters, radius, [&](const Word& g) {
    if (spent++ >= budget) {
      exhausted = true;
      return false;
    }
    count_step();
    if (normalize(ma, g * x * g.inverse()) == target) {
      found = g;
      return false;
    }
    return true;
  });
  if (found) return ConjDecision::yes(*found);
  return ConjDecision::unknown(radius, exhausted ? "step budget exhausted" : "radius exhausted");
}

namespace detail {

// Rotations of a word over X and q that start at a q-letter; `prefix` is what
// was moved to the back, so rotation = prefix^-1 w prefix.
struct Rotation {
  Word word;
  Word prefix;
};

inline std::vector<Rotation> q_rotations(const MillerAlphabet& ma, const Word& w) {
  std::vector<Rotation> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (generator_of(w[i]) != ma.q()) continue;
    Word prefix = w.slice(0, i);
    out.push_back({prefix.inverse() * w * prefix, prefix});
  }
  if (out.empty()) out.push_back({w, Word{}});
  return out;
}

inline std::size_t step1_radius(const MillerAlphabet& ma, const Word& x, const Word& y, double c) {
  const double t = static_cast<double>(ma.base().t());
  const double r = 3.0 * c * t * t * static_cast<double>(x.size() + y.size());
  return static_cast<std::size_t>(std::ceil(r));
}

}  // namespace detail

/// Conjugacy in M(G). Yes carries gamma with gamma x gamma^-1 = y.
inline ConjDecision conjugate_in_mg(const MillerAlphabet& ma, const Word& x, const Word& y,
                                    const ConjParams& params = {}) {
  ma.check(x);
  ma.check(y);
  // 1. bounded brute force
  auto brute = brute_conjugator_search(ma, x, y, detail::step1_radius(ma, x, y, params.c), params.step_budget);
  if (brute.is_yes()) return brute;

  // 2-3. weak regularity is a conjugacy invariant
  const MgCyclicReduction rx = cyclic_reduce_mg(ma, x), ry = cyclic_reduce_mg(ma, y);
  if (rx.weakly_regular != ry.weakly_regular) return ConjDecision::no("exactly one side is weakly regular");
  // the Theta-image in the free group on Theta is also invariant
  if (!free_conjugacy(rx.core.tau, ry.core.tau).is_yes()) return ConjDecision::no("Theta parts not conjugate");

  // 4. weakly regular pairs need an external algorithm; only search
  if (rx.weakly_regular) {
    auto again = brute_conjugator_search(ma, rx.core.word(), ry.core.word(), brute.bound, params.step_budget,
                                         ma.q_free_generators());
    if (again.is_yes()) {
      Word gamma = ry.conj * again.value() * rx.conj.inverse();
      if (!equal_in_mg(ma, gamma * x * gamma.inverse(), y)) throw std::logic_error("conjugator failed verification");
      return ConjDecision::yes(gamma);
    }
    return ConjDecision::unknown(brute.bound, "BMR-external");
  }

  // 5. both cores lie over X and q: try every pair of q-rotations
  ApproxOptions ao;
  ao.iclc.bound = params.iclc_bound;
  ao.iclc.certified = params.iclc_certified;
  std::optional<Word> best;
  bool all_no = true;
  std::string why;
  for (const auto& a : detail::q_rotations(ma, rx.core.alpha)) {
    for (const auto& b : detail::q_rotations(ma, ry.core.alpha)) {
      auto d = approx_decide(ma, a.word, b.word, ao);
      if (d.is_yes()) {
        // b = g a g^-1, a = pa^-1 core_x pa, core_x = cx^-1 x cx
        Word gamma = ry.conj * b.prefix * d.value().gamma * a.prefix.inverse() * rx.conj.inverse();
        if (!best || shortlex_less(gamma, *best)) best = std::move(gamma);
      } else if (d.is_unknown()) {
        all_no = false;
        why = d.reason;
      }
    }
  }
  if (best) {
    if (!equal_in_mg(ma, *best * x * best->inverse(), y)) throw std::logic_error("conjugator failed verification");
    return ConjDecision::yes(*best);
  }
  // 6.
  if (all_no) return ConjDecision::no("every rotation pair refuted");
  return ConjDecision::unknown(params.iclc_bound, why);
}

/// b in <a>_G (yes/no), decided through a conjugacy question in M(G). The pair used
/// only sees the primitive root rho of a; when a = rho^e with e > 1 the
/// exponent found for rho is reduced modulo <rho^e> by the oracle.
inline Decision<bool> csm_via_conjugacy(const MillerAlphabet& ma, const Word& a, const Word& b,
                                        const ConjParams& params = {}) {
  using D = Decision<bool>;
  const Presentation& p = ma.base();
  if (!ma.is_x_word(a) || !ma.is_x_word(b)) throw std::invalid_argument("csm_via_conjugacy needs words over X");
  auto bt = p.word_problem(b);
  if (bt.is_true()) return D::yes(true);
  auto at = p.word_problem(a);
  if (at.is_true()) return bt.is_false() ? D::no("a is trivial and b is not") : D::unknown(bt.bound, "word problem undecided");
  if (at.is_unknown()) return D::unknown(at.bound, "word problem undecided");

  const Word q{ma.q_letter()};
  const Word x = q * a * q.inverse() * a;
  const Word y = q * a * q.inverse() * conjugate(a, b);
  auto c = conjugate_in_mg(ma, x, y, params);
  if (c.is_no()) return D::no(c.reason);
  if (c.is_unknown()) return D::unknown(c.bound, c.reason);

  const PrimitiveRoot pr = primitive_root(a);
  if (pr.exponent == 1) return D::yes(true);
  // b =_G rho^m for some m; find it, then ask whether rho^m lies in <rho^e>
  const long limit = static_cast<long>(params.step_budget);
  for (long k = 0; k <= limit; ++k) {
    for (long m : {k, -k}) {
      if (k == 0 && m < 0) continue;
      auto t = p.word_problem(power(pr.root, m).inverse() * b);
      if (!t.is_true()) continue;
      auto r = p.cyclic_membership(a, power(pr.root, m));
      if (r.is_unknown()) return D::unknown(r.bound, "residue of the root exponent undecided");
      return r.is_yes() ? D::yes(true) : D::no("root exponent outside <a>");
    }
  }
  return D::unknown(params.step_budget, "root exponent not found");
}

}  // namespace mm
