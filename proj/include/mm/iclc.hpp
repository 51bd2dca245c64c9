#pragma once

#include <algorithm>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mm/decision.hpp"
#include "mm/free_group.hpp"
#include "mm/length_functions.hpp"
#include "mm/miller.hpp"
#include "mm/presentation.hpp"

namespace mm {

/// Signs sigma_1..sigma_k plus the reading of sigma_{k+1}: sigma_1 (cyclic)
/// or sigma_k (last).
struct SigmaPattern {
  enum class Convention { cyclic, last };
  std::vector<int> signs;
  Convention convention = Convention::cyclic;

  std::size_t size() const { return signs.size(); }
  int operator[](std::size_t i) const { return signs.at(i); }
  int next(std::size_t i) const {
    if (i + 1 < signs.size()) return signs[i + 1];
    return convention == Convention::cyclic ? signs.front() : signs.back();
  }
  bool flips(std::size_t i) const { return signs[i] == -next(i); }

  bool alternating() const {
    if (signs.empty()) return false;
    for (std::size_t i = 0; i < signs.size(); ++i) {
      if (!flips(i)) return false;
    }
    return true;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < signs.size(); ++i) out += std::string(i ? "," : "") + (signs[i] > 0 ? "+" : "-");
    return out;
  }

  /// "+,-,+"; also accepts +1/-1 tokens.
  static SigmaPattern parse(std::string_view text, Convention c = Convention::cyclic) {
    SigmaPattern out{{}, c};
    std::string s(text);
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      tok.erase(std::remove_if(tok.begin(), tok.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); }),
                tok.end());
      if (tok == "+" || tok == "+1" || tok == "1") out.signs.push_back(1);
      else if (tok == "-" || tok == "-1") out.signs.push_back(-1);
      else throw ParseError("sigma entries must be + or -", 0, 1);
    }
    if (out.signs.empty()) throw ParseError("sigma must be nonempty", 0, 1);
    return out;
  }

  bool operator==(const SigmaPattern&) const = default;
};

using WordTuple = std::vector<Word>;

/// Indices whose sign flip forces nonempty entries: every i (cyclic) or i < k (strict).
enum class AdmissibleRange { cyclic, strict };

inline bool admissible(const SigmaPattern& sigma, const WordTuple& u, const WordTuple& v,
                       AdmissibleRange range = AdmissibleRange::cyclic) {
  const std::size_t k = sigma.size();
  const std::size_t last = range == AdmissibleRange::cyclic ? k : (k == 0 ? 0 : k - 1);
  for (std::size_t i = 0; i < last; ++i) {
    if (sigma.flips(i) && (u[i].empty() || v[i].empty())) return false;
  }
  return true;
}

/// q^{s_1} u_1 ... q^{s_k} u_k as a Miller word.
inline Word assemble(const MillerAlphabet& ma, const SigmaPattern& sigma, const WordTuple& u) {
  std::vector<Letter> raw;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    raw.push_back(ma.q_letter(sigma[i]));
    raw.insert(raw.end(), u[i].begin(), u[i].end());
  }
  return Word(std::move(raw));
}

struct IclcWitness {
  Word w;
  Word eps;
  bool operator==(const IclcWitness&) const = default;
};

namespace detail {

inline void check_arity(const SigmaPattern& sigma, const WordTuple& u, const WordTuple& v) {
  if (sigma.size() == 0) throw std::invalid_argument("sigma must be nonempty");
  if (u.size() != sigma.size() || v.size() != sigma.size()) {
    throw std::invalid_argument("tuple arity does not match sigma");
  }
}

// Left-hand side of the defining equation at index i.
inline Word iclc_side(const SigmaPattern& sigma, std::size_t i, const Word& u, const IclcWitness& wit) {
  const Word &w = wit.w, &e = wit.eps;
  const int s = sigma[i], n = sigma.next(i);
  if (s > 0 && n > 0) return w * e * u * w.inverse();
  if (s > 0 && n < 0) return w * e * u * e.inverse() * w.inverse();
  if (s < 0 && n > 0) return w * u * w.inverse();
  return w * u * e.inverse() * w.inverse();
}

}  // namespace detail

/// Checks the defining free equalities and asks the oracle whether eps is trivial.
inline OracleAnswer iclc_verify(const Presentation& p, const WordTuple& u, const WordTuple& v,
                                const SigmaPattern& sigma, const IclcWitness& wit,
                                AdmissibleRange range = AdmissibleRange::cyclic) {
  detail::check_arity(sigma, u, v);
  if (!admissible(sigma, u, v, range)) throw std::invalid_argument("tuples are not admissible for sigma");
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (detail::iclc_side(sigma, i, u[i], wit) != v[i]) return OracleAnswer::truth(false);
  }
  return p.word_problem(wit.eps);
}

/// b =_G a^m; answers with m.
using CsmOracle = std::function<Decision<long>(const Word& a, const Word& b)>;

struct IclcOptions {
  std::size_t bound = 6;     // max ||w|| searched
  bool certified = false;    // caller guarantees bound >= C_{k,sigma} for this size
  AdmissibleRange range = AdmissibleRange::cyclic;
  CsmOracle csm;             // defaults to the presentation's cyclic membership
};

namespace detail {

// Visit the elements of a conjugator set with length <= bound in shortlex order.
inline bool for_each_in_set(const ConjugatorSet& set, std::span<const std::size_t> gens, std::size_t bound,
                            const std::function<bool(const Word&)>& visit) {
  using Kind = ConjugatorSet::Kind;
  switch (set.kind) {
    case Kind::empty: return true;
    case Kind::all: return for_each_word_up_to(gens, bound, visit);
    case Kind::single: return set.base.size() > bound || visit(set.base);
    case Kind::coset: {
      // ||base root^m|| >= |m| - ||base||
      const long limit = static_cast<long>(bound + set.base.size()) + 1;
      std::vector<Word> cands;
      for (long m = -limit; m <= limit; ++m) {
        Word c = set.base * power(set.root, m);
        if (c.size() <= bound) cands.push_back(std::move(c));
      }
      std::sort(cands.begin(), cands.end(), shortlex_less);
      for (const Word& c : cands) {
        if (!visit(c)) return false;
      }
      return true;
    }
  }
  return true;
}

inline std::size_t same_sign_index(const SigmaPattern& sigma) {
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    if (!sigma.flips(j)) return j;
  }
  throw std::invalid_argument("sigma is alternating");
}

}  // namespace detail

/// Some sigma_j = sigma_{j+1}: eps is forced by w through equation j, and the
/// remaining equations become a free list-conjugacy problem for w.
inline Decision<IclcWitness> iclc_decide_nonalternating(const Presentation& p, const WordTuple& u,
                                                        const WordTuple& v, const SigmaPattern& sigma,
                                                        const IclcOptions& opt = {}) {
  using D = Decision<IclcWitness>;
  detail::check_arity(sigma, u, v);
  if (!admissible(sigma, u, v, opt.range)) throw std::invalid_argument("tuples are not admissible for sigma");
  const std::size_t j = detail::same_sign_index(sigma);
  const Word &uj = u[j], &vj = v[j];
  const bool plus = sigma[j] > 0;
  std::vector<Word> as, bs;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (i == j) continue;
    const int s = sigma[i], n = sigma.next(i);
    if (s < 0 && n > 0) {
      as.push_back(u[i]);
      bs.push_back(v[i]);
    } else if (plus) {
      if (s > 0 && n > 0) { as.push_back(uj.inverse() * u[i]); bs.push_back(vj.inverse() * v[i]); }
      else if (s > 0) { as.push_back(uj.inverse() * u[i] * uj); bs.push_back(vj.inverse() * v[i] * vj); }
      else { as.push_back(u[i] * uj); bs.push_back(v[i] * vj); }
    } else {
      if (s > 0 && n > 0) { as.push_back(uj * u[i]); bs.push_back(vj * v[i]); }
      else if (s > 0) { as.push_back(uj * u[i] * uj.inverse()); bs.push_back(vj * v[i] * vj.inverse()); }
      else { as.push_back(u[i] * uj.inverse()); bs.push_back(v[i] * vj.inverse()); }
    }
  }
  const ConjugatorSet set = list_conjugators(as, bs);
  if (set.is_empty()) return D::no("free equations have no common solution");

  auto eps_for = [&](const Word& w) {
    return plus ? w.inverse() * vj * w * uj.inverse() : w.inverse() * vj.inverse() * w * uj;
  };
  auto test = [&](const Word& w) -> D {
    count_step();
    IclcWitness wit{w, eps_for(w)};
    auto a = p.word_problem(wit.eps);
    if (a.is_true()) return D::yes(std::move(wit));
    if (a.is_false()) return D::no("the remaining relation fails");
    return D::unknown(a.bound, "word problem undecided");
  };
  // One candidate decides: the set is a point, or G is abelian and the
  // remaining condition w u_j w^-1 =_G v_j does not involve w.
  if (set.kind == ConjugatorSet::Kind::single || (p.known_abelian() && p.exact())) return test(set.base);

  std::optional<D> found;
  bool undecided = false;
  detail::for_each_in_set(set, p.generators(), opt.bound, [&](const Word& w) {
    D d = test(w);
    if (d.is_yes()) found = std::move(d);
    if (d.is_unknown()) undecided = true;
    return !found;
  });
  if (found) return *found;
  if (undecided) return D::unknown(opt.bound, "word problem undecided");
  if (opt.certified) return D::no("certified bound exhausted");
  return D::unknown(opt.bound, "bound exhausted");
}

/// sigma alternating: w ranges over a free coset r C1 and w eps over s C2;
/// eps =_G 1 becomes s^-1 w in <g>_G for the generator g of C2.
inline Decision<IclcWitness> iclc_decide_alternating(const Presentation& p, const WordTuple& u,
                                                     const WordTuple& v, const SigmaPattern& sigma,
                                                     const IclcOptions& opt = {}) {
  using D = Decision<IclcWitness>;
  detail::check_arity(sigma, u, v);
  if (!sigma.alternating()) throw std::invalid_argument("sigma is not alternating");
  if (!admissible(sigma, u, v, opt.range)) throw std::invalid_argument("tuples are not admissible for sigma");
  CsmOracle csm = opt.csm ? opt.csm : [&p](const Word& a, const Word& b) { return p.cyclic_membership(a, b); };
  std::vector<Word> a1, b1, a2, b2;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] < 0) {
      a1.push_back(u[i]);
      b1.push_back(v[i]);
    } else {
      a2.push_back(u[i]);
      b2.push_back(v[i]);
    }
  }
  const ConjugatorSet s1 = list_conjugators(a1, b1);  // w u w^-1 = v
  const ConjugatorSet s2 = list_conjugators(a2, b2);  // (w eps) u (w eps)^-1 = v
  if (s1.is_empty() || s2.is_empty()) return D::no("free equations have no common solution");

  // w eps ranges over s<g>; g is empty when that set is a point
  const Word& s = s2.base;
  const Word& g = s2.root;
  auto test = [&](const Word& w) -> D {
    count_step();
    if (s2.kind == ConjugatorSet::Kind::all) return D::yes({w, Word{}});
    auto m = csm(g, s.inverse() * w);
    if (m.is_yes()) return D::yes({w, w.inverse() * s * power(g, m.value())});
    if (m.is_no()) return D::no("w eps leaves the free solution set");
    return D::unknown(m.bound, "cyclic subgroup membership undecided");
  };
  // if the root of C1 lies in <g>_G, s^-1 r rho^n is in <g>_G iff s^-1 r is
  bool one_candidate = s1.kind == ConjugatorSet::Kind::single || s2.kind == ConjugatorSet::Kind::all;
  if (!one_candidate && s1.kind == ConjugatorSet::Kind::coset) one_candidate = csm(g, s1.root).is_yes();
  if (one_candidate) return test(s1.base);
  if (s1.kind == ConjugatorSet::Kind::all) return test(s);  // w = s gives eps = 1
  // exact strategies may solve s^-1 r rho^n in <g>_G outright
  auto n = p.power_coset_membership(s.inverse() * s1.base, s1.root, g);
  if (n.is_yes()) return test(s1.base * power(s1.root, n.value()));
  if (n.is_no()) return D::no("exponent equations have no solution");

  std::optional<D> found;
  bool undecided = false;
  detail::for_each_in_set(s1, p.generators(), opt.bound, [&](const Word& w) {
    D d = test(w);
    if (d.is_yes()) found = std::move(d);
    if (d.is_unknown()) undecided = true;
    return !found;
  });
  if (found) return *found;
  if (undecided) return D::unknown(opt.bound, "cyclic subgroup membership undecided");
  if (opt.certified) return D::no("certified bound exhausted");
  return D::unknown(opt.bound, "bound exhausted");
}

/// The eps that pairs with a given w, if any: forced by a same-sign equation,
/// or found by cyclic membership when sigma alternates.
inline Decision<IclcWitness> iclc_witness_for(const Presentation& p, const WordTuple& u, const WordTuple& v,
                                              const SigmaPattern& sigma, const Word& w,
                                              AdmissibleRange range = AdmissibleRange::cyclic) {
  using D = Decision<IclcWitness>;
  detail::check_arity(sigma, u, v);
  Word eps;
  if (!sigma.alternating()) {
    const std::size_t j = detail::same_sign_index(sigma);
    eps = sigma[j] > 0 ? w.inverse() * v[j] * w * u[j].inverse() : w.inverse() * v[j].inverse() * w * u[j];
  } else {
    std::vector<Word> a2, b2;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      if (sigma[i] < 0) continue;
      a2.push_back(u[i]);
      b2.push_back(v[i]);
    }
    const ConjugatorSet s2 = list_conjugators(a2, b2);
    if (s2.is_empty()) return D::no("free equations have no common solution");
    if (s2.kind == ConjugatorSet::Kind::coset) {
      auto m = p.cyclic_membership(s2.root, s2.base.inverse() * w);
      if (m.is_unknown()) return D::unknown(m.bound, "cyclic subgroup membership undecided");
      if (m.is_no()) return D::no("w eps leaves the free solution set");
      eps = w.inverse() * s2.base * power(s2.root, m.value());
    } else if (s2.kind == ConjugatorSet::Kind::single) {
      eps = w.inverse() * s2.base;
    }
  }
  IclcWitness wit{w, eps};
  auto ok = iclc_verify(p, u, v, sigma, wit, range);
  if (ok.is_true()) return D::yes(std::move(wit));
  if (ok.is_unknown()) return D::unknown(ok.bound, "word problem undecided");
  return D::no("no eps for this w");
}

inline Decision<IclcWitness> iclc_decide(const Presentation& p, const WordTuple& u, const WordTuple& v,
                                         const SigmaPattern& sigma, const IclcOptions& opt = {}) {
  auto d = sigma.alternating() ? iclc_decide_alternating(p, u, v, sigma, opt)
                               : iclc_decide_nonalternating(p, u, v, sigma, opt);
  if (d.is_yes() && !iclc_verify(p, u, v, sigma, d.value(), opt.range).is_true()) {
    throw std::logic_error("iclc witness failed verification");
  }
  return d;
}

struct QSignature {
  SigmaPattern sigma;
  WordTuple tuple;
  Word head;
};

/// w = head q^{s_1} u_1 ... q^{s_k} u_k with the u_i over X.
inline QSignature q_signature(const MillerAlphabet& ma, const Word& w) {
  QSignature out;
  std::vector<Letter> current;
  bool in_head = true;
  for (Letter l : w) {
    if (generator_of(l) == ma.q()) {
      if (in_head) out.head = Word(current);
      else out.tuple.push_back(Word(current));
      current.clear();
      in_head = false;
      out.sigma.signs.push_back(sign_of(l));
    } else {
      if (!ma.is_x(generator_of(l))) throw std::invalid_argument("q_signature needs a word over X and q");
      current.push_back(l);
    }
  }
  if (in_head) out.head = Word(current);
  else out.tuple.push_back(Word(current));
  return out;
}

struct ApproxCertificate {
  Word gamma;  // over X and Theta
  IclcWitness witness;
};

struct ApproxOptions {
  IclcOptions iclc;
  SigmaPattern::Convention convention = SigmaPattern::Convention::cyclic;
  SearchLimits eps_search;  // for writing eps as a relator expression
};

/// Conjugacy by an element of <X, Theta> for words over X and q.
inline Decision<ApproxCertificate> approx_decide(const MillerAlphabet& ma, const Word& x, const Word& y,
                                                 const ApproxOptions& opt = {}) {
  using D = Decision<ApproxCertificate>;
  const Presentation& p = ma.base();
  QSignature sx = q_signature(ma, x), sy = q_signature(ma, y);
  if (sx.sigma.signs != sy.sigma.signs) return D::no("q-letters differ");
  if (sx.sigma.size() == 0) {
    auto c = free_conjugacy(x, y);
    if (!c.is_yes()) return D::no("not conjugate in the free group");
    return D::yes({c.value().conjugator, {c.value().conjugator, Word{}}});
  }
  // fold the heads into the last entries: x' = u0^-1 x u0
  const std::size_t k = sx.sigma.size();
  sx.tuple[k - 1] = sx.tuple[k - 1] * sx.head;
  sy.tuple[k - 1] = sy.tuple[k - 1] * sy.head;
  SigmaPattern sigma{sx.sigma.signs, opt.convention};
  IclcOptions io = opt.iclc;
  io.range = AdmissibleRange::strict;
  auto d = iclc_decide(p, sx.tuple, sy.tuple, sigma, io);
  if (!d.is_yes()) return d.cast_without_certificate<ApproxCertificate>();
  const IclcWitness& wit = d.value();
  Word t_eps;
  if (!wit.eps.empty()) {
    auto e = delta_of(p, wit.eps, opt.eps_search);
    if (!e.is_yes()) return D::unknown(e.bound, "could not write eps as a relator product");
    t_eps = tau_eps(ma, e.value());
  }
  Word z = sigma[0] > 0 ? wit.w : wit.w * wit.eps;
  Word inner = z * tau_w(ma, wit.w) * t_eps;
  Word gamma = sy.head * inner * sx.head.inverse();
  if (!equal_in_mg(ma, gamma * x * gamma.inverse(), y)) {
    if (opt.convention == SigmaPattern::Convention::cyclic) {
      throw std::logic_error("approx_decide conjugator failed verification");
    }
    return D::unknown(0, "witness under this convention does not conjugate");
  }
  return D::yes({gamma, wit});
}

}  // namespace mm
