#pragma once

#include <string>
#include <vector>

#include "mm/alphabet.hpp"
#include "mm/decision.hpp"
#include "mm/length_functions.hpp"
#include "mm/presentation.hpp"
#include "mm/word.hpp"

namespace mm {

/// Generators of M(G) laid out as X, then q, then #x for x in X, then #r_i.
/// Words over X keep their meaning inside this alphabet.
class MillerAlphabet {
 public:
  explicit MillerAlphabet(Presentation base)
      : base_(std::move(base)), alphabet_(names(base_)) {}

  const Presentation& base() const { return base_; }
  const Alphabet& alphabet() const { return alphabet_; }

  std::size_t x_count() const { return base_.generator_count(); }
  std::size_t relator_count() const { return base_.relators().size(); }
  std::size_t size() const { return alphabet_.size(); }

  std::size_t q() const { return x_count(); }
  std::size_t theta_x(std::size_t x) const { return x_count() + 1 + x; }
  std::size_t theta_r(std::size_t r) const { return 2 * x_count() + 1 + r; }

  bool is_x(std::size_t g) const { return g < x_count(); }
  bool is_q(std::size_t g) const { return g == q(); }
  bool is_theta(std::size_t g) const { return g > q() && g < size(); }
  bool is_theta_x(std::size_t g) const { return g > q() && g <= 2 * x_count(); }
  bool is_theta_r(std::size_t g) const { return g > 2 * x_count() && g < size(); }
  /// x for #x, r for #r
  std::size_t theta_index(std::size_t g) const {
    return is_theta_x(g) ? g - x_count() - 1 : g - 2 * x_count() - 1;
  }

  Letter q_letter(int sign = 1) const { return letter(q(), sign); }

  Word parse(std::string_view text) const { return alphabet_.parse(text); }
  std::string format(const Word& w) const { return alphabet_.format(w); }

  void check(const Word& w) const {
    for (Letter l : w) {
      if (generator_of(l) >= size()) throw AlphabetError("letter outside the Miller alphabet");
    }
  }

  std::vector<std::size_t> x_generators() const { return range(0, x_count()); }
  std::vector<std::size_t> all_generators() const { return range(0, size()); }
  /// X and Theta, i.e. every generator except q
  std::vector<std::size_t> q_free_generators() const {
    auto out = range(0, x_count());
    auto th = range(q() + 1, size());
    out.insert(out.end(), th.begin(), th.end());
    return out;
  }

  bool has_q(const Word& w) const { return w.contains_generator(q()); }
  bool is_theta_word(const Word& w) const {
    return std::all_of(w.begin(), w.end(), [&](Letter l) { return is_theta(generator_of(l)); });
  }
  bool is_x_word(const Word& w) const {
    return std::all_of(w.begin(), w.end(), [&](Letter l) { return is_x(generator_of(l)); });
  }

 private:
  static std::vector<std::size_t> range(std::size_t from, std::size_t to) {
    std::vector<std::size_t> out;
    for (std::size_t i = from; i < to; ++i) out.push_back(i);
    return out;
  }

  static Alphabet names(const Presentation& p) {
    std::vector<std::string> out = p.alphabet().names();
    out.push_back("q");
    for (const auto& x : p.alphabet().names()) out.push_back("#" + x);
    for (std::size_t i = 0; i < p.relators().size(); ++i) out.push_back("#r" + std::to_string(i + 1));
    try {
      return Alphabet(std::move(out));
    } catch (const AlphabetError& e) {
      throw AlphabetError(std::string("theta tokens collide: ") + e.what());
    }
  }

  Presentation base_;
  Alphabet alphabet_;
};

/// alpha * tau with alpha over X and q, tau over Theta.
struct NormalForm {
  Word alpha;
  Word tau;

  std::size_t size() const { return alpha.size() + tau.size(); }
  Word word() const { return alpha * tau; }
  bool operator==(const NormalForm&) const = default;
};

/// Image of w (over X and q) under phi for one signed theta letter.
inline Word phi_apply(const MillerAlphabet& ma, Letter theta, const Word& w) {
  const std::size_t t = generator_of(theta);
  if (!ma.is_theta(t)) throw std::invalid_argument("phi_apply needs a theta letter");
  const int s = sign_of(theta);
  Word q_image;
  const Word q = Word{ma.q_letter()};
  if (ma.is_theta_x(t)) {
    Word x = Word::generator(ma.theta_index(t), 1);
    q_image = s > 0 ? x.inverse() * q * x : x * q * x.inverse();
  } else {
    q_image = q * power(ma.base().relators()[ma.theta_index(t)], s);
  }
  const Word q_image_inv = q_image.inverse();
  std::vector<Letter> raw;
  raw.reserve(w.size() * 3);
  for (Letter l : w) {
    if (generator_of(l) == ma.q()) {
      const Word& img = l > 0 ? q_image : q_image_inv;
      raw.insert(raw.end(), img.begin(), img.end());
    } else if (ma.is_x(generator_of(l))) {
      raw.push_back(l);
    } else {
      throw std::invalid_argument("phi_apply: argument must be a word over X and q");
    }
  }
  return Word(std::move(raw));
}

/// Pushes theta letters to the right: theta v theta^-1 = phi_theta(v).
inline NormalForm normalize(const MillerAlphabet& ma, const Word& w) {
  ma.check(w);
  Word alpha;
  std::vector<Letter> tau_rev;
  std::size_t end = w.size();  // w[i+1, end) is the pending X/q block
  auto flush = [&](std::size_t from) {
    std::vector<Letter> block(w.begin() + static_cast<std::ptrdiff_t>(from),
                              w.begin() + static_cast<std::ptrdiff_t>(end));
    alpha = Word(std::move(block)) * alpha;
  };
  for (std::size_t i = w.size(); i-- > 0;) {
    const Letter l = w[i];
    if (!ma.is_theta(generator_of(l))) continue;
    flush(i + 1);
    end = i;
    alpha = phi_apply(ma, l, alpha);
    tau_rev.push_back(l);
  }
  flush(0);
  return {alpha, Word(std::vector<Letter>(tau_rev.rbegin(), tau_rev.rend()))};
}

/// Defining relators of M(G): theta x theta^-1 x^-1, theta_x x q (q x theta_x)^-1,
/// theta_r q (q r theta_r)^-1.
inline std::vector<Word> mg_relators(const MillerAlphabet& ma) {
  std::vector<Word> out;
  const Word q{ma.q_letter()};
  for (std::size_t t = ma.q() + 1; t < ma.size(); ++t) {
    const Word th = Word::generator(t);
    for (std::size_t x = 0; x < ma.x_count(); ++x) {
      const Word xw = Word::generator(x);
      out.push_back(th * xw * th.inverse() * xw.inverse());
    }
    if (ma.is_theta_x(t)) {
      const Word xw = Word::generator(ma.theta_index(t));
      out.push_back(th * xw * q * (q * xw * th).inverse());
    } else {
      const Word& r = ma.base().relators()[ma.theta_index(t)];
      out.push_back(th * q * (q * r * th).inverse());
    }
  }
  return out;
}

inline bool equal_in_mg(const MillerAlphabet& ma, const Word& a, const Word& b) {
  return normalize(ma, a) == normalize(ma, b);
}

/// theta_{x_1}^{d_1} ... for w = x_1^{d_1} ...; conjugates q to w^-1 q w.
inline Word tau_w(const MillerAlphabet& ma, const Word& w) {
  std::vector<Letter> out;
  for (Letter l : w) {
    if (!ma.is_x(generator_of(l))) throw std::invalid_argument("tau_w needs a word over X");
    out.push_back(letter(ma.theta_x(generator_of(l)), sign_of(l)));
  }
  return Word(std::move(out));
}

/// prod tau_{w_i} theta_{r_i}^{d_i} tau_{w_i}^-1; conjugates q to q * expansion.
inline Word tau_eps(const MillerAlphabet& ma, const RelatorExpression& e) {
  Word out;
  for (const auto& f : e.factors) {
    Word t = tau_w(ma, f.w);
    out *= t * Word{letter(ma.theta_r(f.relator), f.sign)} * t.inverse();
  }
  return out;
}

struct ThetaConjData {
  Word w;
  Word eps;  // tau0 q tau0^-1 = w^-1 q w eps, eps trivial in G
};

inline ThetaConjData theta_conj_data(const MillerAlphabet& ma, const Word& tau0) {
  if (!ma.is_theta_word(tau0)) throw std::invalid_argument("theta_conj_data needs a word over Theta");
  NormalForm nf = normalize(ma, tau0 * Word{ma.q_letter()} * tau0.inverse());
  std::size_t at = nf.alpha.size();
  for (std::size_t i = 0; i < nf.alpha.size(); ++i) {
    if (generator_of(nf.alpha[i]) == ma.q()) {
      if (at != nf.alpha.size() || nf.alpha[i] < 0) throw std::logic_error("conjugate of q lost its shape");
      at = i;
    }
  }
  if (at == nf.alpha.size() || !nf.tau.empty()) throw std::logic_error("conjugate of q lost its shape");
  Word a = nf.alpha.slice(0, at);
  Word b = nf.alpha.slice(at + 1, nf.alpha.size() - at - 1);
  Word w = a.inverse();
  return {w, w.inverse() * b};
}

/// Generators of the K subgroup on the given side: theta_x x always, and
/// theta_r (side -1) or theta_r r (side +1).
inline Word k_generator(const MillerAlphabet& ma, Letter theta, int side) {
  const std::size_t t = generator_of(theta);
  const int s = sign_of(theta);
  if (ma.is_theta_x(t)) return power(Word{letter(t), letter(ma.theta_index(t))}, s);
  if (side < 0) return Word{theta};
  return power(Word{letter(t)} * ma.base().relators()[ma.theta_index(t)], s);
}

/// Membership in K_{side}. The certificate is the Theta word whose letters,
/// replaced by the matching K generators, give h.
inline Decision<Word> k_membership(const MillerAlphabet& ma, const Word& h, int side) {
  if (side != 1 && side != -1) throw std::invalid_argument("side must be +1 or -1");
  NormalForm nf = normalize(ma, h);
  if (ma.has_q(nf.alpha)) return Decision<Word>::no("element is not in <X, Theta>");
  // X and Theta commute, so the X-component of the candidate is the product
  // of the X letters of its generators
  Word x_part;
  for (Letter l : nf.tau) {
    std::vector<Letter> xs;
    for (Letter g : k_generator(ma, l, side)) {
      if (ma.is_x(generator_of(g))) xs.push_back(g);
    }
    x_part *= Word(std::move(xs));
  }
  return x_part == nf.alpha ? Decision<Word>::yes(nf.tau) : Decision<Word>::no();
}

struct MgCyclicReduction {
  NormalForm core;
  Word conj;  // conj core conj^-1 = input in M(G)
  bool weakly_regular = false;
};

/// Greedy shortening by single-letter conjugation: each round takes the first
/// letter (shortlex) whose conjugate has a strictly shorter normal form.
inline MgCyclicReduction cyclic_reduce_mg(const MillerAlphabet& ma, const Word& w) {
  NormalForm nf = normalize(ma, w);
  Word conj;
  std::vector<Letter> letters;
  for (std::size_t g = 0; g < ma.size(); ++g) {
    letters.push_back(letter(g, 1));
    letters.push_back(letter(g, -1));
  }
  for (bool improved = true; improved;) {
    improved = false;
    for (Letter l : letters) {
      NormalForm next = normalize(ma, Word{-l} * nf.word() * Word{l});
      if (next.size() < nf.size()) {
        nf = std::move(next);
        conj *= Word{l};
        improved = true;
        break;
      }
    }
  }
  return {nf, conj, !nf.tau.empty()};
}

}  // namespace mm
