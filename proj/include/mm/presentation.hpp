#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "mm/alphabet.hpp"
#include "mm/coset_enumeration.hpp"
#include "mm/decision.hpp"
#include "mm/free_group.hpp"
#include "mm/word.hpp"

namespace mm {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleSpec {
  enum class Kind { abelian, finite, search };
  Kind kind = Kind::abelian;
  std::size_t parameter = 0;  // group order for finite, step budget for search

  std::string to_string() const {
    switch (kind) {
      case Kind::abelian: return "abelian";
      case Kind::finite: return "finite:" + std::to_string(parameter);
      case Kind::search: return "search:" + std::to_string(parameter);
    }
    return {};
  }

  static std::optional<OracleSpec> parse(std::string_view s) {
    if (s == "abelian") return OracleSpec{Kind::abelian, 0};
    for (auto [prefix, kind] : {std::pair{std::string_view("finite:"), Kind::finite},
                                std::pair{std::string_view("search:"), Kind::search}}) {
      if (s.substr(0, prefix.size()) != prefix) continue;
      auto digits = s.substr(prefix.size());
      if (digits.empty() || digits.size() > 12 ||
          !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return std::nullopt;
      std::size_t n = std::stoull(std::string(digits));
      if (n == 0) return std::nullopt;
      return OracleSpec{kind, n};
    }
    return std::nullopt;
  }
};

/// A cyclic shift of r^sign: word == X^-1 r^sign X where X = (r^sign)[:rotation].
struct RelatorShift {
  Word word;
  std::size_t relator;
  int sign;
  std::size_t rotation;

  Word prefix(const std::vector<Word>& relators) const {
    return power(relators[relator], sign).slice(0, rotation);
  }
};

inline std::vector<RelatorShift> relator_shifts(const std::vector<Word>& relators) {
  std::vector<RelatorShift> out;
  std::set<std::vector<Letter>> seen;
  for (std::size_t i = 0; i < relators.size(); ++i) {
    for (int sign : {1, -1}) {
      Word r = power(relators[i], sign);
      for (std::size_t k = 0; k < r.size(); ++k) {
        std::vector<Letter> raw(r.begin() + static_cast<std::ptrdiff_t>(k), r.end());
        raw.insert(raw.end(), r.begin(), r.begin() + static_cast<std::ptrdiff_t>(k));
        Word shifted(raw);
        if (seen.insert(shifted.vec()).second) out.push_back({shifted, i, sign, k});
      }
    }
  }
  return out;
}

/// reduce(w[:p] s w[p:])
inline Word insert_at(const Word& w, std::size_t p, const Word& s) {
  return w.slice(0, p) * s * w.slice(p, w.size() - p);
}

namespace detail {

class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual OracleAnswer is_trivial(const Word& g) const = 0;
  /// b =_G a^m for some m
  virtual Decision<long> cyclic_membership(const Word& a, const Word& b) const = 0;
  /// Some n with t rho^n in <g>_G; Unknown unless the strategy has exact structure for it.
  virtual Decision<long> power_coset_membership(const Word&, const Word&, const Word&) const {
    return Decision<long>::unknown(0, "strategy cannot solve power equations");
  }
  virtual bool known_abelian() const = 0;
};

// Groups presented by letter-killers and commutators of generator pairs whose
// survivors either all commute (free abelian) or none do (free).
class AbelianOracle final : public Oracle {
 public:
  AbelianOracle(std::size_t n, const std::vector<Word>& relators) : killed_(n, false) {
    std::set<std::pair<std::size_t, std::size_t>> commuting;
    for (const Word& r : relators) {
      if (r.size() == 1) {
        killed_[generator_of(r[0])] = true;
      } else if (r.size() == 4 && r[0] == -r[2] && r[1] == -r[3] &&
                 generator_of(r[0]) != generator_of(r[1])) {
        auto x = generator_of(r[0]), y = generator_of(r[1]);
        commuting.insert({std::min(x, y), std::max(x, y)});
      } else {
        throw OracleError(
            "abelian strategy accepts only single-letter relators and commutators x y x^-1 y^-1");
      }
    }
    for (std::size_t g = 0; g < n; ++g) {
      if (!killed_[g]) survivors_.push_back(g);
    }
    std::size_t pairs = 0, present = 0;
    for (std::size_t i = 0; i < survivors_.size(); ++i) {
      for (std::size_t j = i + 1; j < survivors_.size(); ++j) {
        ++pairs;
        present += commuting.count({survivors_[i], survivors_[j]});
      }
    }
    if (present != 0 && present != pairs) {
      throw OracleError("abelian strategy: surviving generators neither all commute nor are free");
    }
    abelian_ = present == pairs;
  }

  OracleAnswer is_trivial(const Word& g) const override {
    if (abelian_) {
      auto v = exponents(g);
      return OracleAnswer::truth(std::all_of(v.begin(), v.end(), [](long e) { return e == 0; }));
    }
    return OracleAnswer::truth(strip(g).empty());
  }

  Decision<long> cyclic_membership(const Word& a, const Word& b) const override {
    if (!abelian_) return power_membership(strip(a), strip(b));
    auto va = exponents(a), vb = exponents(b);
    std::optional<long> m;
    for (std::size_t i = 0; i < va.size(); ++i) {
      if (va[i] == 0) {
        if (vb[i] != 0) return Decision<long>::no();
        continue;
      }
      if (vb[i] % va[i] != 0) return Decision<long>::no();
      long q = vb[i] / va[i];
      if (m && *m != q) return Decision<long>::no();
      m = q;
    }
    return Decision<long>::yes(m.value_or(0));
  }

  // t + n rho = m g over Z^survivors
  Decision<long> power_coset_membership(const Word& t, const Word& rho, const Word& g) const override {
    if (!abelian_) return Oracle::power_coset_membership(t, rho, g);
    return solve_line(exponents(t), exponents(rho), exponents(g));
  }

  bool known_abelian() const override { return abelian_; }

 private:
  std::vector<long> exponents(const Word& g) const {
    std::vector<long> v(survivors_.size(), 0);
    for (Letter l : g) {
      auto it = std::find(survivors_.begin(), survivors_.end(), generator_of(l));
      if (it != survivors_.end()) v[static_cast<std::size_t>(it - survivors_.begin())] += sign_of(l);
    }
    return v;
  }

  static Decision<long> solve_line(const std::vector<long>& t, const std::vector<long>& a, const std::vector<long>& b) {
    using D = Decision<long>;
    const std::size_t d = t.size();
    auto check = [&](long n, long m) {
      for (std::size_t i = 0; i < d; ++i) {
        if (t[i] + n * a[i] - m * b[i] != 0) return false;
      }
      return true;
    };
    // a and b independent: Cramer on a nonzero minor fixes (n, m)
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) {
        const long det = a[i] * b[j] - a[j] * b[i];
        if (det == 0) continue;
        const long nn = -t[i] * b[j] + t[j] * b[i], mm = a[i] * t[j] - a[j] * t[i];
        if (nn % det != 0 || mm % det != 0) return D::no();
        return check(nn / det, mm / det) ? D::yes(nn / det) : D::no();
      }
    }
    // a, b on one line through a primitive direction e
    std::vector<long> e = std::any_of(a.begin(), a.end(), [](long x) { return x != 0; }) ? a : b;
    long gcd_e = 0;
    for (long x : e) gcd_e = std::gcd(gcd_e, x);
    if (gcd_e == 0) return check(0, 0) ? D::yes(0) : D::no();
    std::size_t pivot = 0;
    for (std::size_t i = 0; i < d; ++i) {
      e[i] /= gcd_e;
      if (e[i] != 0) pivot = i;
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (t[i] * e[pivot] != t[pivot] * e[i]) return D::no();
    }
    if (t[pivot] % e[pivot] != 0) return D::no();
    const long tau = t[pivot] / e[pivot], alpha = a[pivot] / e[pivot], beta = b[pivot] / e[pivot];
    // tau + n alpha = m beta by extended Euclid on (alpha, -beta)
    long r0 = alpha, r1 = -beta, x0 = 1, x1 = 0;
    while (r1 != 0) {
      const long q = r0 / r1;
      std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
      std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    }
    if (r0 == 0) return tau == 0 ? D::yes(0) : D::no();
    if (tau % r0 != 0) return D::no();
    long n = -tau / r0 * x0;
    if (beta != 0) {
      // smallest |n| in the solution class
      const long period = std::abs(beta / std::gcd(alpha, beta));
      n %= period;
      if (2 * n > period) n -= period;
      if (2 * n < -period) n += period;
    }
    const long num = tau + n * alpha;
    if (beta == 0 ? num != 0 : num % beta != 0) return D::no();
    return check(n, beta == 0 ? 0 : num / beta) ? D::yes(n) : D::no();
  }

  Word strip(const Word& g) const {
    std::vector<Letter> raw;
    for (Letter l : g) {
      if (!killed_[generator_of(l)]) raw.push_back(l);
    }
    return Word(std::move(raw));
  }

  std::vector<bool> killed_;
  std::vector<std::size_t> survivors_;
  bool abelian_ = true;
};

class FiniteOracle final : public Oracle {
 public:
  FiniteOracle(std::size_t n, const std::vector<Word>& relators, std::size_t order)
      : table_(n, relators, std::min<std::size_t>(std::max<std::size_t>(1u << 16, 256 * order), 1u << 23)) {
    if (table_.size() != order) {
      throw OracleError("finite strategy: enumeration found order " + std::to_string(table_.size()) +
                        ", declared " + std::to_string(order));
    }
    abelian_ = true;
    for (std::size_t x = 0; x < n && abelian_; ++x) {
      for (std::size_t y = x + 1; y < n && abelian_; ++y) {
        abelian_ = table_.trace(Word{letter(x), letter(y), letter(x, -1), letter(y, -1)}) == 0;
      }
    }
  }

  OracleAnswer is_trivial(const Word& g) const override {
    return OracleAnswer::truth(table_.trace(g) == 0);
  }

  Decision<long> cyclic_membership(const Word& a, const Word& b) const override {
    const std::size_t target = table_.trace(b);
    std::size_t c = 0;
    std::optional<long> hit;
    long order = 0;
    do {
      if (c == target && !hit) hit = order;
      c = table_.trace(a, c);
      ++order;
    } while (c != 0);
    if (!hit) return Decision<long>::no();
    long m = *hit;
    return Decision<long>::yes(2 * m > order ? m - order : m);
  }

  // n only matters modulo the order of rho
  Decision<long> power_coset_membership(const Word& t, const Word& rho, const Word& g) const override {
    std::unordered_set<std::size_t> subgroup;
    std::size_t c = 0;
    do {
      subgroup.insert(c);
      c = table_.trace(g, c);
    } while (c != 0);
    const std::size_t start = table_.trace(t);
    c = start;
    long n = 0;
    std::optional<long> hit;
    do {
      if (!hit && subgroup.count(c)) hit = n;
      c = table_.trace(rho, c);
      ++n;
    } while (c != start);
    if (!hit) return Decision<long>::no();
    return Decision<long>::yes(2 * *hit > n ? *hit - n : *hit);
  }

  bool known_abelian() const override { return abelian_; }

 private:
  CosetTable table_;
  bool abelian_ = false;
};

// Semi-decision: meet-in-the-middle relator insertion between g and 1.
class SearchOracle final : public Oracle {
 public:
  SearchOracle(const std::vector<Word>& relators, std::size_t steps)
      : shifts_(relator_shifts(relators)), steps_(steps) {
    for (const Word& r : relators) max_relator_ = std::max(max_relator_, r.size());
  }

  OracleAnswer is_trivial(const Word& g) const override {
    if (g.empty()) return OracleAnswer::truth(true);
    const std::size_t cap = 2 * (g.size() + max_relator_);
    std::unordered_set<Word, WordHash> seen[2];
    std::vector<Word> frontier[2];
    seen[0].insert(g);
    frontier[0].push_back(g);
    seen[1].insert(Word{});
    frontier[1].push_back(Word{});
    std::size_t spent = 0;
    while (!frontier[0].empty() || !frontier[1].empty()) {
      int side = (frontier[1].empty() || (!frontier[0].empty() && frontier[0].size() <= frontier[1].size())) ? 0 : 1;
      std::vector<Word> next;
      for (const Word& w : frontier[side]) {
        for (std::size_t p = 0; p <= w.size(); ++p) {
          for (const auto& s : shifts_) {
            if (++spent > steps_) return OracleAnswer::unknown(steps_);
            count_step();
            Word v = insert_at(w, p, s.word);
            if (v.size() > cap) continue;
            if (seen[1 - side].count(v)) return OracleAnswer::truth(true);
            if (seen[side].insert(v).second) next.push_back(std::move(v));
          }
        }
      }
      frontier[side] = std::move(next);
    }
    return OracleAnswer::unknown(steps_);
  }

  Decision<long> cyclic_membership(const Word& a, const Word& b) const override {
    const long bound = static_cast<long>(a.size() + b.size()) + 2;
    for (long k = 0; k <= bound; ++k) {
      for (long m : {k, -k}) {
        if (k == 0 && m < 0) continue;
        if (is_trivial(power(a, m).inverse() * b).is_true()) return Decision<long>::yes(m);
      }
    }
    return Decision<long>::unknown(static_cast<std::size_t>(bound), "search strategy exhausted");
  }

  bool known_abelian() const override { return false; }

 private:
  std::vector<RelatorShift> shifts_;
  std::size_t steps_;
  std::size_t max_relator_ = 0;
};

}  // namespace detail

/// Finite presentation <X | R> with a word-problem strategy.
class Presentation {
 public:
  Presentation(Alphabet alphabet, std::vector<Word> relators, OracleSpec oracle)
      : alphabet_(std::move(alphabet)), relators_(std::move(relators)), spec_(oracle) {
    for (const auto& name : alphabet_.names()) {
      if (name == "q" || name[0] == '#') throw AlphabetError("reserved generator name '" + name + "'");
    }
    if (relators_.empty()) throw std::invalid_argument("presentation needs at least one relator");
    for (const Word& r : relators_) {
      if (r.empty()) throw std::invalid_argument("relator reduces to the empty word");
      check(r);
    }
    const std::size_t n = alphabet_.size();
    switch (spec_.kind) {
      case OracleSpec::Kind::abelian:
        oracle_ = std::make_shared<detail::AbelianOracle>(n, relators_);
        break;
      case OracleSpec::Kind::finite:
        try {
          oracle_ = std::make_shared<detail::FiniteOracle>(n, relators_, spec_.parameter);
        } catch (const EnumerationLimit& e) {
          throw OracleError(std::string("finite strategy: ") + e.what());
        }
        break;
      case OracleSpec::Kind::search:
        oracle_ = std::make_shared<detail::SearchOracle>(relators_, spec_.parameter);
        break;
    }
  }

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<Word>& relators() const { return relators_; }
  const OracleSpec& oracle() const { return spec_; }
  std::size_t generator_count() const { return alphabet_.size(); }

  /// max(||r||, 2)
  std::size_t t() const {
    std::size_t out = 2;
    for (const Word& r : relators_) out = std::max(out, r.size());
    return out;
  }

  std::size_t max_relator_length() const {
    std::size_t out = 0;
    for (const Word& r : relators_) out = std::max(out, r.size());
    return out;
  }

  std::vector<std::size_t> generators() const {
    std::vector<std::size_t> out(alphabet_.size());
    std::iota(out.begin(), out.end(), 0);
    return out;
  }

  Word parse(std::string_view text) const { return alphabet_.parse(text); }
  std::string format(const Word& w) const { return alphabet_.format(w); }

  void check(const Word& g) const {
    for (Letter l : g) {
      if (generator_of(l) >= alphabet_.size()) throw AlphabetError("letter outside the generating set");
    }
  }

  OracleAnswer word_problem(const Word& g) const {
    check(g);
    return oracle_->is_trivial(g);
  }

  Decision<long> cyclic_membership(const Word& a, const Word& b) const {
    check(a);
    check(b);
    return oracle_->cyclic_membership(a, b);
  }

  Decision<long> power_coset_membership(const Word& t, const Word& rho, const Word& g) const {
    check(t);
    check(rho);
    check(g);
    return oracle_->power_coset_membership(t, rho, g);
  }

  bool known_abelian() const { return oracle_->known_abelian(); }

  /// Exact strategies never answer Unknown.
  bool exact() const { return spec_.kind != OracleSpec::Kind::search; }

  std::string to_text() const {
    std::string out = "[generators]\n";
    for (std::size_t i = 0; i < alphabet_.size(); ++i) out += (i ? " " : "") + alphabet_.name(i);
    out += "\n[relators]\n";
    for (const Word& r : relators_) out += alphabet_.format(r) + "\n";
    out += "[oracle]\n" + spec_.to_string() + "\n";
    return out;
  }

 private:
  Alphabet alphabet_;
  std::vector<Word> relators_;
  OracleSpec spec_;
  std::shared_ptr<const detail::Oracle> oracle_;
};

inline OracleAnswer word_problem(const Presentation& p, const Word& g) { return p.word_problem(g); }

/// Reads the sectioned presentation format. Blank lines are ignored.
inline Presentation parse_presentation(std::string_view text) {
  enum class Section { none, generators, relators, oracle };
  Section section = Section::none;
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::size_t>> relator_lines;
  std::optional<OracleSpec> spec;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  auto trim_start = [](const std::string& s) { return s.find_first_not_of(" \t\r"); };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto start = trim_start(line);
    if (start == std::string::npos) continue;
    std::string body = line.substr(start);
    while (!body.empty() && (body.back() == ' ' || body.back() == '\t')) body.pop_back();
    if (body[0] == '[') {
      Section expected = section == Section::none        ? Section::generators
                         : section == Section::generators ? Section::relators
                         : section == Section::relators   ? Section::oracle
                                                          : Section::none;
      const char* header = expected == Section::generators ? "[generators]"
                           : expected == Section::relators ? "[relators]"
                           : expected == Section::oracle   ? "[oracle]"
                                                           : nullptr;
      if (!header || body != header) {
        throw ParseError(header ? std::string("expected section ") + header
                                : "unexpected section after [oracle]",
                         line_no, start + 1);
      }
      section = expected;
      continue;
    }
    switch (section) {
      case Section::none:
        throw ParseError("expected section [generators]", line_no, start + 1);
      case Section::generators: {
        std::istringstream tokens(line);
        std::string tok;
        while (tokens >> tok) names.push_back(tok);
        break;
      }
      case Section::relators:
        relator_lines.emplace_back(line, line_no);
        break;
      case Section::oracle:
        if (spec) throw ParseError("[oracle] takes a single line", line_no, start + 1);
        spec = OracleSpec::parse(body);
        if (!spec) {
          throw ParseError("oracle must be abelian, finite:<order> or search:<steps>", line_no,
                           start + 1);
        }
        break;
    }
  }
  if (section != Section::oracle || !spec) {
    throw ParseError("missing section " + std::string(section == Section::none        ? "[generators]"
                                                      : section == Section::generators ? "[relators]"
                                                                                       : "[oracle]"),
                     line_no + 1, 1);
  }
  Alphabet alphabet = [&] {
    try {
      return Alphabet(names);
    } catch (const AlphabetError& e) {
      throw ParseError(e.what(), 0, 1);
    }
  }();
  std::vector<Word> relators;
  for (const auto& [text_line, no] : relator_lines) {
    Word r = alphabet.parse(text_line, no);
    if (r.empty()) throw ParseError("relator reduces to the empty word", no, 1);
    relators.push_back(std::move(r));
  }
  return Presentation(std::move(alphabet), std::move(relators), *spec);
}

inline Presentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open presentation file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_presentation(buf.str());
}

}  // namespace mm
