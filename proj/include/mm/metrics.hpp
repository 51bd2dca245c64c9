#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "mm/conjugacy.hpp"
#include "mm/iclc.hpp"
#include "mm/length_functions.hpp"
#include "mm/miller.hpp"

namespace mm {

/// Shortest gamma over `gens` with gamma x gamma^-1 = y. Balls of conjugates
/// around x and y grow one layer at a time, so the first meeting is minimal.
inline Decision<Word> shortest_conjugator(const MillerAlphabet& ma, const Word& x, const Word& y,
                                          const std::vector<std::size_t>& gens, std::size_t budget) {
  using D = Decision<Word>;
  struct Side {
    std::unordered_map<Word, Word, WordHash> ball;  // conjugate -> conjugator
    std::vector<std::pair<Word, Word>> layer;       // (conjugator, conjugate)
    std::size_t radius = 0;
  };
  auto start = [&](const Word& w) {
    Side s;
    Word key = normalize(ma, w).word();
    s.ball.emplace(key, Word{});
    s.layer.push_back({Word{}, key});
    return s;
  };
  Side sx = start(x), sy = start(y);
  if (sx.layer[0].second == sy.layer[0].second) return D::yes(Word{});
  std::vector<Letter> letters;
  for (std::size_t g : gens) {
    letters.push_back(letter(g, 1));
    letters.push_back(letter(g, -1));
  }
  std::size_t spent = 0;
  for (bool grow_x = true;; grow_x = !grow_x) {
    Side& s = grow_x ? sx : sy;
    const Side& other = grow_x ? sy : sx;
    std::vector<std::pair<Word, Word>> next;
    std::optional<Word> best;
    for (const auto& [g, key] : s.layer) {
      for (Letter l : letters) {
        if (!g.empty() && g[0] == -l) continue;
        if (++spent > budget) return D::unknown(sx.radius + sy.radius, "search budget exhausted");
        count_step();
        Word g2 = Word{l} * g;
        Word key2 = normalize(ma, Word{l} * key * Word{-l}).word();
        if (!s.ball.emplace(key2, g2).second) continue;
        auto hit = other.ball.find(key2);
        if (hit != other.ball.end()) {
          // g x g^-1 = h y h^-1 on the x side; swap roles on the y side
          Word gamma = grow_x ? hit->second.inverse() * g2 : g2.inverse() * hit->second;
          if (!best || shortlex_less(gamma, *best)) best = std::move(gamma);
        }
        next.push_back({std::move(g2), std::move(key2)});
      }
    }
    ++s.radius;
    if (best) return D::yes(*best);
    if (next.empty() && other.layer.empty()) return D::no("balls exhausted without meeting");
    s.layer = std::move(next);
  }
}

/// c(x, y), or c'(x, y) when `restricted` (conjugators over X and Theta).
inline Decision<long> c_of_pair(const MillerAlphabet& ma, const Word& x, const Word& y, std::size_t budget = 200'000,
                                bool restricted = false) {
  auto gens = restricted ? ma.q_free_generators() : ma.all_generators();
  auto d = shortest_conjugator(ma, x, y, gens, budget);
  if (d.is_yes()) return Decision<long>::yes(static_cast<long>(d.value().size()));
  return d.cast_without_certificate<long>();
}

/// values[n] for n = 0..nmax; a missing value means the cell was not decided.
struct MetricTable {
  std::string kind;
  std::vector<std::optional<long>> values;

  std::size_t nmax() const { return values.empty() ? 0 : values.size() - 1; }
  bool exact() const {
    return std::all_of(values.begin(), values.end(), [](const auto& v) { return v.has_value(); });
  }
  long at(std::size_t n) const {
    if (n >= values.size() || !values[n]) throw std::out_of_range(kind + " has no exact value at " + std::to_string(n));
    return *values[n];
  }

  std::string to_csv(bool header = true) const {
    std::ostringstream out;
    if (header) out << "kind,n,value,exact\n";
    for (std::size_t n = 0; n < values.size(); ++n) {
      out << kind << ',' << n << ',';
      if (values[n]) out << *values[n];
      out << ',' << (values[n] ? "true" : "false") << '\n';
    }
    return out.str();
  }
};

struct MetricOptions {
  std::size_t pair_budget = 200'000;  // per shortest-conjugator search
  ConjParams conj{2.0, 6, false, 200};
  SearchLimits limits;
  bool allow_large = false;  // lift the n <= 8, k <= 2 caps
};

namespace detail {

inline void check_caps(std::size_t nmax, std::size_t k, const MetricOptions& opt) {
  if (opt.allow_large) return;
  if (nmax > 8) throw std::invalid_argument("n > 8 needs the large-table override");
  if (k > 2) throw std::invalid_argument("arity k > 2 needs the large-table override");
}

// Running maxima by size: values[n] = max over sizes s <= n - offset, missing
// once any such size is undecided.
inline MetricTable fold_sizes(std::string kind, std::size_t nmax, std::size_t offset,
                              const std::vector<long>& best, const std::vector<bool>& undecided) {
  MetricTable t{std::move(kind), {}};
  long run = 0;
  bool open = false;
  for (std::size_t n = 0; n <= nmax; ++n) {
    if (n >= offset) {
      const std::size_t s = n - offset;
      if (s < best.size()) {
        run = std::max(run, best[s]);
        open = open || undecided[s];
      }
    }
    t.values.push_back(open ? std::nullopt : std::optional<long>(run));
  }
  return t;
}

// Every (u, v) with k entries each and total length <= total.
inline void for_each_tuple_pair(std::span<const std::size_t> gens, std::size_t k, std::size_t total,
                                const std::function<void(const WordTuple&, const WordTuple&, std::size_t)>& visit) {
  std::vector<Word> words;
  for_each_word_up_to(gens, total, [&](const Word& w) {
    words.push_back(w);
    return true;
  });
  std::vector<Word> slots(2 * k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == slots.size()) {
      visit(WordTuple(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(k)),
            WordTuple(slots.begin() + static_cast<std::ptrdiff_t>(k), slots.end()), used);
      return;
    }
    for (const Word& w : words) {
      if (used + w.size() > total) break;  // shortlex: lengths are nondecreasing
      slots[i] = w;
      rec(i + 1, used + w.size());
    }
  };
  rec(0, 0);
}

inline std::string sigma_label(const SigmaPattern& s) { return std::to_string(s.size()) + "[" + s.to_string() + "]"; }

}  // namespace detail

/// max c(qu, q) (or c') over trivial u with ||u|| <= n - 2.
inline MetricTable d0_table(const MillerAlphabet& ma, std::size_t nmax, const MetricOptions& opt = {},
                            bool primed = false) {
  detail::check_caps(nmax, 0, opt);
  const std::size_t total = nmax >= 2 ? nmax - 2 : 0;
  std::vector<long> best(total + 1, 0);
  std::vector<bool> undecided(total + 1, false);
  auto words = trivial_words_up_to(ma.base(), total);
  if (!words) undecided.assign(total + 1, true);
  const Word q{ma.q_letter()};
  for (const Word& u : words.value_or(std::vector<Word>{})) {
    auto c = c_of_pair(ma, q * u, q, opt.pair_budget, primed);
    if (c.is_yes()) best[u.size()] = std::max(best[u.size()], c.value());
    else undecided[u.size()] = true;
  }
  return detail::fold_sizes(primed ? "D0'" : "D0", nmax, 2, best, undecided);
}

/// max c (or c') over conjugate pairs x = q^s1 u1 ... q^sk uk, y likewise,
/// with ||x|| + ||y|| <= n.
inline MetricTable dk_table(const MillerAlphabet& ma, const SigmaPattern& sigma, std::size_t nmax,
                            const MetricOptions& opt = {}, bool primed = false) {
  const std::size_t k = sigma.size();
  if (k == 0) throw std::invalid_argument("sigma must be nonempty");
  detail::check_caps(nmax, k, opt);
  const std::size_t total = nmax >= 2 * k ? nmax - 2 * k : 0;
  std::vector<long> best(total + 1, 0);
  std::vector<bool> undecided(total + 1, false);
  if (nmax >= 2 * k) {
    auto gens = ma.x_generators();
    ApproxOptions ao;
    ao.iclc.bound = opt.conj.iclc_bound;
    ao.iclc.certified = opt.conj.iclc_certified;
    ao.convention = sigma.convention;
    detail::for_each_tuple_pair(gens, k, total, [&](const WordTuple& u, const WordTuple& v, std::size_t size) {
      if (!admissible(sigma, u, v, AdmissibleRange::strict)) return;
      const Word x = assemble(ma, sigma, u), y = assemble(ma, sigma, v);
      const Verdict conj = primed ? approx_decide(ma, x, y, ao).verdict : conjugate_in_mg(ma, x, y, opt.conj).verdict;
      if (conj == Verdict::no) return;
      if (conj == Verdict::unknown) {
        undecided[size] = true;
        return;
      }
      auto c = c_of_pair(ma, x, y, opt.pair_budget, primed);
      if (c.is_yes()) best[size] = std::max(best[size], c.value());
      else undecided[size] = true;
    });
  }
  return detail::fold_sizes("D" + detail::sigma_label(sigma) + (primed ? "'" : ""), nmax, 2 * k, best, undecided);
}

/// c_{k,sigma}(u, v): least ||w|| over witnesses. The witness found by the
/// decider bounds the search, so the scan below is exhaustive.
inline Decision<long> ck_of_pair(const Presentation& p, const WordTuple& u, const WordTuple& v,
                                 const SigmaPattern& sigma, const IclcOptions& opt = {}) {
  auto d = iclc_decide(p, u, v, sigma, opt);
  if (!d.is_yes()) return d.cast_without_certificate<long>();
  std::optional<long> found;
  bool undecided = false;
  auto gens = p.generators();
  for_each_word_up_to(gens, d.value().w.size(), [&](const Word& w) {
    auto e = iclc_witness_for(p, u, v, sigma, w, opt.range);
    if (e.is_yes()) found = static_cast<long>(w.size());
    if (e.is_unknown()) undecided = true;
    return !found && !undecided;
  });
  if (found) return Decision<long>::yes(*found);
  if (undecided) return Decision<long>::unknown(d.value().w.size(), "membership undecided below the witness");
  return Decision<long>::yes(static_cast<long>(d.value().w.size()));
}

/// max c_{k,sigma}(u, v) over admissible related tuples with total length <= n.
inline MetricTable ck_table(const Presentation& p, const SigmaPattern& sigma, std::size_t nmax,
                            const MetricOptions& opt = {}) {
  const std::size_t k = sigma.size();
  if (k == 0) throw std::invalid_argument("sigma must be nonempty");
  detail::check_caps(nmax, k, opt);
  std::vector<long> best(nmax + 1, 0);
  std::vector<bool> undecided(nmax + 1, false);
  IclcOptions io;
  io.bound = opt.conj.iclc_bound;
  io.certified = opt.conj.iclc_certified;
  auto gens = p.generators();
  detail::for_each_tuple_pair(gens, k, nmax, [&](const WordTuple& u, const WordTuple& v, std::size_t size) {
    if (!admissible(sigma, u, v)) return;
    auto c = ck_of_pair(p, u, v, sigma, io);
    if (c.is_yes()) best[size] = std::max(best[size], c.value());
    else if (c.is_unknown()) undecided[size] = true;
  });
  return detail::fold_sizes("C" + detail::sigma_label(sigma), nmax, 0, best, undecided);
}

inline MetricTable delta_table(const Presentation& p, std::size_t nmax, const SearchLimits& limits = {}) {
  MetricTable t{"Delta", {}};
  for (std::size_t n = 0; n <= nmax; ++n) {
    auto d = dehn_function(p, n, limits);
    t.values.push_back(d.is_yes() ? std::optional<long>(d.value()) : std::nullopt);
  }
  return t;
}

inline MetricTable lambda_table(const Presentation& p, std::size_t nmax, const SearchLimits& limits = {}) {
  MetricTable t{"Lambda", {}};
  for (std::size_t n = 0; n <= nmax; ++n) {
    auto d = lambda_function(p, n, limits);
    t.values.push_back(d.is_yes() ? std::optional<long>(d.value()) : std::nullopt);
  }
  return t;
}

/// Inequality families checked pointwise by verify_bounds.
enum class BoundFamily {
  d0_vs_lambda,     // Lambda(n-2)/(2t) <= D0(n) <= Lambda(n-2)
  delta_vs_lambda,  // Delta(n) <= Lambda(n) <= 3t Delta(n)^2
  dk_vs_ck,         // D_{k,sigma}(n) >= C_{k,sigma}(n-2k)/t
  d_vs_dprime,      // D'/t <= D, D <= D', D <= D' + n (D0 when sigma is empty)
};

struct BoundCheck {
  BoundFamily family;
  std::size_t n_from = 0, n_to = 0;
  SigmaPattern sigma;
};

struct BoundRow {
  std::string check;
  std::size_t n;
  double lhs, rhs;
  bool pass;
};

/// Evaluates each requested inequality at every n in its range. Refuses
/// (throws) when a table it needs is not exact.
inline std::vector<BoundRow> verify_bounds(const MillerAlphabet& ma, const std::vector<BoundCheck>& checks,
                                           const MetricOptions& opt = {}) {
  const Presentation& p = ma.base();
  const double t = static_cast<double>(p.t());
  std::map<std::string, MetricTable> cache;
  auto need = [&](const std::string& key, auto make) -> const MetricTable& {
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, make()).first;
    if (!it->second.exact()) throw std::runtime_error("table " + it->second.kind + " is not exact; refusing to verify");
    return it->second;
  };
  std::vector<BoundRow> rows;
  auto row = [&](std::string name, std::size_t n, double lhs, double rhs) {
    rows.push_back({std::move(name), n, lhs, rhs, lhs <= rhs + 1e-9});
  };
  for (const BoundCheck& c : checks) {
    if (c.n_from > c.n_to) continue;
    const std::size_t top = c.n_to;
    switch (c.family) {
      case BoundFamily::d0_vs_lambda: {
        if (top < 2) break;
        const auto& d0 = need("D0:" + std::to_string(top), [&] { return d0_table(ma, top, opt); });
        const auto& lam = need("Lambda:" + std::to_string(top - 2), [&] { return lambda_table(p, top - 2, opt.limits); });
        for (std::size_t n = std::max<std::size_t>(c.n_from, 2); n <= top; ++n) {
          const double l = static_cast<double>(lam.at(n - 2));
          row("Lambda(n-2)/2t <= D0(n)", n, l / (2 * t), static_cast<double>(d0.at(n)));
          row("D0(n) <= Lambda(n-2)", n, static_cast<double>(d0.at(n)), l);
        }
        break;
      }
      case BoundFamily::delta_vs_lambda: {
        const auto& del = need("Delta:" + std::to_string(top), [&] { return delta_table(p, top, opt.limits); });
        const auto& lam = need("Lambda:" + std::to_string(top), [&] { return lambda_table(p, top, opt.limits); });
        for (std::size_t n = c.n_from; n <= top; ++n) {
          const double d = static_cast<double>(del.at(n)), l = static_cast<double>(lam.at(n));
          row("Delta(n) <= Lambda(n)", n, d, l);
          row("Lambda(n) <= 3t Delta(n)^2", n, l, 3 * t * d * d);
        }
        break;
      }
      case BoundFamily::dk_vs_ck: {
        const std::size_t k = c.sigma.size();
        if (k == 0) throw std::invalid_argument("sigma must be nonempty");
        if (top < 2 * k) break;
        const std::string label = detail::sigma_label(c.sigma);
        const auto& dk = need("D" + label + ":" + std::to_string(top), [&] { return dk_table(ma, c.sigma, top, opt); });
        const auto& ck = need("C" + label + ":" + std::to_string(top - 2 * k),
                              [&] { return ck_table(p, c.sigma, top - 2 * k, opt); });
        for (std::size_t n = std::max(c.n_from, 2 * k); n <= top; ++n) {
          row("C(n-2k)/t <= D(n)", n, static_cast<double>(ck.at(n - 2 * k)) / t, static_cast<double>(dk.at(n)));
        }
        break;
      }
      case BoundFamily::d_vs_dprime: {
        const bool zero = c.sigma.size() == 0;
        const std::string label = zero ? "0" : detail::sigma_label(c.sigma);
        auto make = [&](bool primed) {
          return zero ? d0_table(ma, top, opt, primed) : dk_table(ma, c.sigma, top, opt, primed);
        };
        const auto& d = need("D" + label + ":" + std::to_string(top), [&] { return make(false); });
        const auto& dp = need("D" + label + "':" + std::to_string(top), [&] { return make(true); });
        for (std::size_t n = c.n_from; n <= top; ++n) {
          const double a = static_cast<double>(d.at(n)), b = static_cast<double>(dp.at(n));
          row("D'(n)/t <= D(n)", n, b / t, a);
          row("D(n) <= D'(n)", n, a, b);
          row("D(n) <= D'(n)+n", n, a, b + static_cast<double>(n));
        }
        break;
      }
    }
  }
  return rows;
}

inline std::string report_csv(const std::vector<BoundRow>& rows) {
  std::ostringstream out;
  out << "check,n,lhs,rhs,pass\n";
  for (const auto& r : rows) out << '"' << r.check << "\"," << r.n << ',' << r.lhs << ',' << r.rhs << ',' << (r.pass ? "pass" : "fail") << '\n';
  return out.str();
}

}  // namespace mm
