#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <random>

#include "mm/mm.hpp"

using namespace mm;
using nlohmann::json;

namespace {

struct Outcome {
  Verdict verdict = Verdict::unknown;
  std::string text;         // plain-text body after the verdict word
  json certificate;         // null unless there is something to show
  std::optional<std::size_t> bound;
};

struct Flags {
  std::string presentation;
  std::size_t bound = 6;
  std::size_t budget = 0;  // 0 keeps each operation's default
  std::string c_const = "2";
  std::string sigma;
  std::string u, v;
  bool json = false;
  unsigned seed = 1;
  std::string convention = "cyclic";
};

double parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    std::size_t used = 0;
    double num = std::stod(s.substr(0, slash), &used);
    if (slash == std::string::npos) {
      if (used != s.size()) throw std::invalid_argument(s);
      return num;
    }
    double den = std::stod(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument(s);
    return num / den;
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--c-const", "expected a positive rational such as 2 or 3/2");
  }
}

SigmaPattern::Convention convention(const Flags& f) {
  return f.convention == "last" ? SigmaPattern::Convention::last : SigmaPattern::Convention::cyclic;
}

WordTuple parse_tuple(const MillerAlphabet& ma, const std::string& text) {
  WordTuple out;
  std::size_t start = 0;
  for (;;) {
    const auto semi = text.find(';', start);
    Word w = ma.base().parse(text.substr(start, semi == std::string::npos ? std::string::npos : semi - start));
    out.push_back(std::move(w));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  return out;
}

ConjParams conj_params(const Flags& f) {
  ConjParams p;
  p.c = parse_rational(f.c_const);
  if (p.c <= 0) throw CLI::ValidationError("--c-const", "must be positive");
  p.iclc_bound = f.bound;
  if (f.budget) p.step_budget = f.budget;
  return p;
}

MetricOptions metric_options(const Flags& f, bool large) {
  MetricOptions o;
  o.conj = conj_params(f);
  if (!f.budget) o.conj.step_budget = 200;
  if (f.budget) {
    o.pair_budget = f.budget;
    o.limits.steps = f.budget;
  }
  o.allow_large = large;
  return o;
}

template <class T>
Outcome from_decision(const Decision<T>& d) {
  Outcome o;
  o.verdict = d.verdict;
  if (d.is_unknown()) {
    o.bound = d.bound;
    o.text = d.reason;
  }
  return o;
}

json table_json(const MetricTable& t) {
  json rows = json::array();
  for (std::size_t n = 0; n < t.values.size(); ++n) {
    rows.push_back({{"kind", t.kind}, {"n", n}, {"value", t.values[n] ? json(*t.values[n]) : json()},
                    {"exact", t.values[n].has_value()}});
  }
  return rows;
}

int emit(const Flags& f, const std::string& yes, const std::string& no, const Outcome& o) {
  if (f.json) {
    json env = {{"verdict", to_string(o.verdict)},
                {"certificate", o.certificate},
                {"bound", o.bound ? json(*o.bound) : json()},
                {"elapsed_steps", elapsed_steps()}};
    std::cout << env.dump() << '\n';
  } else {
    std::string head = o.verdict == Verdict::yes ? yes : o.verdict == Verdict::no ? no : "UNKNOWN";
    if (!head.empty()) std::cout << head;
    if (!o.text.empty()) std::cout << (head.empty() ? "" : (head.back() == '\n' ? "" : " ")) << o.text;
    std::cout << '\n';
  }
  return o.verdict == Verdict::unknown ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conjugacy and length computations in the Miller machine M(G)"};
  app.require_subcommand(1, 1);
  Flags f;
  std::vector<std::string> words;
  std::string kind = "D0", check = "d0-lambda";
  std::size_t nmax = 6, n_from = 0, n_to = 6, count = 5, length = 6;
  bool large = false;

  auto common = [&](CLI::App* sub, std::size_t n_words, const std::string& what) {
    sub->add_option("-p,--presentation", f.presentation, "presentation file")->required()->check(CLI::ExistingFile);
    sub->add_flag("--json", f.json, "print a JSON envelope");
    sub->add_option("--bound", f.bound, "ICLC search bound on ||w||");
    sub->add_option("--budget", f.budget, "step budget for searches");
    sub->add_option("--c-const", f.c_const, "constant C in the brute-force radius");
    sub->add_option("--convention", f.convention, "reading of sigma_{k+1}")->check(CLI::IsMember({"cyclic", "last"}));
    sub->add_option("--seed", f.seed, "seed for sampled corpora");
    if (n_words) sub->add_option("words", words, what)->expected(static_cast<int>(n_words))->required();
  };
  auto* normalize_cmd = app.add_subcommand("normalize", "print the normal form alpha | tau");
  common(normalize_cmd, 1, "word over the Miller alphabet");
  auto* equal_cmd = app.add_subcommand("equal", "decide equality in M(G)");
  common(equal_cmd, 2, "two words");
  auto* conj_cmd = app.add_subcommand("conj", "decide conjugacy in M(G)");
  common(conj_cmd, 2, "two words");
  auto* iclc_cmd = app.add_subcommand("iclc", "decide the twisted list-conjugacy relation");
  common(iclc_cmd, 0, "");
  iclc_cmd->add_option("--sigma", f.sigma, "signs, e.g. +,-")->required();
  iclc_cmd->add_option("--u", f.u, "tuple w1;w2;...")->required();
  iclc_cmd->add_option("--v", f.v, "tuple w1;w2;...")->required();
  auto* csm_cmd = app.add_subcommand("csm", "decide b in <a> through conjugacy in M(G)");
  common(csm_cmd, 2, "a and b over X");
  auto* oracle_cmd = app.add_subcommand("oracle", "word problem in G: is the word trivial");
  common(oracle_cmd, 1, "word over X");
  auto* metrics_cmd = app.add_subcommand("metrics", "exact small tables as CSV");
  common(metrics_cmd, 0, "");
  metrics_cmd->add_option("--kind", kind, "D0, D0', Dk, Dk', Ck, Delta or Lambda")
      ->check(CLI::IsMember({"D0", "D0'", "Dk", "Dk'", "Ck", "Delta", "Lambda"}));
  metrics_cmd->add_option("-n,--nmax", nmax, "largest n");
  metrics_cmd->add_option("--sigma", f.sigma, "signs for Dk and Ck");
  metrics_cmd->add_flag("--large", large, "allow n > 8 or k > 2");
  auto* verify_cmd = app.add_subcommand("verify", "check inequalities between tables");
  common(verify_cmd, 0, "");
  verify_cmd->add_option("--check", check, "d0-lambda, delta-lambda, dk-ck or d-dprime")
      ->check(CLI::IsMember({"d0-lambda", "delta-lambda", "dk-ck", "d-dprime"}));
  verify_cmd->add_option("--from", n_from, "first n");
  verify_cmd->add_option("--to", n_to, "last n");
  verify_cmd->add_option("--sigma", f.sigma, "signs for dk-ck and d-dprime");
  verify_cmd->add_flag("--large", large, "allow n > 8 or k > 2");
  auto* sample_cmd = app.add_subcommand("sample", "random words over X and q from --seed");
  common(sample_cmd, 0, "");
  sample_cmd->add_option("--count", count, "number of words");
  sample_cmd->add_option("--length", length, "maximum length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    reset_steps();
    MillerAlphabet ma(load_presentation(f.presentation));
    const Presentation& p = ma.base();
    auto sigma = [&] {
      if (f.sigma.empty()) throw CLI::ValidationError("--sigma", "required here");
      return SigmaPattern::parse(f.sigma, convention(f));
    };

    if (*normalize_cmd) {
      NormalForm nf = normalize(ma, ma.parse(words[0]));
      Outcome o{Verdict::yes, ma.format(nf.alpha) + " | " + ma.format(nf.tau), {}, {}};
      o.certificate = {{"alpha", ma.format(nf.alpha)}, {"tau", ma.format(nf.tau)}};
      return emit(f, "", "", o);
    }
    if (*equal_cmd) {
      const bool eq = equal_in_mg(ma, ma.parse(words[0]), ma.parse(words[1]));
      return emit(f, "EQUAL", "NOT EQUAL", {eq ? Verdict::yes : Verdict::no, "", {}, {}});
    }
    if (*conj_cmd) {
      auto d = conjugate_in_mg(ma, ma.parse(words[0]), ma.parse(words[1]), conj_params(f));
      Outcome o = from_decision(d);
      if (d.is_yes()) o.text = ma.format(d.value()), o.certificate = ma.format(d.value());
      return emit(f, "YES", "NO", o);
    }
    if (*iclc_cmd) {
      IclcOptions io;
      io.bound = f.bound;
      auto d = iclc_decide(p, parse_tuple(ma, f.u), parse_tuple(ma, f.v), sigma(), io);
      Outcome o = from_decision(d);
      if (d.is_yes()) {
        o.text = p.format(d.value().w) + " | " + p.format(d.value().eps);
        o.certificate = {{"w", p.format(d.value().w)}, {"eps", p.format(d.value().eps)}};
      }
      return emit(f, "YES", "NO", o);
    }
    if (*csm_cmd) {
      auto d = csm_via_conjugacy(ma, p.parse(words[0]), p.parse(words[1]), conj_params(f));
      return emit(f, "TRUE", "FALSE", from_decision(d));
    }
    if (*oracle_cmd) {
      auto a = p.word_problem(p.parse(words[0]));
      Outcome o{a.value, "", {}, {}};
      if (a.is_unknown()) o.bound = a.bound, o.text = "oracle undecided";
      return emit(f, "TRUE", "FALSE", o);
    }
    if (*metrics_cmd) {
      const MetricOptions mo = metric_options(f, large);
      MetricTable t;
      if (kind == "D0" || kind == "D0'") t = d0_table(ma, nmax, mo, kind == "D0'");
      else if (kind == "Dk" || kind == "Dk'") t = dk_table(ma, sigma(), nmax, mo, kind == "Dk'");
      else if (kind == "Ck") t = ck_table(p, sigma(), nmax, mo);
      else if (kind == "Delta") t = delta_table(p, nmax, mo.limits);
      else t = lambda_table(p, nmax, mo.limits);
      Outcome o{t.exact() ? Verdict::yes : Verdict::unknown, "", table_json(t), {}};
      if (!f.json) {
        std::cout << t.to_csv();
        return t.exact() ? 0 : 2;
      }
      return emit(f, "", "", o);
    }
    if (*verify_cmd) {
      BoundCheck c{BoundFamily::d0_vs_lambda, n_from, n_to, {}};
      if (check == "delta-lambda") c.family = BoundFamily::delta_vs_lambda;
      if (check == "dk-ck") c.family = BoundFamily::dk_vs_ck, c.sigma = sigma();
      if (check == "d-dprime") {
        c.family = BoundFamily::d_vs_dprime;
        if (!f.sigma.empty()) c.sigma = sigma();
      }
      std::vector<BoundRow> rows;
      try {
        rows = verify_bounds(ma, {c}, metric_options(f, large));
      } catch (const std::runtime_error& e) {
        return emit(f, "", "", {Verdict::unknown, e.what(), {}, std::size_t{0}});
      }
      if (!f.json) {
        std::cout << report_csv(rows);
        return 0;
      }
      json out = json::array();
      for (const auto& r : rows) out.push_back({{"check", r.check}, {"n", r.n}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"pass", r.pass}});
      return emit(f, "", "", {Verdict::yes, "", out, {}});
    }
    if (*sample_cmd) {
      std::mt19937 rng(f.seed);
      auto gens = ma.x_generators();
      gens.push_back(ma.q());
      json out = json::array();
      std::string text;
      for (std::size_t i = 0; i < count; ++i) {
        std::vector<Letter> raw;
        for (std::size_t j = 0, n = rng() % (length + 1); j < n; ++j) {
          raw.push_back(letter(gens[rng() % gens.size()], rng() % 2 ? 1 : -1));
        }
        const std::string w = ma.format(Word(raw));
        out.push_back(w);
        text += (i ? "\n" : "") + w;
      }
      return emit(f, "", "", {Verdict::yes, text, out, {}});
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const OracleError& e) {
    std::cerr << "oracle error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
