#include <gtest/gtest.h>

#include <array>
#include <map>

#include "mm/length_functions.hpp"
#include "mm/presentation.hpp"
#include "support.hpp"

using namespace mm;

namespace {

const char* kZ2 = "[generators]\na b\n[relators]\na b a^-1 b^-1\n[oracle]\nabelian\n";
const char* kZmod2 = "[generators]\na\n[relators]\na a\n[oracle]\nfinite:2\n";
const char* kS3 = "[generators]\na b\n[relators]\na a\nb b b\na b a b\n[oracle]\nfinite:6\n";

// S3 acting on {0,1,2}: a = (0 1), b = (0 1 2)
std::array<int, 3> s3_image(const Word& w) {
  std::array<int, 3> perm{0, 1, 2};
  const std::array<std::array<int, 3>, 4> gen{{{1, 0, 2}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}}};
  for (Letter l : w) {
    const auto& g = gen[letter_key(l)];
    std::array<int, 3> next{};
    for (int i = 0; i < 3; ++i) next[i] = g[perm[i]];
    perm = next;
  }
  return perm;
}

// Minimal f over explicit expressions with <= max_factors factors and
// conjugators of length <= max_conj. Independent of the graph search.
std::map<std::vector<Letter>, std::size_t> brute_lambda(const Presentation& p, std::size_t max_factors,
                                                        std::size_t max_conj) {
  auto gens = p.generators();
  auto conjs = words_up_to(gens, max_conj);
  std::vector<RelatorExpression::Factor> choices;
  for (const Word& w : conjs) {
    for (std::size_t r = 0; r < p.relators().size(); ++r) {
      for (int s : {1, -1}) choices.push_back({w, r, s});
    }
  }
  std::map<std::vector<Letter>, std::size_t> best{{{}, 0}};
  std::vector<RelatorExpression> layer{RelatorExpression{}};
  for (std::size_t m = 1; m <= max_factors; ++m) {
    std::vector<RelatorExpression> next;
    for (const auto& e : layer) {
      for (const auto& c : choices) {
        RelatorExpression f = e;
        f.factors.push_back(c);
        auto key = f.expand(p.relators()).vec();
        auto v = f_value(f);
        auto it = best.find(key);
        if (it == best.end() || v < it->second) best[key] = v;
        next.push_back(std::move(f));
      }
    }
    layer = std::move(next);
  }
  return best;
}

}  // namespace

TEST(Presentation, ParsesAndRoundTrips) {
  auto p = parse_presentation(kZ2);
  EXPECT_EQ(p.generator_count(), 2u);
  EXPECT_EQ(p.relators().size(), 1u);
  EXPECT_EQ(p.t(), 4u);
  EXPECT_EQ(p.to_text(), kZ2);
  EXPECT_EQ(parse_presentation(kZmod2).t(), 2u);
  auto again = parse_presentation("\n[generators]\n a\n b \n\n[relators]\n a b a^-1 b^-1\n[oracle]\n abelian\n");
  EXPECT_EQ(again.to_text(), kZ2);
}

TEST(Presentation, ParseErrors) {
  auto line_of = [](const char* text) -> std::size_t {
    try {
      parse_presentation(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("[relators]\na\n[oracle]\nabelian\n"), 1u);
  EXPECT_EQ(line_of("[generators]\na\n[relators]\na c\n[oracle]\nabelian\n"), 4u);
  EXPECT_EQ(line_of("[generators]\na\n[relators]\na a\n[oracle]\nfinite:x\n"), 6u);
  EXPECT_EQ(line_of("[generators]\na\n[relators]\na a^-1\n[oracle]\nabelian\n"), 4u);
  EXPECT_EQ(line_of("[generators]\na\n[relators]\na\n"), 5u);
  EXPECT_THROW(parse_presentation("[generators]\na q\n[relators]\na\n[oracle]\nabelian\n"), AlphabetError);
  EXPECT_THROW(parse_presentation("[generators]\na\n[relators]\n[oracle]\nabelian\n"), std::invalid_argument);
  EXPECT_THROW(parse_presentation("[generators]\na b\n[relators]\na a\n[oracle]\nabelian\n"), OracleError);
  EXPECT_THROW(parse_presentation("[generators]\na b\n[relators]\na a\n[oracle]\nfinite:3\n"), OracleError);
}

TEST(WordProblem, Z2Examples) {
  auto p = parse_presentation(kZ2);
  EXPECT_TRUE(word_problem(p, p.parse("a b a^-1 b^-1")).is_true());
  EXPECT_TRUE(word_problem(p, p.parse("a")).is_false());
  EXPECT_TRUE(word_problem(p, p.parse("b a b^-1 a^-1")).is_true());
  EXPECT_THROW(p.word_problem(Word{letter(5)}), AlphabetError);
}

TEST(WordProblem, FreeModeOfAbelianStrategy) {
  auto p = parse_presentation("[generators]\na b c\n[relators]\nc\n[oracle]\nabelian\n");
  EXPECT_FALSE(p.known_abelian());
  EXPECT_TRUE(p.word_problem(p.parse("a c b c^-1 b^-1 a^-1")).is_true());
  EXPECT_TRUE(p.word_problem(p.parse("a b a^-1 b^-1")).is_false());
  EXPECT_EQ(p.cyclic_membership(p.parse("a b"), p.parse("a c b a b")).value(), 2);
}

TEST(WordProblem, FiniteAgreesWithPermutations) {
  auto p = parse_presentation(kS3);
  EXPECT_FALSE(p.known_abelian());
  auto gens = p.generators();
  const std::array<int, 3> id{0, 1, 2};
  for_each_word_up_to(gens, 6, [&](const Word& w) {
    EXPECT_EQ(p.word_problem(w).is_true(), s3_image(w) == id);
    return true;
  });
  auto c = p.cyclic_membership(p.parse("b"), p.parse("b^-1 b^-1"));
  ASSERT_TRUE(c.is_yes());
  EXPECT_EQ(c.value(), 1);
  EXPECT_TRUE(p.cyclic_membership(p.parse("b"), p.parse("a")).is_no());
}

TEST(WordProblem, SearchIsSoundOnZ2) {
  auto exact = parse_presentation(kZ2);
  auto search = parse_presentation("[generators]\na b\n[relators]\na b a^-1 b^-1\n[oracle]\nsearch:20000\n");
  auto gens = exact.generators();
  for_each_word_up_to(gens, 5, [&](const Word& w) {
    auto s = search.word_problem(w);
    EXPECT_FALSE(s.is_false());
    if (exact.word_problem(w).is_true()) {
      EXPECT_TRUE(s.is_true()) << exact.format(w);
    } else {
      EXPECT_TRUE(s.is_unknown());
    }
    return true;
  });
}

TEST(CyclicMembership, Abelian) {
  auto p = parse_presentation(kZ2);
  EXPECT_EQ(p.cyclic_membership(p.parse("a b"), p.parse("b a b a")).value(), 2);
  EXPECT_TRUE(p.cyclic_membership(p.parse("a a"), p.parse("a")).is_no());
  EXPECT_EQ(p.cyclic_membership(Word{}, Word{}).value(), 0);
  auto z2 = parse_presentation(kZmod2);
  EXPECT_EQ(z2.cyclic_membership(z2.parse("a"), z2.parse("a a a")).value(), 1);
}

// t rho^n in <g>, against a scan over |n| <= 12
TEST(PowerCosetMembership, MatchesScan) {
  const char* kZ3 = "[generators]\na b c\n[relators]\na b a^-1 b^-1\nb c b^-1 c^-1\na c a^-1 c^-1\n[oracle]\nabelian\n";
  for (const char* text : {kZ2, kZ3, kZmod2, kS3}) {
    auto p = parse_presentation(text);
    auto ws = words_up_to(p.generators(), 3);
    int yes = 0, no = 0;
    for (std::size_t i = 0; i < ws.size(); i += 3) {
      for (std::size_t j = 0; j < ws.size(); j += 5) {
        for (std::size_t k = 0; k < ws.size(); k += 7) {
          const Word &t = ws[i], &rho = ws[j], &g = ws[k];
          bool scan = false;
          for (long n = -12; n <= 12 && !scan; ++n) scan = p.cyclic_membership(g, t * power(rho, n)).is_yes();
          auto d = p.power_coset_membership(t, rho, g);
          ASSERT_FALSE(d.is_unknown());
          EXPECT_EQ(d.is_yes(), scan) << p.format(t) << " | " << p.format(rho) << " | " << p.format(g);
          if (d.is_yes()) {
            EXPECT_TRUE(p.cyclic_membership(g, t * power(rho, d.value())).is_yes());
            ++yes;
          } else {
            ++no;
          }
        }
      }
    }
    EXPECT_GT(yes, 0);
    EXPECT_GT(no, 0) << text;
  }
  auto search = parse_presentation("[generators]\na b\n[relators]\na b a^-1 b^-1\n[oracle]\nsearch:100\n");
  EXPECT_TRUE(search.power_coset_membership(search.parse("a"), search.parse("b"), search.parse("a")).is_unknown());
}

TEST(FValue, Examples) {
  EXPECT_EQ(f_value({{{Word{}, 0, 1}}}), 1u);
  EXPECT_EQ(f_value({{{Word{letter(0)}, 0, 1}}}), 3u);
  EXPECT_EQ(f_value({}), 0u);
  RelatorExpression e{{{Word{letter(0)}, 0, 1}, {Word{letter(1)}, 0, -1}}};
  EXPECT_EQ(f_value(e), 2u + 1 + 1 + 2);
}

TEST(Delta, Examples) {
  auto p = parse_presentation(kZ2);
  auto d = delta_of(p, p.relators()[0]);
  ASSERT_TRUE(d.is_yes());
  EXPECT_EQ(d.value().size(), 1u);
  EXPECT_EQ(delta_of(p, Word{}).value().size(), 0u);
  Word g = p.parse("a a b a^-1 a^-1 b^-1");
  d = delta_of(p, g);
  ASSERT_TRUE(d.is_yes());
  EXPECT_EQ(d.value().size(), 2u);
  EXPECT_EQ(d.value().expand(p.relators()), g);
  EXPECT_THROW(delta_of(p, p.parse("a")), std::invalid_argument);
}

TEST(Delta, TightCapReportsUnknown) {
  auto p = parse_presentation(kZ2);
  auto d = delta_of(p, p.parse("a a b a^-1 a^-1 b^-1"), {100000, 0.1});
  EXPECT_TRUE(d.is_unknown());
}

TEST(Lambda, Examples) {
  auto p = parse_presentation(kZ2);
  auto l = lambda_of(p, p.relators()[0]);
  ASSERT_TRUE(l.is_yes());
  EXPECT_EQ(f_value(l.value()), 1u);
  EXPECT_EQ(f_value(lambda_of(p, Word{}).value()), 0u);
  Word g = p.parse("a a b a^-1 b^-1 a^-1");
  l = lambda_of(p, g);
  ASSERT_TRUE(l.is_yes());
  EXPECT_EQ(f_value(l.value()), 3u);
  EXPECT_EQ(l.value().expand(p.relators()), g);
}

TEST(Lambda, AgreesWithExplicitExpressions) {
  for (const char* text : {kZ2, kZmod2}) {
    auto p = parse_presentation(text);
    auto brute = brute_lambda(p, 2, 2);
    auto words = trivial_words_up_to(p, 4);
    ASSERT_TRUE(words);
    for (const Word& g : *words) {
      auto l = lambda_of(p, g);
      ASSERT_TRUE(l.is_yes());
      auto it = brute.find(g.vec());
      ASSERT_NE(it, brute.end()) << p.format(g);
      // every expression of f <= 6 uses at most 2 factors with short conjugators
      if (it->second <= 5) {
        EXPECT_EQ(f_value(l.value()), it->second) << p.format(g);
      }
      EXPECT_LE(f_value(l.value()), it->second);
      auto d = delta_of(p, g);
      ASSERT_TRUE(d.is_yes());
      EXPECT_GE(f_value(l.value()), d.value().size());
    }
  }
}

TEST(LengthFunctions, SmallValues) {
  auto z2 = parse_presentation(kZ2);
  EXPECT_EQ(dehn_function(z2, 3).value(), 0);
  EXPECT_EQ(dehn_function(z2, 4).value(), 1);
  // a^-1 b^-1 a b needs the conjugator (a b)^-1
  EXPECT_EQ(lambda_function(z2, 4).value(), 5);
  EXPECT_EQ(f_value(lambda_of(z2, z2.parse("a^-1 b^-1 a b")).value()), 5u);
  auto zm = parse_presentation(kZmod2);
  EXPECT_EQ(lambda_function(zm, 4).value(), 2);
  EXPECT_EQ(dehn_function(zm, 4).value(), 2);
  for (std::size_t n = 0; n <= 6; ++n) {
    long d = dehn_function(z2, n).value();
    long l = lambda_function(z2, n).value();
    EXPECT_LE(d, l);
    EXPECT_LE(l, 3 * static_cast<long>(z2.t()) * d * d);
  }
}
