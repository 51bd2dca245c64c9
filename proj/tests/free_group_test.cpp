#include <gtest/gtest.h>

#include <random>
#include <set>

#include "mm/alphabet.hpp"
#include "mm/free_group.hpp"
#include "support.hpp"

using namespace mm;

namespace {

const Alphabet ab({"a", "b"});
const std::vector<std::size_t> gens{0, 1};

Word w(const char* s) { return ab.parse(s); }

Word random_word(std::mt19937& rng, std::size_t max_len) {
  std::vector<Letter> raw;
  std::size_t len = rng() % (max_len + 1);
  for (std::size_t i = 0; i < len; ++i) raw.push_back(letter(rng() % 2, rng() % 2 ? 1 : -1));
  return Word(raw);
}

// First conjugator of length <= radius in shortlex order, if any.
std::optional<Word> brute_list_conjugator(const std::vector<Word>& as, const std::vector<Word>& bs,
                                          std::size_t radius) {
  std::optional<Word> found;
  for_each_word_up_to(gens, radius, [&](const Word& s) {
    for (std::size_t i = 0; i < as.size(); ++i) {
      if (conjugate(as[i], s) != bs[i]) return true;
    }
    found = s;
    return false;
  });
  return found;
}

}  // namespace

TEST(FreeConjugacy, Examples) {
  auto d = free_conjugacy(w("a b"), w("b a"));
  ASSERT_TRUE(d.is_yes());
  EXPECT_EQ(d.value().conjugator, w("a^-1"));
  EXPECT_TRUE(free_conjugacy(w("a"), w("b")).is_no());
  d = free_conjugacy(w("a b a b b"), w("b a b b a"));
  ASSERT_TRUE(d.is_yes());
  EXPECT_EQ(conjugate(w("a b a b b"), d.value().conjugator), w("b a b b a"));
  EXPECT_TRUE(brute_list_conjugator({w("a b a b b")}, {w("b a b b a")}, 5).has_value());
}

TEST(FreeConjugacy, AgreesWithBruteForce) {
  std::mt19937 rng(5);
  for (int i = 0; i < 300; ++i) {
    Word a = random_word(rng, 5);
    Word b = i % 2 ? conjugate(a, random_word(rng, 3)) : random_word(rng, 5);
    auto d = free_conjugacy(a, b);
    ASSERT_FALSE(d.is_unknown());
    if (d.is_yes()) {
      EXPECT_EQ(conjugate(a, d.value().conjugator), b);
    } else {
      // a conjugator would need length <= |a| + |b| / 2 + |a|; radius 6 covers these sizes
      EXPECT_FALSE(brute_list_conjugator({a}, {b}, 6).has_value());
    }
  }
}

TEST(PrimitiveRoot, Examples) {
  auto r = primitive_root(w("a b a b"));
  EXPECT_EQ(r.root, w("a b"));
  EXPECT_EQ(r.exponent, 2);
  r = primitive_root(w("a"));
  EXPECT_EQ(r.root, w("a"));
  EXPECT_EQ(r.exponent, 1);
  r = primitive_root(w("a b a^-1"));
  EXPECT_EQ(r.root, w("a b a^-1"));
  EXPECT_EQ(r.exponent, 1);
  r = primitive_root(w("b a a a b^-1"));
  EXPECT_EQ(r.root, w("b a b^-1"));
  EXPECT_EQ(r.exponent, 3);
  EXPECT_THROW(primitive_root(Word{}), std::invalid_argument);
}

TEST(PowerMembership, Examples) {
  auto d = power_membership(w("a b"), w("a b a b a b"));
  ASSERT_TRUE(d.is_yes());
  EXPECT_EQ(d.value(), 3);
  EXPECT_TRUE(power_membership(w("a"), w("b")).is_no());
  EXPECT_TRUE(power_membership(w("a b"), w("b a")).is_no());
  EXPECT_EQ(power_membership(w("a a"), w("a^-1 a^-1 a^-1 a^-1")).value(), -2);
  EXPECT_TRUE(power_membership(w("a a"), w("a a a")).is_no());
  EXPECT_EQ(power_membership(Word{}, Word{}).value(), 0);
}

TEST(ListConjugacy, Examples) {
  auto d = free_list_conjugacy({w("a"), w("b")}, {w("a"), w("b")});
  ASSERT_TRUE(d.is_yes());
  EXPECT_EQ(d.value(), Word{});
  d = free_list_conjugacy({w("a"), w("b")}, {w("b^-1 a b"), w("b")});
  ASSERT_TRUE(d.is_yes());
  EXPECT_EQ(d.value(), w("b^-1"));
  EXPECT_TRUE(free_list_conjugacy({w("a"), w("b")}, {w("b"), w("a")}).is_no());
  EXPECT_FALSE(brute_list_conjugator({w("a"), w("b")}, {w("b"), w("a")}, 6).has_value());
  EXPECT_THROW(free_list_conjugacy({w("a")}, {}), std::invalid_argument);
}

TEST(ListConjugacy, AgreesWithBruteForce) {
  std::mt19937 rng(17);
  int yes = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<Word> as{random_word(rng, 3), random_word(rng, 3)};
    std::vector<Word> bs;
    Word s = random_word(rng, 3);
    for (auto& a : as) bs.push_back(i % 3 ? conjugate(a, s) : random_word(rng, 3));
    auto set = list_conjugators(as, bs);
    auto brute = brute_list_conjugator(as, bs, 5);
    if (brute) {
      EXPECT_TRUE(set.contains(*brute));
    }
    if (!set.is_empty()) {
      ++yes;
      for (std::size_t k = 0; k < as.size(); ++k) EXPECT_EQ(conjugate(as[k], set.base), bs[k]);
    } else {
      EXPECT_FALSE(brute.has_value());
    }
  }
  EXPECT_GT(yes, 100);
}

TEST(Stallings, Examples) {
  std::vector<Word> g1{w("a a"), w("b")};
  EXPECT_TRUE(stallings_membership(g1, w("a a b")));
  EXPECT_FALSE(stallings_membership(g1, w("a")));
  std::vector<Word> g2{w("a b"), w("a^-1")};
  EXPECT_TRUE(stallings_membership(g2, w("b")));
}

TEST(Stallings, AgreesWithExpressionSearch) {
  std::vector<std::vector<Word>> families{
      {w("a a"), w("b")}, {w("a b"), w("a^-1")}, {w("a b a^-1"), w("b b")}, {w("a b"), w("b a")}};
  for (const auto& g : families) {
    std::set<std::vector<Letter>> reachable{{}};
    std::vector<Word> frontier{Word{}};
    for (int depth = 0; depth < 10; ++depth) {
      std::vector<Word> next;
      for (const Word& x : frontier) {
        for (const Word& y : g) {
          for (const Word& z : {y, y.inverse()}) {
            Word p = x * z;
            if (reachable.insert(p.vec()).second) next.push_back(p);
          }
        }
      }
      frontier = std::move(next);
    }
    for (const Word& y : g) EXPECT_TRUE(stallings_membership(g, y));
    for_each_word_up_to(gens, 4, [&](const Word& x) {
      EXPECT_EQ(stallings_membership(g, x), reachable.count(x.vec()) > 0) << ab.format(x);
      return true;
    });
  }
}

TEST(CyclicIntersection, Examples) {
  EXPECT_EQ(cyclic_intersection({w("a a"), w("a a a")}), w("a a a a a a"));
  EXPECT_EQ(cyclic_intersection({w("a"), w("b")}), Word{});
  EXPECT_EQ(cyclic_intersection({w("a b"), w("b a")}), Word{});
  EXPECT_EQ(cyclic_intersection({w("a^-1 a^-1")}), w("a a"));
  EXPECT_EQ(cyclic_intersection({w("a b a b"), w("b^-1 a^-1 b^-1 a^-1 b^-1 a^-1")}),
            power(w("a b"), 6));
}

TEST(CyclicIntersection, GeneratesTheIntersection) {
  std::mt19937 rng(23);
  for (int i = 0; i < 60; ++i) {
    Word r = random_word(rng, 2);
    std::vector<Word> vs;
    for (int k = 0; k < 2; ++k) vs.push_back(power(r, 1 + rng() % 3) * Word{});
    if (i % 4 == 0) vs.push_back(random_word(rng, 3));
    Word g = cyclic_intersection(vs);
    for (const Word& v : vs) EXPECT_TRUE(power_membership(v, g).is_yes());
    for_each_word_up_to(gens, 6, [&](const Word& x) {
      bool in_all = true;
      for (const Word& v : vs) in_all = in_all && power_membership(v, x).is_yes();
      if (in_all) {
        EXPECT_TRUE(power_membership(g, x).is_yes());
      }
      return true;
    });
  }
}
