#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "metab/magnus.hpp"

using namespace metab;

namespace {

// Fox derivative of a word, computed letter by letter from the product rule:
// d(w x_i^e)/dx_j = dw/dx_j + x^{g(w)} d(x_i^e)/dx_j.
MagnusElement fox(const GroupWord& w, int n) {
  Ring ring(n);
  Monomial g;
  std::vector<LaurentPoly> a(n, ring.zero());
  for (const Letter& l : w) {
    if (l.sign > 0) {
      a[l.gen - 1] += ring.monomial(g);
      g[l.gen] += 1;
    } else {
      g[l.gen] -= 1;
      a[l.gen - 1] -= ring.monomial(g);
    }
  }
  return MagnusElement(g, a);
}

}  // namespace

TEST_CASE("embedding matches free derivatives") {
  std::mt19937_64 rng(1);
  for (int n : {2, 4, 5}) {
    for (int trial = 0; trial < 200; ++trial) {
      GroupWord w = random_word(rng, n, 30);
      MagnusElement e = embed(w, n);
      CHECK(e == fox(w, n));
      CHECK(e.invariant_holds());
    }
  }
}

TEST_CASE("group laws") {
  std::mt19937_64 rng(2);
  const int n = 4;
  for (int trial = 0; trial < 100; ++trial) {
    MagnusElement a = embed(random_word(rng, n, 10), n), b = embed(random_word(rng, n, 10), n),
                  c = embed(random_word(rng, n, 10), n);
    CHECK((a * b) * c == a * (b * c));
    CHECK((a * a.inverse()).is_identity());
    CHECK((a.inverse() * a).is_identity());
    CHECK((a * MagnusElement(n)) == a);
  }
}

TEST_CASE("metabelian law and nontrivial commutators") {
  std::mt19937_64 rng(3);
  const int n = 4;
  for (int trial = 0; trial < 50; ++trial) {
    GroupWord a = random_word(rng, n, 6), b = random_word(rng, n, 6);
    GroupWord c = random_word(rng, n, 6), d = random_word(rng, n, 6);
    CHECK(is_identity(commutator(commutator(a, b), commutator(c, d)), n));
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) CHECK_FALSE(is_identity(commutator({{i, 1}}, {{j, 1}}), n));
  // the first commutator subgroup is not abelian in a free group, but its
  // image here is: [x1,x2] and [x3,x4] commute
  GroupWord p = commutator({{1, 1}}, {{2, 1}}), q = commutator({{3, 1}}, {{4, 1}});
  CHECK(is_identity(commutator(p, q), n));
}

TEST_CASE("word syntax") {
  const int n = 3;
  CHECK(parse_word("[x1,x2]", n) == GroupWord{{1, 1}, {2, 1}, {1, -1}, {2, -1}});
  CHECK(parse_word("x3^-2", n) == GroupWord{{3, -1}, {3, -1}});
  CHECK(parse_word("(x1 x2)^2", n) == GroupWord{{1, 1}, {2, 1}, {1, 1}, {2, 1}});
  CHECK(parse_word("", n).empty());
  CHECK(word_to_string(parse_word("x1 x2^-1", n)) == word_to_string(GroupWord{{1, 1}, {2, -1}}));
  CHECK_THROWS_AS(parse_word("x4", n), ParseError);
  CHECK_THROWS_AS(parse_word("[x1,x2", n), ParseError);
  CHECK(embed(parse_word("x1 x1^-1", n), n).is_identity());
}

TEST_CASE("projection to the finite quotient") {
  std::mt19937_64 rng(4);
  const int n = 3;
  for (int m : {2, 3}) {
    for (int trial = 0; trial < 50; ++trial) {
      MagnusElement a = embed(random_word(rng, n, 12), n), b = embed(random_word(rng, n, 12), n);
      CHECK(project(a * b, m) == project(a, m) * project(b, m));
      CHECK(project(a, m).invariant_holds());
    }
    // x1^m keeps the coordinate 1 + x1 + ... + x1^(m-1); x1^(m^2) dies
    CHECK_FALSE(project(embed(GroupWord(m, Letter{1, 1}), n), m).is_identity());
    CHECK(project(embed(GroupWord(m * m, Letter{1, 1}), n), m).is_identity());
    CHECK_FALSE(project(embed(GroupWord{{1, 1}}, n), m).is_identity());
  }
}
