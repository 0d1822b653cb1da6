#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "metab/generators.hpp"
#include "metab/suites.hpp"
#include "support/oracles.hpp"

using namespace metab;

namespace {

IAMatrix random_generator(int n, std::mt19937_64& rng) {
  Ring ring(n);
  std::uniform_int_distribution<int> idx(1, n);
  int i = idx(rng), j = idx(rng);
  while (j == i) j = idx(rng);
  if (rng() % 2) return rng() % 2 ? dilation(n, i, j) : mat_inv(dilation(n, i, j));
  int u = idx(rng);
  while (u == i || u == j) u = idx(rng);
  return row_elem(u, koszul_row(ring, i, j, random_poly(ring, rng, 2, 1)));
}

}  // namespace

TEST_CASE("dilations have determinant x_j and fix sigma") {
  for (int n : {2, 4}) {
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        IAMatrix d = dilation(n, i, j);
        CHECK(fixes_sigma(d.matrix()));
        CHECK(d.matrix().det() == Ring(n).x(j));
        CHECK(det_monomial(d).s == Monomial::unit(j));
      }
  }
  CHECK_THROWS(dilation(3, 2, 2));
}

TEST_CASE("products keep the IA invariants and the determinant form") {
  std::mt19937_64 rng(8);
  const int n = 4;
  for (int trial = 0; trial < 40; ++trial) {
    IAMatrix a = IAMatrix::identity(n);
    for (int k = 0; k < 4; ++k) a = a * random_generator(n, rng);
    oracle::Point p = oracle::random_point(n, rng);
    CHECK(oracle::fixes_sigma_at(a.matrix(), p));
    CHECK(entries_in_tail_span(a));
    DetMonomial s = det_monomial(a);
    CHECK(oracle::det(oracle::eval(a.matrix(), p)) == oracle::eval_monomial(s.s, n, p));
    CHECK(a.matrix().det() == LaurentPoly::monomial(n, s.s));
  }
}

TEST_CASE("inverses are exact whichever route computes them") {
  std::mt19937_64 rng(9);
  const int n = 4;
  for (int trial = 0; trial < 40; ++trial) {
    IAMatrix a = random_generator(n, rng) * random_generator(n, rng) * random_generator(n, rng);
    IAMatrix b = IAMatrix::trusted(a.matrix());  // no product history
    IAMatrix ai = mat_inv(a), bi = mat_inv(b);
    CHECK(ai == bi);
    CHECK((a * ai).is_identity());
    CHECK((ai * a).is_identity());
    CHECK(mat_inv(ai) == a);
    DetMonomial d = det_monomial(a);
    CHECK(a.matrix().adjugate().shifted(-d.s) == ai.matrix());
  }
}

TEST_CASE("powers and commutators") {
  const int n = 4;
  IAMatrix d = dilation(n, 1, 2), r = row_elem(3, koszul_row(Ring(n), 1, 2, Ring(n).one()));
  CHECK(power(d, 3) == d * d * d);
  CHECK(power(d, -2) == mat_inv(d * d));
  CHECK(power(d, 0).is_identity());
  CHECK(commutator(d, r) == d * r * mat_inv(d) * mat_inv(r));
  CHECK(commutator(r, r).is_identity());
}

TEST_CASE("validation rejects non-IA and singular matrices") {
  Ring ring(3);
  Matrix twice = Matrix::identity(3);
  twice(1, 1) = ring.constant(2);
  CHECK_THROWS_AS(IAMatrix::from_matrix(twice), NotIA);
  // row 1 = 2 (sigma_2, -sigma_1, 0) fixes sigma; det = 2 x2 - 1
  Matrix sing = Matrix::identity(3);
  sing(1, 1) += ring.constant(2) * ring.sigma(2);
  sing(1, 2) -= ring.constant(2) * ring.sigma(1);
  CHECK(fixes_sigma(sing));
  CHECK(sing.det() == ring.parse("2*x2 - 1"));
  CHECK_THROWS_AS(IAMatrix::from_matrix(sing), NotInvertible);
  CHECK_FALSE(check_ia(sing));
  CHECK(check_ia(dilation(3, 1, 2)));
}

TEST_CASE("congruence membership") {
  const int n = 4;
  Ring ring(n);
  IAMatrix r = row_elem(1, koszul_row(ring, 2, 3, ring.constant(4)));
  CHECK(in_IG(r, 2));
  CHECK(in_IG(r, 4));
  CHECK_FALSE(in_IG(r, 3));
  CHECK_FALSE(in_IG(dilation(n, 1, 2), 2));
  // a fourth power of a dilation is congruent to I modulo H_2 but not H_4
  IAMatrix d4 = power(dilation(n, 1, 2), 4);
  CHECK(in_IG(d4, 2));
  CHECK_FALSE(in_IG(d4, 4));
  for (const IAMatrix& a : {r, d4})
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) CHECK(oracle::in_H(a.a(i, j), 2) == true);
}

TEST_CASE("ISL membership") {
  const int n = 4;
  Ring ring(n);
  // I + G with row 1 zero and the minor entries in sigma_1 H_2
  Matrix g = Matrix::identity(n);
  LaurentPoly d = ring.constant(2);
  g(2, 3) += ring.sigma(1) * d;
  g(2, 1) -= ring.sigma(3) * d;
  IAMatrix a = IAMatrix::from_matrix(g);
  CHECK(in_ISL(a, 1, 2));
  CHECK_FALSE(in_ISL(a, 1, 3));
  CHECK_FALSE(in_ISL(a, 2, 2));
  CHECK_FALSE(in_ISL(dilation(n, 2, 3), 1, 2));
}

TEST_CASE("substitution commutes with products") {
  std::mt19937_64 rng(12);
  const int n = 4;
  for (int trial = 0; trial < 20; ++trial) {
    IAMatrix a = random_generator(n, rng), b = random_generator(n, rng);
    IndexSet s{3, 4};
    CHECK(substitute_ones((a * b).matrix(), s) == substitute_ones(a.matrix(), s) * substitute_ones(b.matrix(), s));
  }
}
