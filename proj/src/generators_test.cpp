#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "metab/certificate.hpp"
#include "metab/generators.hpp"
#include "metab/row_relation.hpp"
#include "metab/suites.hpp"
#include "support/oracles.hpp"

using namespace metab;

namespace {

// Expected rows written out from the definitions, not from the constructors.
IAMatrix koszul_elem(int n, int u, int i, int j, const LaurentPoly& f) {
  Ring ring(n);
  Matrix m = Matrix::identity(n);
  m(u, j) += f * ring.sigma(i);
  m(u, i) -= f * ring.sigma(j);
  return IAMatrix::from_matrix(m);
}

void check_certified(const Certified& c, const IAMatrix& expected, int m) {
  CHECK(c.matrix == expected);
  CHECK(eval_witness(c.witness, expected.n()) == expected);
  CHECK(verify_witness(c.witness, expected, m));
}

}  // namespace

TEST_CASE("type-1 rows replay on random coefficients") {
  std::mt19937_64 rng(31);
  for (int n : {4, 5}) {
    Ring ring(n);
    for (int m : {2, 3}) {
      for (int trial = 0; trial < 15; ++trial) {
        LaurentPoly f = random_poly(ring, rng, 2, 1);
        int u = 1, i = 2, j = 3, k = 4;
        check_certified(type1_basic(n, u, i, j, f, m), koszul_elem(n, u, i, j, ring.constant(m) * f), m);
        check_certified(type1_comm_k(n, u, i, j, k, f, m),
                        koszul_elem(n, u, i, j, ring.sigma(k) * ring.mu(k, m) * f), m);
        check_certified(type1_comm_ik(n, u, i, j, k, f, m),
                        koszul_elem(n, u, i, j, ring.sigma(k) * ring.mu(i, m) * f), m);
        check_certified(type1_comm_ik(n, u, j, i, k, f, m),
                        koszul_elem(n, u, j, i, ring.sigma(k) * ring.mu(j, m) * f), m);
      }
    }
  }
}

TEST_CASE("type-2 rows and blocks replay") {
  std::mt19937_64 rng(32);
  const int n = 4;
  Ring ring(n);
  for (int m : {2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      LaurentPoly f = random_poly(ring, rng, 2, 1);
      LaurentPoly s = ring.sigma(2);
      check_certified(type2_sq(n, 2, 1, 3, f, m), koszul_elem(n, 2, 1, 3, s * s * ring.mu(2, m) * f), m);
      check_certified(type2_mixed(n, 2, 1, 3, f, m),
                      koszul_elem(n, 2, 1, 3, s * ring.sigma(3) * ring.mu(1, m) * f), m);
      LaurentPoly h = random_H_member(ring, m, rng);
      Matrix block = Matrix::identity(n);
      LaurentPoly su = ring.sigma(1), sv = ring.sigma(3);
      block(1, 1) += su * sv * h;
      block(1, 3) -= su * su * h;
      block(3, 1) += sv * sv * h;
      block(3, 3) -= su * sv * h;
      check_certified(type2_block(n, 1, 3, h, m), IAMatrix::from_matrix(block), m);
      CHECK(block_matrix(n, 1, 3, h).matrix() == block);
    }
  }
}

TEST_CASE("blocks are additive in their coefficient") {
  std::mt19937_64 rng(33);
  const int n = 4;
  Ring ring(n);
  for (int trial = 0; trial < 10; ++trial) {
    LaurentPoly f = random_H_member(ring, 2, rng), g = random_H_member(ring, 2, rng);
    CHECK(block_matrix(n, 2, 4, f) * block_matrix(n, 2, 4, g) == block_matrix(n, 2, 4, f + g));
  }
}

TEST_CASE("block coefficients outside H are refused") {
  const int n = 4;
  Ring ring(n);
  CHECK_THROWS(type2_block(n, 1, 2, ring.one(), 2));
  CHECK_THROWS(type1_basic(3, 1, 2, 3, ring.one(), 2));
}

TEST_CASE("witness discipline") {
  const int n = 4;
  IAMatrix d = dilation(n, 1, 2);
  CHECK(check_discipline(PowerWitness::pow(d, 4), 2).ok);
  CHECK_FALSE(check_discipline(PowerWitness::pow(d, -2), 2).ok);
  CHECK_FALSE(check_discipline(PowerWitness::pow(d, 3), 2).ok);
  CHECK_FALSE(check_discipline(PowerWitness::plain(d), 2).ok);
  CHECK_FALSE(check_discipline(PowerWitness::commutator(PowerWitness::plain(d), PowerWitness::plain(d)), 2).ok);
  CHECK(check_discipline(PowerWitness::commutator(PowerWitness::plain(d), PowerWitness::pow(d, 2)), 2).ok);
  CHECK(check_discipline(PowerWitness::inverse(PowerWitness::pow(d, 2)), 2).ok);
  // a witness whose value is right but whose leaves are not m-th powers
  CHECK_FALSE(verify_witness(PowerWitness::pow(d, 1), d, 2));
  CHECK_FALSE(verify_witness(PowerWitness::pow(d, 2), d, 2));
}

TEST_CASE("witness text form evaluates to the same matrix") {
  Certified c = type2_mixed(4, 1, 2, 3, Ring(4).parse("x2 - 3"), 2);
  PowerWitness back = witness_from_text(witness_to_text(c.witness), 4);
  CHECK(eval_witness(back, 4) == c.matrix);
  CHECK(back.node_count() == c.witness.node_count());
}

TEST_CASE("certified products and inverses") {
  const int n = 4;
  Ring ring(n);
  Certified a = type1_basic(n, 1, 2, 3, ring.x(4), 2), b = type2_sq(n, 2, 1, 4, ring.one(), 2);
  Certified p = certified_product({a, b}, n);
  CHECK(p.matrix == a.matrix * b.matrix);
  CHECK(verify_witness(p.witness, p.matrix, 2));
  Certified inv = certified_inverse(p);
  CHECK((inv.matrix * p.matrix).is_identity());
  CHECK(verify_witness(inv.witness, inv.matrix, 2));
}

TEST_CASE("row relations are realized by the family") {
  std::mt19937_64 rng(34);
  const int n = 5;
  Ring ring(n);
  for (int m : {2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      // b = sum over pairs of h_ij K_ij with h_ij in H, restricted to x1..x3
      const int u = 4;
      Ring small(3);
      std::vector<LaurentPoly> b(n, ring.zero());
      for (auto [i, j] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
        LaurentPoly h3 = random_H_member(small, m, rng);
        LaurentPoly h = ring.parse(h3.to_string());
        auto row = koszul_row(ring, i, j, h);
        for (int v = 0; v < n; ++v) b[v] += row[v];
      }
      RowCombination c = solve_row_relation(n, u, b, m);
      CHECK(c.expand(n, m) == b);
      Certified e = realize_row_combination(n, u, c, m);
      std::vector<LaurentPoly> row(n, ring.zero());
      for (int v = 0; v < n; ++v) row[v] = ring.sigma(u) * b[v];
      CHECK(e.matrix == row_elem(u, row));
      CHECK(verify_witness(e.witness, e.matrix, m));
    }
  }
  std::vector<LaurentPoly> bad(n, ring.zero());
  bad[0] = ring.one();
  CHECK_THROWS_AS(solve_row_relation(n, 4, bad, 2), std::domain_error);
}

TEST_CASE("splitting over H recovers a sigma combination") {
  std::mt19937_64 rng(35);
  const int n = 4;
  Ring ring(n);
  for (int trial = 0; trial < 20; ++trial) {
    Ring small(3);
    LaurentPoly t = ring.zero();
    for (int i = 1; i <= 3; ++i)
      t += ring.sigma(i) * ring.parse(random_H_member(small, 2, rng).to_string());
    std::vector<LaurentPoly> f = split_over_H(n, 3, t, 2);
    LaurentPoly sum = ring.zero();
    for (int i = 1; i <= 3; ++i) {
      CHECK(oracle::in_H(f[i - 1], 2));
      sum += ring.sigma(i) * f[i - 1];
    }
    CHECK(sum == t);
  }
  CHECK_THROWS_AS(split_over_H(n, 3, ring.sigma(1), 2), std::domain_error);
}
