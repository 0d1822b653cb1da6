#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "metab/ideal.hpp"
#include "metab/lattice.hpp"
#include "metab/suites.hpp"
#include "support/oracles.hpp"

using namespace metab;

TEST_CASE("H certificates exist exactly for members") {
  for (int n : {3, 4}) {
    Ring ring(n);
    std::mt19937_64 rng(21 + n);
    for (int m : {2, 3}) {
      for (int trial = 0; trial < 60; ++trial) {
        LaurentPoly f = trial % 2 ? random_H_member(ring, m, rng) : random_poly(ring, rng, 3, 3);
        auto cert = decompose_H(f, m);
        REQUIRE(cert.has_value() == oracle::in_H(f, m));
        if (cert) {
          CHECK(cert->replays());
          CHECK(cert->valid(ring));
          CHECK(cert->terms.size() <= static_cast<std::size_t>(n + 1));
        }
      }
    }
  }
}

TEST_CASE("congruence certificates expand to their targets") {
  for (int m : {2, 3, 4}) {
    Ring ring(4);
    for (int i = 1; i <= 4; ++i) {
      MembershipCertificate p = power_congruence(ring, i, m);
      CHECK(p.target == ring.x(i, m * m) - ring.one());
      CHECK(p.replays());
      CHECK(p.valid(ring));
      MembershipCertificate u = mu_square_congruence(ring, i, m);
      CHECK(u.target == ring.mu(i, m * m));
      CHECK(u.replays());
      CHECK(u.valid(ring));
    }
  }
}

TEST_CASE("H_{m^2} rewrites into J_m plus O_{m^2}") {
  Ring ring(4);
  std::mt19937_64 rng(5);
  for (int m : {2, 3}) {
    for (int trial = 0; trial < 20; ++trial) {
      LaurentPoly f = random_H_member(ring, m * m, rng);
      auto c = rewrite_into_J(ring, f, m);
      REQUIRE(c.has_value());
      CHECK(c->replays());
      CHECK(c->valid(ring));
    }
    CHECK_FALSE(rewrite_into_J(ring, ring.constant(m), m).has_value());
  }
}

TEST_CASE("ideal expressions normalize products and sums") {
  const int n = 4;
  CHECK(IdealExpr::sig(1) * IdealExpr::sig(1, 2) == IdealExpr::sig(1, 3));
  CHECK(IdealExpr::O(2) * IdealExpr::O(3) == IdealExpr::O(6));
  CHECK(IdealExpr::aug() + IdealExpr::aug() == IdealExpr::aug());
  CHECK(IdealExpr::parse(IdealExpr::J(n, 2).to_string(), n) == IdealExpr::J(n, 2));
  CHECK(IdealExpr::parse("H(3)", n) == IdealExpr::H(n, 3));
  CHECK(IdealExpr::J(n, 2).inside_augmentation());
  CHECK_FALSE(IdealExpr::H(n, 2).inside_augmentation());
}

TEST_CASE("bounded search finds H certificates and excludes by augmentation") {
  Ring ring(3);
  std::mt19937_64 rng(17);
  IdealExpr h = IdealExpr::H(3, 2);
  for (int trial = 0; trial < 10; ++trial) {
    LaurentPoly f = random_H_member(ring, 2, rng);
    StructuredResult r = in_structured(ring, f, h);
    REQUIRE(r.status == OracleStatus::Found);
    CHECK(r.certificate->replays());
    CHECK(r.certificate->valid(ring));
  }
  StructuredResult no = in_structured(ring, ring.x(1), IdealExpr::aug());
  CHECK(no.status == OracleStatus::Excluded);
  StructuredResult sq = in_structured(ring, ring.sigma(1) * ring.sigma(2), IdealExpr::aug() * IdealExpr::aug());
  CHECK(sq.status == OracleStatus::Found);
}

TEST_CASE("tail split separates the head variables") {
  Ring ring(4);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    LaurentPoly f = random_poly(ring, rng, 4, 2);
    int u = 1 + trial % 3;
    TailSplit s = split_tail(f, u);
    CHECK(s.tail + s.head == f);
    for (int r = u + 1; r <= 4; ++r) CHECK_FALSE(s.head.depends_on(r));
    CHECK(in_tail_span(s.tail, IndexSet::range(u + 1, 4)));
  }
}

TEST_CASE("integer lattice solves exactly the reachable targets") {
  IntegerLattice lat;
  lat.add({{0, 4}, {1, 6}});
  lat.add({{0, 2}, {1, 2}});
  auto combine = [&](const SparseVec& coeffs) {
    SparseVec out;
    std::vector<SparseVec> gens = {{{0, 4}, {1, 6}}, {{0, 2}, {1, 2}}};
    for (const auto& [id, c] : coeffs) axpy(out, c, gens[id]);
    return out;
  };
  SparseVec target = {{0, 6}, {1, 10}};
  auto sol = lat.solve(target);
  REQUIRE(sol.has_value());
  CHECK(combine(*sol) == target);
  CHECK_FALSE(lat.solve({{0, 1}, {1, 0}}).has_value());
  CHECK_FALSE(lat.solve({{0, 2}, {1, 3}}).has_value());
}

TEST_CASE("linear systems modulo a composite") {
  std::mt19937_64 rng(4);
  for (int64_t m : {4, 6, 9, 12}) {
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t rows = 5;
      ModSystem sys(rows, m);
      std::vector<std::vector<int64_t>> cols;
      for (int c = 0; c < 4; ++c) {
        std::vector<int64_t> col(rows);
        for (auto& v : col) v = static_cast<int64_t>(rng() % m);
        cols.push_back(col);
        sys.add_column(col);
      }
      std::vector<int64_t> x(4), b(rows, 0);
      for (auto& v : x) v = static_cast<int64_t>(rng() % m);
      for (std::size_t r = 0; r < rows; ++r)
        for (int c = 0; c < 4; ++c) b[r] = (b[r] + cols[c][r] * x[c]) % m;
      auto sol = sys.solve(b);
      REQUIRE(sol.has_value());
      for (std::size_t r = 0; r < rows; ++r) {
        int64_t s = 0;
        for (int c = 0; c < 4; ++c) s = (s + cols[c][r] * (*sol)[c]) % m;
        CHECK(((s - b[r]) % m + m) % m == 0);
      }
    }
  }
  ModSystem two(1, 4);
  two.add_column({2});
  CHECK_FALSE(two.solve({1}).has_value());
  CHECK(two.solve({2}).has_value());
}
