#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "metab/certificate.hpp"
#include "metab/decompose.hpp"
#include "metab/suites.hpp"
#include "support/oracles.hpp"

using namespace metab;

namespace {

IAMatrix scaled_row(int n, int u, int i, int j, const LaurentPoly& f, int m) {
  return row_elem(u, koszul_row(Ring(n), i, j, f * Integer(m * m)));
}

void check_factors(const DecompositionCertificate& c) {
  IAMatrix prod = IAMatrix::identity(c.n);
  for (const CertificateFactor& f : c.factors) {
    if (f.tag == FactorTag::IAM) {
      CHECK(verify_witness(f.witness, f.matrix, c.m));
    } else {
      CHECK(in_ISL(f.matrix, f.u, c.m));
      CHECK((f.matrix * f.inverse).is_identity());
    }
    prod = prod * f.matrix;
  }
  CHECK(prod == c.input);
  // ISL factors come first, then the witnessed ones
  bool seen_iam = false;
  for (const CertificateFactor& f : c.factors) {
    if (f.tag == FactorTag::IAM) seen_iam = true;
    else CHECK_FALSE(seen_iam);
  }
}

}  // namespace

TEST_CASE("the gate sees the entries of A") {
  const int n = 4;
  Ring ring(n);
  IAMatrix good = scaled_row(n, 1, 2, 3, ring.x(4), 2);
  EntryJReport r = check_entry_J(good, 2);
  CHECK(r.ok);
  for (const MembershipCertificate& c : r.rewrites) {
    CHECK(c.replays());
    CHECK(c.valid(ring));
  }
  EntryJReport bad = check_entry_J(scaled_row(n, 1, 2, 3, ring.one(), 1), 2);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.diagnostics.empty());
}

TEST_CASE("stage projection sends the trailing variables to 1") {
  const int n = 4;
  Ring ring(n);
  Matrix m = Matrix::identity(n);
  m(1, 2) = ring.parse("x1*x3 - x4^2 + x2");
  Matrix b = stage_bar(m, 2);
  CHECK(b(1, 2) == ring.parse("x1 - 1 + x2"));
  CHECK(stage_bar(m, 4) == m);
}

TEST_CASE("single row elements decompose") {
  const int n = 4;
  Ring ring(n);
  for (int m : {2, 3}) {
    for (const IAMatrix& a : {scaled_row(n, 1, 2, 3, ring.one(), m), scaled_row(n, 4, 1, 2, ring.x(3), m),
                              scaled_row(n, 2, 3, 4, ring.parse("x1^-1"), m)}) {
      DecompositionCertificate c = decompose(a, m);
      CHECK(c.input_in_IG);
      CHECK(check_certificate(c).ok);
      check_factors(c);
    }
  }
}

TEST_CASE("random corpus elements decompose") {
  for (const IAMatrix& a : ig_corpus(4, 2, 8, 99)) {
    CHECK(in_IG(a, 4));
    DecompositionCertificate c = decompose(a, 2);
    CHECK(check_certificate(c).ok);
    check_factors(c);
  }
}

TEST_CASE("powers of dilations lie outside IG but still decompose") {
  const int n = 4;
  IAMatrix d = power(dilation(n, 1, 2), 4);
  CHECK_FALSE(in_IG(d, 4));
  DecompositionCertificate c = decompose(d, 2);
  CHECK_FALSE(c.input_in_IG);
  CHECK(check_certificate(c).ok);
  check_factors(c);
  DecomposeOptions strict;
  strict.require_IG = true;
  CHECK_THROWS_AS(decompose(d, 2, strict), std::invalid_argument);
}

TEST_CASE("inputs the construction cannot handle are refused") {
  Ring r3(3);
  CHECK_THROWS_AS(decompose(row_elem(1, koszul_row(r3, 2, 3, r3.constant(4))), 2), std::invalid_argument);
  // determinant x2 is not a fourth power
  CHECK_THROWS_AS(decompose(dilation(4, 1, 2), 2), std::invalid_argument);
}

TEST_CASE("the checker notices a wrong factor list") {
  Ring ring(4);
  IAMatrix a = scaled_row(4, 1, 2, 3, ring.x(4), 2) * scaled_row(4, 2, 1, 4, ring.one(), 2);
  DecompositionCertificate c = decompose(a, 2);
  REQUIRE(check_certificate(c).ok);
  DecompositionCertificate dropped = c;
  dropped.factors.pop_back();
  CHECK_FALSE(check_certificate(dropped).ok);
  DecompositionCertificate wrong_m = c;
  wrong_m.m = 3;
  CHECK_FALSE(check_certificate(wrong_m).ok);
  DecompositionCertificate other_input = c;
  other_input.input = other_input.input * dilation(4, 1, 2);
  CHECK_FALSE(check_certificate(other_input).ok);
}

TEST_CASE("certificate files are checked on their own") {
  Ring ring(4);
  IAMatrix a = scaled_row(4, 3, 1, 2, ring.x(4), 2);
  DecompositionCertificate c = decompose(a, 2);
  std::string text = certificate_to_text(c);
  CHECK(check_certificate_text(text).ok);
  DecompositionCertificate back = certificate_from_text(text);
  CHECK(back.input == c.input);
  CHECK(back.factors.size() == c.factors.size());
  CHECK(check_certificate(back).ok);

  // change one digit of one coefficient
  std::size_t pos = text.find("\"input\"");
  REQUIRE(pos != std::string::npos);
  pos = text.find_first_of("123456789", pos);
  std::string bad = text;
  bad[pos] = bad[pos] == '9' ? '8' : static_cast<char>(bad[pos] + 1);
  CHECK_FALSE(check_certificate_text(bad).ok);

  FileCheckResult junk = check_certificate_text("{\"n\": 4");
  CHECK_FALSE(junk.ok);
  CHECK(junk.format_error);
}

TEST_CASE("products of decomposable elements stay decomposable") {
  const int n = 4, m = 2;
  Ring ring(n);
  std::vector<IAMatrix> atoms = {scaled_row(n, 1, 2, 3, ring.x(4), m),
                                 scaled_row(n, 2, 1, 4, -ring.one(), m),
                                 scaled_row(n, 3, 1, 2, ring.x(1, -1), m),
                                 scaled_row(n, 4, 2, 3, ring.x(2), m),
                                 mat_inv(scaled_row(n, 1, 3, 4, ring.one(), m)),
                                 scaled_row(n, 2, 3, 4, ring.constant(2) * ring.x(1), m)};
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (i == j) continue;
      DecompositionCertificate c = decompose(atoms[i] * atoms[j], m);
      CHECK(check_certificate(c).ok);
    }
  IAMatrix three = atoms[0] * mat_inv(atoms[3]) * atoms[1];
  DecompositionCertificate c = decompose(three, m);
  CHECK(check_certificate(c).ok);
  check_factors(c);
}
