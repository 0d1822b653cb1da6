#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "metab/builder.hpp"
#include "metab/magnus.hpp"

using namespace metab;

TEST_CASE("expressions build the named matrices") {
  const int n = 4;
  Ring ring(n);
  IAMatrix d = dilation(n, 1, 2), r = row_elem(3, koszul_row(ring, 1, 2, ring.x(4)));
  CHECK(build_matrix("elem(1,2)", n) == d);
  CHECK(build_matrix("koszul(3,1,2,x4)", n) == r);
  CHECK(build_matrix("pow(elem(1,2),-3)", n) == power(d, -3));
  CHECK(build_matrix("inv(elem(1,2))", n) == mat_inv(d));
  CHECK(build_matrix("comm(elem(1,2), koszul(3,1,2,x4))", n) == commutator(d, r));
  CHECK(build_matrix("conj(koszul(3,1,2,x4), elem(1,2))", n) == d * r * mat_inv(d));
  CHECK(build_matrix("elem(1,2) * (koszul(3,1,2,x4))", n) == d * r);
  CHECK(build_matrix("id", n).is_identity());
  CHECK(build_matrix("row(1, 0, x3 - 1, 1 - x2, 0)", n) == row_elem(1, koszul_row(ring, 3, 2, ring.one())));
}

TEST_CASE("builder errors point into the text") {
  const int n = 4;
  auto position = [&](const char* text) -> long {
    try {
      build_matrix(text, n);
    } catch (const ParseError& e) {
      return static_cast<long>(e.position());
    }
    return -1;
  };
  CHECK(position("elem(1,5)") == 7);
  CHECK(position("elem(2,2)") >= 0);
  CHECK(position("frob(1,2)") == 0);
  CHECK(position("elem(1,2) *") >= 0);
  CHECK(position("koszul(1,1,2,x3)") >= 0);
  CHECK_THROWS(build_matrix("row(1, 1, 0, 0, 0)", n));
}

TEST_CASE("automorphisms from generator images") {
  const int n = 3;
  // x1 -> x2 x1 x2^-1 is the conjugation automorphism; it is IA
  std::vector<GroupWord> images = {parse_word("x2 x1 x2^-1", n), parse_word("x2", n), parse_word("x3", n)};
  IAMatrix a = IAMatrix::from_images(images, n);
  Ring ring(n);
  CHECK(a.matrix()(1, 1) == ring.x(2));
  CHECK(a.matrix()(1, 2) == ring.one() - ring.x(1));
  CHECK(det_monomial(a).s == Monomial::unit(2));
  CHECK_THROWS_AS(IAMatrix::from_images({parse_word("x1^2", n), parse_word("x2", n), parse_word("x3", n)}, n),
                  NotIA);
}
