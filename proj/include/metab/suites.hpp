#pragma once

// Named verification suites run by `metab verify`, and the sample data they
// share with the tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "metab/ia_matrix.hpp"

namespace metab {

struct IdentityCheck {
  std::string name;
  bool ok = false;
  double millis = 0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  int n = 0;
  int m = 0;
  std::vector<IdentityCheck> checks;
  bool ok() const;
  std::size_t failures() const;
};

std::vector<std::string> suite_names();
/// Throws std::invalid_argument for an unknown suite name.
SuiteReport run_suite(const std::string& name, int n, int m);

/// The fixed six polynomials the identity suites iterate over (n >= 4).
std::vector<LaurentPoly> sample_polys(const Ring& ring);
/// Random element with a few small terms in x_1..x_n.
LaurentPoly random_poly(const Ring& ring, std::mt19937_64& rng, int max_terms = 2, int max_exp = 1);
/// Random element of H_{n,m} built from its generators.
LaurentPoly random_H_member(const Ring& ring, int m, std::mt19937_64& rng);
/// Elements of IG_{n,m^2}: row elements with m^2-scaled Koszul rows, their
/// inverses and dilation conjugates, and products of two of these.
std::vector<IAMatrix> ig_corpus(int n, int m, int count, uint64_t seed);

}  // namespace metab
