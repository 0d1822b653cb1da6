#pragma once

// The free metabelian group Phi_n through its Magnus embedding: an element
// is a pair (g, a) with g in Z^n and a in R_n^n, multiplied as
//   (g, a)(h, b) = (g + h, a + x^g b).

#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "metab/laurent.hpp"

namespace metab {

struct Letter {
  int gen;   // 1..n
  int sign;  // +1 or -1
  friend bool operator==(const Letter&, const Letter&) = default;
};

using GroupWord = std::vector<Letter>;

/// Parses words over x1..xn: concatenation, ^k (k may be negative),
/// commutators [u,v] = u v u^-1 v^-1, parentheses. Brackets and powers are
/// expanded here.
GroupWord parse_word(std::string_view text, int n);
std::string word_to_string(const GroupWord& w);
GroupWord inverse(const GroupWord& w);
GroupWord commutator(const GroupWord& a, const GroupWord& b);

class MagnusElement {
 public:
  explicit MagnusElement(int n);  // identity
  MagnusElement(Monomial g, std::vector<LaurentPoly> a);

  static MagnusElement generator(int n, int i);

  int n() const { return n_; }
  const Monomial& g() const { return g_; }
  const std::vector<LaurentPoly>& a() const { return a_; }  // 0-based slots

  bool is_identity() const;
  /// x^g - 1 == sum_i a_i sigma_i
  bool invariant_holds() const;

  MagnusElement operator*(const MagnusElement& o) const;
  MagnusElement inverse() const;

  friend bool operator==(const MagnusElement&, const MagnusElement&) = default;
  std::string to_string() const;

 private:
  int n_;
  Monomial g_;
  std::vector<LaurentPoly> a_;
};

MagnusElement embed(const GroupWord& w, int n);
bool is_identity(const GroupWord& w, int n);

/// Image in Phi_{n,m}: exponents mod m and coordinates in Z_m[Z_m^n].
class QuotientElement {
 public:
  QuotientElement(int n, int m);  // identity
  QuotientElement(int m, Monomial g, std::vector<QuotientPoly> a);

  int n() const { return n_; }
  int modulus() const { return m_; }
  const Monomial& g() const { return g_; }
  const std::vector<QuotientPoly>& a() const { return a_; }
  bool is_identity() const;
  bool invariant_holds() const;

  QuotientElement operator*(const QuotientElement& o) const;
  friend bool operator==(const QuotientElement& x, const QuotientElement& y) {
    return x.m_ == y.m_ && x.g_ == y.g_ && x.a_ == y.a_;
  }
  std::string to_string() const;

 private:
  int n_;
  int m_;
  Monomial g_;
  std::vector<QuotientPoly> a_;
};

QuotientElement project(const MagnusElement& e, int m);

/// Uniformly random letters; used by property tests and the verify suites.
GroupWord random_word(std::mt19937_64& rng, int n, int max_len);

}  // namespace metab
