#pragma once

// Linear problems over S = Z_m[Z_m^d] = R_d / H_{d,m} behind the row
// clearing steps. Both solvers reduce a question about R_d modulo H, solve
// the finite linear system with ModSystem, and lift the answer back.

#include <cstdint>
#include <vector>

#include "metab/laurent.hpp"

namespace metab {

/// Dense elements of Z_m[Z_m^d]; the monomial x^e (0 <= e_i < m) sits at
/// index sum e_i m^(i-1).
class QuotientSpace {
 public:
  using Vec = std::vector<int64_t>;

  QuotientSpace(int d, int m);
  int d() const { return d_; }
  int m() const { return m_; }
  std::size_t size() const { return size_; }

  Vec zero() const { return Vec(size_, 0); }
  Vec basis(std::size_t idx) const;
  /// Image of f; variables beyond x_d must not occur.
  Vec project(const LaurentPoly& f) const;
  /// Canonical lift into R_n with exponents and coefficients in [0, m).
  LaurentPoly lift(const Vec& v, int n) const;

  Vec shift(const Vec& v, int k) const;  // x_k v
  Vec sigma(const Vec& v, int k) const;  // (x_k - 1) v
  Vec mu(const Vec& v, int k) const;     // (1 + x_k + ... + x_k^(m-1)) v
  void add_to(Vec& y, const Vec& x, int64_t c = 1) const;

 private:
  int d_, m_;
  std::size_t size_;
  std::vector<std::size_t> stride_;
};

/// Finds f_1..f_d in H_{n,m}, depending on x_1..x_d only, with
/// t = sum_{i<=d} sigma_i f_i. Throws std::domain_error if none exists.
std::vector<LaurentPoly> split_over_H(int n, int d, const LaurentPoly& t, int m);

}  // namespace metab
