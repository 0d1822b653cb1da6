#pragma once

// Sparse exact arithmetic in the Laurent polynomial ring
// R_n = Z[x1^{+-1}, ..., xn^{+-1}], the integral group ring of Z^n.
//
// Variable indices are 1-based everywhere in the public API (x1 .. xn).

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace metab {

using Integer = mpz_class;

inline constexpr int kMaxVars = 16;

class ContextMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Exponent vector of a Laurent monomial x^e. Unused trailing slots stay 0.
class Monomial {
 public:
  Monomial() { e_.fill(0); }
  Monomial(std::initializer_list<int32_t> exps);
  static Monomial unit(int i, int32_t k = 1);  // x_i^k

  int32_t operator[](int i) const { return e_[i - 1]; }  // 1-based
  int32_t& operator[](int i) { return e_[i - 1]; }
  const std::array<int32_t, kMaxVars>& raw() const { return e_; }
  std::array<int32_t, kMaxVars>& raw_mut() { return e_; }

  bool is_one() const;
  Monomial operator+(const Monomial& o) const;
  Monomial operator-(const Monomial& o) const;
  Monomial operator-() const;
  Monomial scaled(int32_t k) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.e_ <=> b.e_; }

  std::size_t hash() const;

 private:
  std::array<int32_t, kMaxVars> e_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct Term {
  Monomial mono;
  Integer coeff;
};

/// Subset of {1..n}, stored as a bitmask.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<int> idx);
  static IndexSet range(int lo, int hi);  // {lo, ..., hi}, empty if lo > hi
  static IndexSet all(int n) { return range(1, n); }

  bool contains(int i) const { return (bits_ >> (i - 1)) & 1u; }
  void insert(int i) { bits_ |= (1u << (i - 1)); }
  bool empty() const { return bits_ == 0; }
  uint32_t bits() const { return bits_; }
  std::vector<int> elements() const;

 private:
  uint32_t bits_ = 0;
};

/// An element of R_n. Terms are kept sorted by monomial and never carry a
/// zero coefficient, so structural equality is ring equality.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(int nvars);
  LaurentPoly(int nvars, std::vector<Term> terms);  // normalizes

  static LaurentPoly constant(int nvars, const Integer& c);
  static LaurentPoly monomial(int nvars, const Monomial& e, const Integer& c = 1);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  /// Value if the polynomial is a constant (including 0).
  std::optional<Integer> constant_value() const;
  /// (monomial, coefficient) if the polynomial is a single term.
  std::optional<Term> single_term() const;
  bool depends_on(int i) const;
  Integer coefficient(const Monomial& e) const;
  /// Componentwise min/max exponent; both zero for the zero polynomial.
  std::pair<Monomial, Monomial> exponent_box() const;

  LaurentPoly shifted(const Monomial& e) const;  // x^e * f
  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o);
  LaurentPoly& operator*=(const Integer& c);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(LaurentPoly a, const Integer& c) { return a *= c; }
  friend LaurentPoly operator*(const Integer& c, LaurentPoly a) { return a *= c; }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b);

  /// Canonical text, monomials in descending lexicographic order,
  /// e.g. "3*x1^2*x2^-1 - 2".
  std::string to_string() const;

  std::size_t hash() const;

 private:
  friend class LaurentBuilder;
  void check_same(const LaurentPoly& o) const;
  int nvars_ = 0;
  std::vector<Term> terms_;
};

LaurentPoly pow(const LaurentPoly& f, unsigned k);

/// The ambient ring R_n; a factory for the named elements of R_n.
class Ring {
 public:
  explicit Ring(int n);
  int n() const { return n_; }

  LaurentPoly zero() const { return LaurentPoly(n_); }
  LaurentPoly one() const { return constant(1); }
  LaurentPoly constant(const Integer& c) const { return LaurentPoly::constant(n_, c); }
  LaurentPoly x(int i, int32_t k = 1) const;  // x_i^k
  LaurentPoly monomial(const Monomial& e, const Integer& c = 1) const;
  /// sigma_i = x_i - 1
  LaurentPoly sigma(int i) const;
  /// mu_{r,m} = 1 + x_r + ... + x_r^{m-1}
  LaurentPoly mu(int r, int m) const;
  /// Parse the polynomial grammar: integers, x1..xn, + - * ^ and parentheses.
  LaurentPoly parse(std::string_view text) const;

  void check_index(int i) const;

  friend bool operator==(const Ring&, const Ring&) = default;

 private:
  int n_;
};

/// Ring homomorphism x_i -> 1 for i in S.
LaurentPoly substitute_ones(const LaurentPoly& f, IndexSet s);

struct SigmaDivision {
  LaurentPoly quotient;
  LaurentPoly remainder;
};

/// f = sigma_i * q + r with r = f|_{x_i = 1}. The quotient is built term by
/// term from x^k - 1 = sigma (x^{k-1} + ... + 1) and
/// x^{-k} - 1 = -sigma x^{-k} (x^{k-1} + ... + 1).
SigmaDivision divide_by_sigma(const LaurentPoly& f, int i);

/// Exact quotient f / sigma_i; throws if sigma_i does not divide f.
LaurentPoly exact_divide_by_sigma(const LaurentPoly& f, int i);

/// Image under x_i -> 1 for all i: the sum of the coefficients.
Integer augmentation(const LaurentPoly& f);

/// Element of Z_m[Z_m^n] in canonical form: exponents in [0, m), coefficients
/// in [0, m).
class QuotientPoly {
 public:
  QuotientPoly(int nvars, int modulus);
  static QuotientPoly from(const LaurentPoly& f, int modulus);

  int modulus() const { return modulus_; }
  int nvars() const { return rep_.nvars(); }
  bool is_zero() const { return rep_.is_zero(); }
  const LaurentPoly& representative() const { return rep_; }

  QuotientPoly operator+(const QuotientPoly& o) const;
  QuotientPoly operator-(const QuotientPoly& o) const;
  QuotientPoly operator*(const QuotientPoly& o) const;
  QuotientPoly operator-() const;
  friend bool operator==(const QuotientPoly& a, const QuotientPoly& b) {
    return a.modulus_ == b.modulus_ && a.rep_ == b.rep_;
  }
  std::string to_string() const { return rep_.to_string(); }

 private:
  void check_same(const QuotientPoly& o) const;
  int modulus_;
  LaurentPoly rep_;
};

QuotientPoly reduce_mod(const LaurentPoly& f, int m);

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& msg, std::size_t pos);
  std::size_t position() const { return pos_; }
  /// The message without the position suffix.
  const std::string& reason() const { return reason_; }

 private:
  std::size_t pos_;
  std::string reason_;
};

}  // namespace metab

template <>
struct std::hash<metab::LaurentPoly> {
  std::size_t operator()(const metab::LaurentPoly& f) const { return f.hash(); }
};
