#pragma once

// IA(Phi_n) as the group of n x n matrices M over R_n with M sigma = sigma,
// where sigma = (x_1 - 1, ..., x_n - 1)^T.

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "metab/laurent.hpp"
#include "metab/magnus.hpp"

namespace metab {

class NotIA : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotInvertible : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense square matrix over R_n; entries are addressed 1-based.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n);  // zero matrix
  static Matrix identity(int n);

  int n() const { return n_; }
  const LaurentPoly& operator()(int i, int j) const { return e_[idx(i, j)]; }
  LaurentPoly& operator()(int i, int j) { return e_[idx(i, j)]; }

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  friend bool operator==(const Matrix&, const Matrix&) = default;

  bool is_identity() const;
  bool is_zero() const;
  LaurentPoly det() const;
  /// Transposed cofactor matrix: M * adj(M) = det(M) I.
  Matrix adjugate() const;
  /// The (n-1) x (n-1) matrix with row i and column i removed.
  Matrix minor(int i) const;
  Matrix shifted(const Monomial& e) const;  // x^e * M

  /// Row-major entry strings.
  std::vector<std::string> to_strings() const;
  /// Aligned multi-line rendering.
  std::string render() const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>((i - 1) * n_ + (j - 1));
  }
  int n_ = 0;
  std::vector<LaurentPoly> e_;
};

struct DetMonomial {
  Monomial s;  // det = prod x_r^{s_r}
  friend bool operator==(const DetMonomial&, const DetMonomial&) = default;
};

/// M sigma = sigma.
bool fixes_sigma(const Matrix& m);

/// det(M) = x^s with coefficient +1; throws NotInvertible otherwise
/// (a -x^s determinant gets its own message).
DetMonomial det_monomial(const Matrix& m);

/// A matrix known to satisfy M sigma = sigma with a +monomial determinant.
class IAMatrix {
 public:
  IAMatrix() = default;
  static IAMatrix identity(int n);
  /// Validates the IA conditions; throws NotIA or NotInvertible.
  static IAMatrix from_matrix(Matrix m);
  /// Skips the determinant computation; M sigma = sigma is still checked
  /// when invariant checking is compiled in.
  static IAMatrix trusted(Matrix m);
  /// Checks M sigma = sigma only. For readers of untrusted data that prove
  /// invertibility afterwards by other means (an explicit inverse, or a
  /// replayed witness); nothing else may rely on such a value being IA.
  static IAMatrix unverified(Matrix m);
  /// Row i = coordinate vector of the Magnus image of words[i-1].
  static IAMatrix from_images(const std::vector<GroupWord>& words, int n);
  /// Parses n*n row-major polynomial strings.
  static IAMatrix parse(const std::vector<std::string>& entries, int n);

  int n() const { return m_->n(); }
  const Matrix& matrix() const { return *m_; }
  const LaurentPoly& operator()(int i, int j) const { return (*m_)(i, j); }
  /// Entry of A = M - I.
  LaurentPoly a(int i, int j) const;
  bool is_identity() const { return m_->is_identity(); }

  IAMatrix operator*(const IAMatrix& o) const;
  friend bool operator==(const IAMatrix& x, const IAMatrix& y) { return *x.m_ == *y.m_; }

 private:
  struct InverseSlot {
    std::once_flag once;
    std::shared_ptr<const Matrix> m;
    // operands of a product, kept until the inverse is first asked for
    std::shared_ptr<const Matrix> left, right;
    std::shared_ptr<InverseSlot> left_slot, right_slot;
  };
  explicit IAMatrix(Matrix m) : m_(std::make_shared<const Matrix>(std::move(m))) {}
  IAMatrix(std::shared_ptr<const Matrix> m, std::shared_ptr<InverseSlot> slot)
      : m_(std::move(m)), inv_(std::move(slot)) {}
  std::shared_ptr<const Matrix> m_ = std::make_shared<const Matrix>();
  // computed at most once and shared by copies
  std::shared_ptr<InverseSlot> inv_ = std::make_shared<InverseSlot>();

  friend IAMatrix mat_inv(const IAMatrix& a);
};

bool check_ia(const Matrix& m);
inline bool check_ia(const IAMatrix& m) { return check_ia(m.matrix()); }
/// Exponents of det M for a matrix whose determinant is known to be a unit
/// +-x^s (any product of IA matrices, or a specialization of one). Each s_r
/// is read off the univariate specialization x_k -> 1 (k != r), which is far
/// cheaper than the full determinant. Garbage in, garbage out: the result is
/// meaningless if det M is not a unit.
DetMonomial unit_det_monomial(const Matrix& m);
inline DetMonomial det_monomial(const IAMatrix& m) { return unit_det_monomial(m.matrix()); }

IAMatrix mat_mul(const IAMatrix& a, const IAMatrix& b);
IAMatrix mat_inv(const IAMatrix& a);
IAMatrix commutator(const IAMatrix& a, const IAMatrix& b);  // a b a^-1 b^-1
IAMatrix power(const IAMatrix& a, long k);                  // k may be negative

/// Entry (k,l) of A lies in sum_{i != l} sigma_i R, for every k, l.
bool entries_in_tail_span(const IAMatrix& m);

bool in_IG(const IAMatrix& m, int modulus);
bool in_IGL_slice(const IAMatrix& m, int i);
/// ISL_{n-1,i}(sigma_i H_{n,modulus}): row i of A zero, det 1, and every
/// entry of the (i,i)-minor of A in sigma_i H_{n,modulus}. The determinant
/// is read off with unit_det_monomial, so m must really be invertible.
bool in_ISL(const IAMatrix& m, int i, int modulus);

/// I with row u replaced by e_u + a (a_u must be 0 and sum a_v sigma_v = 0).
IAMatrix row_elem(int u, const std::vector<LaurentPoly>& a);
/// The dilation-type element I + sigma_j E_{i,i} - sigma_i E_{i,j}, whose
/// determinant is x_j.
IAMatrix dilation(int n, int i, int j);
/// Row vector f (sigma_i e_j - sigma_j e_i).
std::vector<LaurentPoly> koszul_row(const Ring& ring, int i, int j, const LaurentPoly& f);

/// Image of the matrix under x_i -> 1 for i in S, entrywise.
Matrix substitute_ones(const Matrix& m, IndexSet s);

}  // namespace metab
