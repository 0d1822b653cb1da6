#include "metab/ia_matrix.hpp"

#include <algorithm>
#include <bit>

#include "metab/ideal.hpp"

namespace metab {

Matrix::Matrix(int n) : n_(n), e_(static_cast<std::size_t>(n * n), LaurentPoly(n)) {}

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 1; i <= n; ++i) m(i, i) = LaurentPoly::constant(n, 1);
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (n_ != o.n_) throw ContextMismatch("matrix sizes differ");
  Matrix r(n_);
  for (int i = 1; i <= n_; ++i)
    for (int k = 1; k <= n_; ++k) {
      const LaurentPoly& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (int j = 1; j <= n_; ++j) {
        const LaurentPoly& b = o(k, j);
        if (!b.is_zero()) r(i, j) += a * b;
      }
    }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (n_ != o.n_) throw ContextMismatch("matrix sizes differ");
  Matrix r = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (n_ != o.n_) throw ContextMismatch("matrix sizes differ");
  Matrix r = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] -= o.e_[i];
  return r;
}

bool Matrix::is_identity() const {
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j) {
      const LaurentPoly& p = (*this)(i, j);
      if (i == j ? p != LaurentPoly::constant(n_, 1) : !p.is_zero()) return false;
    }
  return true;
}

bool Matrix::is_zero() const {
  for (const LaurentPoly& p : e_)
    if (!p.is_zero()) return false;
  return true;
}

// Laplace expansion by rows over subsets of columns:
// dp[S] = determinant of the top |S| rows restricted to the columns in S.
LaurentPoly Matrix::det() const {
  if (n_ == 0) return LaurentPoly();
  const int nvars = (*this)(1, 1).nvars();
  std::vector<LaurentPoly> dp(std::size_t{1} << n_, LaurentPoly(nvars));
  dp[0] = LaurentPoly::constant(nvars, 1);
  for (uint32_t mask = 0; mask + 1 < (1u << n_); ++mask) {
    if (dp[mask].is_zero()) continue;
    int row = std::popcount(mask) + 1;
    int above = 0;  // columns in mask greater than j
    for (int j = n_; j >= 1; --j) {
      uint32_t bit = 1u << (j - 1);
      if (mask & bit) {
        ++above;
        continue;
      }
      const LaurentPoly& a = (*this)(row, j);
      if (a.is_zero()) continue;
      LaurentPoly t = dp[mask] * a;
      if (above % 2) {
        dp[mask | bit] -= t;
      } else {
        dp[mask | bit] += t;
      }
    }
  }
  return dp[(1u << n_) - 1];
}

Matrix Matrix::minor(int i) const {
  Matrix r(n_ - 1);
  for (int a = 1, ra = 1; a <= n_; ++a) {
    if (a == i) continue;
    for (int b = 1, rb = 1; b <= n_; ++b) {
      if (b == i) continue;
      r(ra, rb++) = (*this)(a, b);
    }
    ++ra;
  }
  return r;
}

Matrix Matrix::adjugate() const {
  const int nvars = (*this)(1, 1).nvars();
  Matrix adj(n_);
  if (n_ == 1) {
    adj(1, 1) = LaurentPoly::constant(nvars, 1);
    return adj;
  }
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j) {
      Matrix sub(n_ - 1);
      for (int a = 1, ra = 1; a <= n_; ++a) {
        if (a == i) continue;
        for (int b = 1, rb = 1; b <= n_; ++b) {
          if (b == j) continue;
          sub(ra, rb++) = (*this)(a, b);
        }
        ++ra;
      }
      LaurentPoly c = sub.det();
      adj(j, i) = ((i + j) % 2) ? -c : c;
    }
  return adj;
}

Matrix Matrix::shifted(const Monomial& e) const {
  Matrix r = *this;
  for (LaurentPoly& p : r.e_) p = p.shifted(e);
  return r;
}

std::vector<std::string> Matrix::to_strings() const {
  std::vector<std::string> out;
  for (const LaurentPoly& p : e_) out.push_back(p.to_string());
  return out;
}

std::string Matrix::render() const {
  std::vector<std::string> s = to_strings();
  std::vector<std::size_t> width(n_, 0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) width[j] = std::max(width[j], s[i * n_ + j].size());
  std::string out;
  for (int i = 0; i < n_; ++i) {
    out += "[ ";
    for (int j = 0; j < n_; ++j) {
      const std::string& cell = s[i * n_ + j];
      out += cell + std::string(width[j] - cell.size(), ' ');
      out += j + 1 < n_ ? "  " : " ]\n";
    }
  }
  return out;
}

bool fixes_sigma(const Matrix& m) {
  const int n = m.n();
  Ring ring(n);
  for (int i = 1; i <= n; ++i) {
    LaurentPoly s = ring.zero();
    for (int j = 1; j <= n; ++j)
      if (!m(i, j).is_zero()) s += m(i, j) * ring.sigma(j);
    if (s != ring.sigma(i)) return false;
  }
  return true;
}

DetMonomial unit_det_monomial(const Matrix& m) {
  const int n = m.n();
  DetMonomial out;
  if (n == 0) return out;
  const int nvars = m(1, 1).nvars();
  for (int r = 1; r <= nvars; ++r) {
    IndexSet others;
    for (int k = 1; k <= nvars; ++k)
      if (k != r) others.insert(k);
    LaurentPoly d = substitute_ones(m, others).det();
    auto t = d.single_term();
    if (!t || t->coeff != 1) throw NotInvertible("determinant specializes to " + d.to_string());
    out.s[r] = t->mono[r];
  }
  return out;
}

DetMonomial det_monomial(const Matrix& m) {
  LaurentPoly d = m.det();
  auto t = d.single_term();
  if (!t) throw NotInvertible("determinant " + d.to_string() + " is not a unit");
  if (t->coeff == -1)
    throw NotInvertible("determinant " + d.to_string() +
                        " is a negative monomial, impossible for an IA matrix");
  if (t->coeff != 1) throw NotInvertible("determinant " + d.to_string() + " is not a unit");
  return {t->mono};
}

bool check_ia(const Matrix& m) {
  if (!fixes_sigma(m)) return false;
  try {
    det_monomial(m);
  } catch (const NotInvertible&) {
    return false;
  }
  return true;
}

IAMatrix IAMatrix::identity(int n) { return IAMatrix(Matrix::identity(n)); }

IAMatrix IAMatrix::from_matrix(Matrix m) {
  if (!fixes_sigma(m)) throw NotIA("matrix does not fix the sigma vector");
  det_monomial(m);
  return IAMatrix(std::move(m));
}

IAMatrix IAMatrix::trusted(Matrix m) {
#ifdef METAB_CHECK_INVARIANTS
  if (!fixes_sigma(m)) throw std::logic_error("IA invariant broken: M sigma != sigma");
#endif
  return IAMatrix(std::move(m));
}

IAMatrix IAMatrix::unverified(Matrix m) {
  if (!fixes_sigma(m)) throw NotIA("matrix does not fix the sigma vector");
  return IAMatrix(std::move(m));
}

IAMatrix IAMatrix::from_images(const std::vector<GroupWord>& words, int n) {
  if (static_cast<int>(words.size()) != n)
    throw std::invalid_argument("expected " + std::to_string(n) + " generator images");
  for (int i = 1; i <= n; ++i) {
    std::vector<int> ab(n + 1, 0);
    for (const Letter& l : words[i - 1]) ab[l.gen] += l.sign;
    for (int j = 1; j <= n; ++j)
      if (ab[j] != (i == j ? 1 : 0))
        throw NotIA("image of x" + std::to_string(i) + " has the wrong abelianization");
  }
  Matrix m(n);
  for (int i = 1; i <= n; ++i) {
    MagnusElement e = embed(words[i - 1], n);
    for (int j = 1; j <= n; ++j) m(i, j) = e.a()[j - 1];
  }
  return from_matrix(std::move(m));
}

IAMatrix IAMatrix::parse(const std::vector<std::string>& entries, int n) {
  if (entries.size() != static_cast<std::size_t>(n * n))
    throw std::invalid_argument("expected " + std::to_string(n * n) + " matrix entries, got " +
                                std::to_string(entries.size()));
  Ring ring(n);
  Matrix m(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) m(i, j) = ring.parse(entries[(i - 1) * n + (j - 1)]);
  return from_matrix(std::move(m));
}

LaurentPoly IAMatrix::a(int i, int j) const {
  LaurentPoly p = (*m_)(i, j);
  if (i == j) p -= LaurentPoly::constant(n(), 1);
  return p;
}

namespace {

// M = I + sigma w^T, returned as w.
std::optional<std::vector<LaurentPoly>> sigma_outer(const Matrix& m) {
  const int n = m.n();
  const int nvars = m(1, 1).nvars();
  const LaurentPoly one = LaurentPoly::constant(nvars, 1);
  std::vector<LaurentPoly> w(n, LaurentPoly(nvars));
  bool any = false;
  for (int j = 1; j <= n; ++j) {
    LaurentPoly top = m(1, j);
    if (j == 1) top -= one;
    SigmaDivision d = divide_by_sigma(top, 1);
    if (!d.remainder.is_zero()) return std::nullopt;
    w[j - 1] = std::move(d.quotient);
    any = any || !w[j - 1].is_zero();
  }
  if (!any) return std::nullopt;
  for (int i = 2; i <= n; ++i) {
    LaurentPoly si = LaurentPoly::monomial(nvars, Monomial::unit(i)) - one;
    for (int j = 1; j <= n; ++j) {
      LaurentPoly e = m(i, j);
      if (i == j) e -= one;
      if (!(e == si * w[j - 1])) return std::nullopt;
    }
  }
  return w;
}

Matrix plus_sigma_outer(Matrix m, const std::vector<LaurentPoly>& w, const LaurentPoly& scale) {
  const int n = m.n();
  const int nvars = m(1, 1).nvars();
  const LaurentPoly one = LaurentPoly::constant(nvars, 1);
  for (int i = 1; i <= n; ++i) {
    LaurentPoly si = LaurentPoly::monomial(nvars, Monomial::unit(i)) - one;
    for (int j = 1; j <= n; ++j)
      if (!w[j - 1].is_zero()) m(i, j) += si * w[j - 1] * scale;
  }
  return m;
}

// I + e_u v^T has inverse I - e_u v^T / (1 + v_u) when 1 + v_u is a unit.
std::optional<Matrix> single_row_inverse(const Matrix& m) {
  const int n = m.n();
  const LaurentPoly one = LaurentPoly::constant(m(1, 1).nvars(), 1);
  int row = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      bool off = i == j ? !(m(i, j) == one) : !m(i, j).is_zero();
      if (!off) continue;
      if (row != 0 && row != i) return std::nullopt;
      row = i;
    }
  if (row == 0) return m;
  const LaurentPoly& d = m(row, row);
  if (d.terms().size() != 1 || abs(d.terms()[0].coeff) != 1) return std::nullopt;
  LaurentPoly d_inv = LaurentPoly::monomial(d.nvars(), -d.terms()[0].mono, d.terms()[0].coeff);
  Matrix r = Matrix::identity(n);
  for (int j = 1; j <= n; ++j) {
    LaurentPoly v = m(row, j);
    if (j == row) v -= one;
    if (!v.is_zero()) r(row, j) -= v * d_inv;
  }
  return r;
}

// (I + sigma w^T)^-1 = I - sigma w^T when w . sigma = 0.
std::optional<Matrix> sigma_outer_inverse(const Matrix& m) {
  auto w = sigma_outer(m);
  if (!w) return std::nullopt;
  const int nvars = m(1, 1).nvars();
  LaurentPoly t(nvars);
  for (int j = 1; j <= m.n(); ++j)
    t += (*w)[j - 1] * (LaurentPoly::monomial(nvars, Monomial::unit(j)) - LaurentPoly::constant(nvars, 1));
  if (!t.is_zero()) return std::nullopt;
  return plus_sigma_outer(Matrix::identity(m.n()), *w, LaurentPoly::constant(nvars, -1));
}

}  // namespace

IAMatrix IAMatrix::operator*(const IAMatrix& o) const {
  if (o.is_identity()) return *this;
  if (is_identity()) return o;
  // M sigma = sigma gives M (I + sigma w^T) = M + sigma w^T
  std::optional<std::vector<LaurentPoly>> w = sigma_outer(*o.m_);
  IAMatrix r = trusted(w ? plus_sigma_outer(*m_, *w, LaurentPoly::constant((*m_)(1, 1).nvars(), 1))
                         : *m_ * *o.m_);
  r.inv_->left = m_;
  r.inv_->left_slot = inv_;
  r.inv_->right = o.m_;
  r.inv_->right_slot = o.inv_;
  return r;
}

IAMatrix mat_mul(const IAMatrix& a, const IAMatrix& b) { return a * b; }

IAMatrix mat_inv(const IAMatrix& a) {
  IAMatrix::InverseSlot& slot = *a.inv_;
  std::call_once(slot.once, [&] {
    Matrix inv;
    if (auto r = single_row_inverse(*a.m_)) {
      inv = std::move(*r);
    } else if (auto w = sigma_outer_inverse(*a.m_)) {
      inv = std::move(*w);
    } else if (slot.left) {
      inv = mat_inv(IAMatrix(slot.right, slot.right_slot)).matrix() *
            mat_inv(IAMatrix(slot.left, slot.left_slot)).matrix();
    } else {
      Matrix nil = *a.m_ - Matrix::identity(a.n());
      if ((nil * nil).is_zero()) {
        inv = Matrix::identity(a.n()) - nil;
      } else {
        DetMonomial d = det_monomial(a);
        inv = a.m_->adjugate().shifted(-d.s);
      }
    }
    slot.m = std::make_shared<const Matrix>(std::move(inv));
    slot.left.reset();
    slot.right.reset();
    slot.left_slot.reset();
    slot.right_slot.reset();
  });
  IAMatrix r(slot.m, std::make_shared<IAMatrix::InverseSlot>());
  std::call_once(r.inv_->once, [&] { r.inv_->m = a.m_; });
  return r;
}

IAMatrix commutator(const IAMatrix& a, const IAMatrix& b) {
  return a * b * mat_inv(a) * mat_inv(b);
}

IAMatrix power(const IAMatrix& a, long k) {
  IAMatrix base = k < 0 ? mat_inv(a) : a;
  unsigned long e = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  IAMatrix r = IAMatrix::identity(a.n());
  while (e) {
    if (e & 1ul) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

bool entries_in_tail_span(const IAMatrix& m) {
  const int n = m.n();
  for (int l = 1; l <= n; ++l) {
    IndexSet s;
    for (int i = 1; i <= n; ++i)
      if (i != l) s.insert(i);
    for (int k = 1; k <= n; ++k)
      if (!in_tail_span(m.a(k, l), s)) return false;
  }
  return true;
}

bool in_IG(const IAMatrix& m, int modulus) {
  for (int i = 1; i <= m.n(); ++i)
    for (int j = 1; j <= m.n(); ++j)
      if (!in_H(m.a(i, j), modulus)) return false;
  return true;
}

bool in_IGL_slice(const IAMatrix& m, int i) {
  const int n = m.n();
  for (int j = 1; j <= n; ++j)
    if (!m.a(i, j).is_zero()) return false;
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l)
      if (k != i && l != i && !in_tail_span(m.a(k, l), IndexSet{i})) return false;
  return true;
}

bool in_ISL(const IAMatrix& m, int i, int modulus) {
  if (!in_IGL_slice(m, i)) return false;
  const int n = m.n();
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l) {
      if (k == i || l == i) continue;
      if (!in_H(exact_divide_by_sigma(m.a(k, l), i), modulus)) return false;
    }
  return unit_det_monomial(m.matrix()).s.is_one();
}

IAMatrix row_elem(int u, const std::vector<LaurentPoly>& a) {
  const int n = static_cast<int>(a.size());
  Ring ring(n);
  ring.check_index(u);
  if (!a[u - 1].is_zero()) throw std::invalid_argument("row element must have a zero diagonal entry");
  LaurentPoly rel = ring.zero();
  for (int v = 1; v <= n; ++v) rel += a[v - 1] * ring.sigma(v);
  if (!rel.is_zero()) throw std::invalid_argument("row element violates sum a_v sigma_v = 0");
  Matrix m = Matrix::identity(n);
  for (int v = 1; v <= n; ++v) m(u, v) += a[v - 1];
  return IAMatrix::trusted(std::move(m));
}

IAMatrix dilation(int n, int i, int j) {
  Ring ring(n);
  ring.check_index(i);
  ring.check_index(j);
  if (i == j) throw std::invalid_argument("dilation needs two distinct indices");
  Matrix m = Matrix::identity(n);
  m(i, i) += ring.sigma(j);
  m(i, j) -= ring.sigma(i);
  return IAMatrix::trusted(std::move(m));
}

std::vector<LaurentPoly> koszul_row(const Ring& ring, int i, int j, const LaurentPoly& f) {
  std::vector<LaurentPoly> a(ring.n(), ring.zero());
  a[j - 1] += ring.sigma(i) * f;
  a[i - 1] -= ring.sigma(j) * f;
  return a;
}

Matrix substitute_ones(const Matrix& m, IndexSet s) {
  Matrix r(m.n());
  for (int i = 1; i <= m.n(); ++i)
    for (int j = 1; j <= m.n(); ++j) r(i, j) = substitute_ones(m(i, j), s);
  return r;
}

}  // namespace metab
