#include "metab/row_relation.hpp"

#include <map>

#include "metab/generators.hpp"
#include "metab/ideal.hpp"
#include "metab/lattice.hpp"

namespace metab {

QuotientSpace::QuotientSpace(int d, int m) : d_(d), m_(m), size_(1), stride_(d + 1, 1) {
  if (d < 0 || m < 1) throw std::invalid_argument("quotient space needs d >= 0 and m >= 1");
  for (int i = 1; i <= d; ++i) {
    stride_[i - 1] = size_;
    size_ *= static_cast<std::size_t>(m);
    if (size_ > (1u << 22)) throw std::invalid_argument("quotient space too large");
  }
  stride_[d] = size_;
}

QuotientSpace::Vec QuotientSpace::basis(std::size_t idx) const {
  Vec v = zero();
  v[idx] = 1 % m_;
  return v;
}

QuotientSpace::Vec QuotientSpace::project(const LaurentPoly& f) const {
  Vec v = zero();
  for (const Term& t : f.terms()) {
    std::size_t idx = 0;
    for (int i = 1; i <= f.nvars(); ++i) {
      int32_t e = t.mono[i];
      if (i > d_) {
        if (e != 0) throw std::invalid_argument("polynomial uses a variable outside the quotient");
        continue;
      }
      idx += stride_[i - 1] * static_cast<std::size_t>(((e % m_) + m_) % m_);
    }
    Integer c = t.coeff % m_;
    v[idx] = (v[idx] + c.get_si()) % m_;
  }
  for (int64_t& x : v) x = (x % m_ + m_) % m_;
  return v;
}

LaurentPoly QuotientSpace::lift(const Vec& v, int n) const {
  std::vector<Term> terms;
  for (std::size_t idx = 0; idx < size_; ++idx) {
    int64_t c = ((v[idx] % m_) + m_) % m_;
    if (c == 0) continue;
    Monomial e;
    std::size_t rest = idx;
    for (int i = 1; i <= d_; ++i) {
      e[i] = static_cast<int32_t>(rest % m_);
      rest /= m_;
    }
    terms.push_back({e, Integer(static_cast<long>(c))});
  }
  return LaurentPoly(n, std::move(terms));
}

QuotientSpace::Vec QuotientSpace::shift(const Vec& v, int k) const {
  Vec out = zero();
  const std::size_t s = stride_[k - 1], block = stride_[k];
  for (std::size_t idx = 0; idx < size_; ++idx) {
    if (v[idx] == 0) continue;
    std::size_t pos = (idx % block) / s;
    std::size_t target = pos + 1 == static_cast<std::size_t>(m_) ? idx - pos * s : idx + s;
    out[target] = (out[target] + v[idx]) % m_;
  }
  return out;
}

QuotientSpace::Vec QuotientSpace::sigma(const Vec& v, int k) const {
  Vec out = shift(v, k);
  add_to(out, v, -1);
  return out;
}

QuotientSpace::Vec QuotientSpace::mu(const Vec& v, int k) const {
  Vec out = v, cur = v;
  for (int t = 1; t < m_; ++t) {
    cur = shift(cur, k);
    add_to(out, cur);
  }
  return out;
}

void QuotientSpace::add_to(Vec& y, const Vec& x, int64_t c) const {
  for (std::size_t i = 0; i < size_; ++i) y[i] = ((y[i] + c * x[i]) % m_ + m_) % m_;
}

namespace {

void require_support(const LaurentPoly& f, int d, const char* what) {
  for (int i = d + 1; i <= f.nvars(); ++i)
    if (f.depends_on(i)) throw std::domain_error(std::string(what) + " depends on x" + std::to_string(i));
}

using Pair = std::pair<int, int>;

// Unknown blocks of the mod-m system, each an element of S.
struct Unknown {
  enum Kind { Triple, Alpha, Beta } kind;
  int a, b, c;  // Triple: a<b<c;  Alpha/Beta: pair (a,b), multiplier index c
};

}  // namespace

RowCombination solve_row_relation(int n, int u, const std::vector<LaurentPoly>& b, int m) {
  Ring ring(n);
  if (u < 1 || u > n) throw IndexOutOfRange("row index out of range");
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("row vector has the wrong length");
  const int d = u - 1;
  LaurentPoly rel = ring.zero();
  for (int v = 1; v <= n; ++v) {
    if (v > d && !b[v - 1].is_zero()) throw std::domain_error("row vector has entries at or beyond u");
    require_support(b[v - 1], d, "row vector entry");
    rel += b[v - 1] * ring.sigma(v);
  }
  if (!rel.is_zero()) throw std::domain_error("row vector violates sum sigma_v b_v = 0");

  RowCombination out;
  if (d == 0) return out;

  // Koszul lift over R_d: b = sum_{i<j} g_ij K_ij.
  std::map<Pair, LaurentPoly> g;
  std::vector<LaurentPoly> r(b.begin(), b.begin() + d);
  for (int last = d; last >= 2; --last) {
    for (int v = 1; v < last; ++v) {
      SigmaDivision div = divide_by_sigma(r[v - 1], last);
      r[last - 1] += ring.sigma(v) * div.quotient;
      r[v - 1] = std::move(div.remainder);
      g.emplace(Pair{v, last}, -div.quotient);
    }
    if (!r[last - 1].is_zero()) throw std::logic_error("Koszul lift left a nonzero remainder");
  }
  if (!r[0].is_zero()) throw std::logic_error("Koszul lift left a nonzero remainder");

  // Mod-m adjustment: find t, alpha, beta in S with
  //   g + d2(t) - sum_k sigma_k (alpha_{ij,k} mu_i + beta_{ij,k} mu_j) = 0.
  QuotientSpace S(d, m);
  std::vector<Pair> pairs;
  std::map<Pair, std::size_t> pair_idx;
  for (int i = 1; i <= d; ++i)
    for (int j = i + 1; j <= d; ++j) {
      pair_idx[{i, j}] = pairs.size();
      pairs.push_back({i, j});
    }
  std::vector<Unknown> unknowns;
  for (int a = 1; a <= d; ++a)
    for (int bb = a + 1; bb <= d; ++bb)
      for (int c = bb + 1; c <= d; ++c) unknowns.push_back({Unknown::Triple, a, bb, c});
  for (auto [i, j] : pairs)
    for (int k = 1; k <= d; ++k) {
      if (k != i) unknowns.push_back({Unknown::Alpha, i, j, k});
      if (k != j) unknowns.push_back({Unknown::Beta, i, j, k});
    }

  const std::size_t block = S.size();
  ModSystem sys(pairs.size() * block, m);
  auto place = [&](std::vector<int64_t>& col, Pair p, const QuotientSpace::Vec& v, int64_t sign) {
    std::size_t off = pair_idx.at(p) * block;
    for (std::size_t t = 0; t < block; ++t) col[off + t] = ((col[off + t] + sign * v[t]) % m + m) % m;
  };
  for (const Unknown& uk : unknowns) {
    for (std::size_t e = 0; e < block; ++e) {
      std::vector<int64_t> col(pairs.size() * block, 0);
      QuotientSpace::Vec z = S.basis(e);
      if (uk.kind == Unknown::Triple) {
        place(col, {uk.b, uk.c}, S.sigma(z, uk.a), 1);
        place(col, {uk.a, uk.c}, S.sigma(z, uk.b), -1);
        place(col, {uk.a, uk.b}, S.sigma(z, uk.c), 1);
      } else {
        int idx = uk.kind == Unknown::Alpha ? uk.a : uk.b;
        place(col, {uk.a, uk.b}, S.sigma(S.mu(z, idx), uk.c), -1);
      }
      sys.add_column(col);
    }
  }
  std::vector<int64_t> rhs(pairs.size() * block, 0);
  for (auto& [p, gp] : g) place(rhs, p, S.project(gp), -1);
  auto sol = sys.solve(rhs);
  if (!sol) throw std::domain_error("row vector is not a combination of the clearing family");

  std::map<Pair, LaurentPoly> h = g;
  for (std::size_t u_idx = 0; u_idx < unknowns.size(); ++u_idx) {
    const Unknown& uk = unknowns[u_idx];
    QuotientSpace::Vec z(sol->begin() + u_idx * block, sol->begin() + (u_idx + 1) * block);
    LaurentPoly lifted = S.lift(z, n);
    if (lifted.is_zero()) continue;
    if (uk.kind == Unknown::Triple) {
      h[{uk.b, uk.c}] += ring.sigma(uk.a) * lifted;
      h[{uk.a, uk.c}] -= ring.sigma(uk.b) * lifted;
      h[{uk.a, uk.b}] += ring.sigma(uk.c) * lifted;
    } else if (uk.kind == Unknown::Alpha) {
      h[{uk.a, uk.b}] -= ring.sigma(uk.c) * ring.mu(uk.a, m) * lifted;
      out.terms.push_back({FamilyKind::CommIK, uk.a, uk.b, uk.c, lifted});
    } else {
      h[{uk.a, uk.b}] -= ring.sigma(uk.c) * ring.mu(uk.b, m) * lifted;
      out.terms.push_back({FamilyKind::CommIK, uk.b, uk.a, uk.c, -lifted});
    }
  }
  for (auto& [p, hp] : h) {
    if (hp.is_zero()) continue;
    auto cert = decompose_H(hp, m);
    if (!cert) throw std::logic_error("lifted Koszul coefficient is not in H");
    for (int rr = 1; rr <= d; ++rr) {
      LaurentPoly c = cert->cofactor_of(ring.x(rr, m) - ring.one());
      if (!c.is_zero()) out.terms.push_back({FamilyKind::CommK, p.first, p.second, rr, c});
    }
    LaurentPoly c0 = cert->cofactor_of(ring.constant(m));
    if (!c0.is_zero()) out.terms.push_back({FamilyKind::Basic, p.first, p.second, 0, c0});
  }

  if (out.expand(n, m) != b) throw std::logic_error("row combination does not expand to the input");
  return out;
}

std::vector<LaurentPoly> split_over_H(int n, int d, const LaurentPoly& t, int m) {
  Ring ring(n);
  require_support(t, d, "split target");
  LaurentPoly head;
  std::vector<LaurentPoly> q = tail_quotients(t, 0, &head);
  if (!head.is_zero()) throw std::domain_error("split target is outside the augmentation ideal");
  std::vector<LaurentPoly> f(q.begin() + 1, q.begin() + 1 + d);
  if (d <= 1) {
    for (const LaurentPoly& x : f)
      if (!in_H(x, m)) throw std::domain_error("split target has no decomposition over H");
    return f;
  }

  // f_i + sum_j sigma_j h_ij = 0 in S, with h antisymmetric.
  QuotientSpace S(d, m);
  const std::size_t block = S.size();
  std::vector<Pair> pairs;
  for (int i = 1; i <= d; ++i)
    for (int j = i + 1; j <= d; ++j) pairs.push_back({i, j});
  ModSystem sys(static_cast<std::size_t>(d) * block, m);
  for (auto [i, j] : pairs) {
    for (std::size_t e = 0; e < block; ++e) {
      std::vector<int64_t> col(d * block, 0);
      QuotientSpace::Vec z = S.basis(e);
      auto si = S.sigma(z, j), sj = S.sigma(z, i);
      for (std::size_t s = 0; s < block; ++s) {
        col[(i - 1) * block + s] = si[s];
        col[(j - 1) * block + s] = (m - sj[s]) % m;
      }
      sys.add_column(col);
    }
  }
  std::vector<int64_t> rhs(d * block, 0);
  for (int i = 1; i <= d; ++i) {
    auto v = S.project(f[i - 1]);
    for (std::size_t s = 0; s < block; ++s) rhs[(i - 1) * block + s] = (m - v[s]) % m;
  }
  auto sol = sys.solve(rhs);
  if (!sol) throw std::domain_error("split target has no decomposition over H");
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [i, j] = pairs[p];
    QuotientSpace::Vec z(sol->begin() + p * block, sol->begin() + (p + 1) * block);
    LaurentPoly h = S.lift(z, n);
    f[i - 1] += ring.sigma(j) * h;
    f[j - 1] -= ring.sigma(i) * h;
  }
  for (const LaurentPoly& x : f)
    if (!in_H(x, m)) throw std::logic_error("lifted split component is not in H");
  return f;
}

}  // namespace metab
