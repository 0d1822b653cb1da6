#include "metab/lattice.hpp"

#include <numeric>

namespace metab {

void axpy(SparseVec& y, const Integer& a, const SparseVec& x) {
  if (a == 0 || x.empty()) return;
  SparseVec out;
  out.reserve(y.size() + x.size());
  std::size_t i = 0, j = 0;
  Integer t;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(std::move(y[i++]));
    } else if (i == y.size() || x[j].first < y[i].first) {
      out.emplace_back(x[j].first, a * x[j].second);
      ++j;
    } else {
      t = y[i].second + a * x[j].second;
      if (t != 0) out.emplace_back(y[i].first, t);
      ++i;
      ++j;
    }
  }
  y = std::move(out);
}

namespace {

SparseVec combine(const Integer& a, const SparseVec& x, const Integer& b, const SparseVec& y) {
  SparseVec r;
  axpy(r, a, x);
  axpy(r, b, y);
  return r;
}

void negate(SparseVec& v) {
  for (auto& e : v) e.second = -e.second;
}

}  // namespace

void IntegerLattice::add(SparseVec v) {
  SparseVec expr{{static_cast<uint32_t>(count_++), Integer(1)}};
  while (!v.empty()) {
    uint32_t lead = v.front().first;
    auto it = pivots_.find(lead);
    if (it == pivots_.end()) {
      if (v.front().second < 0) {
        negate(v);
        negate(expr);
      }
      pivots_.emplace(lead, Row{std::move(v), std::move(expr)});
      return;
    }
    Row& p = it->second;
    const Integer& a = p.vec.front().second;
    const Integer b = v.front().second;
    if (mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) {
      Integer q = -(b / a);
      axpy(v, q, p.vec);
      axpy(expr, q, p.expr);
      continue;
    }
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    Integer ag = a / g, bg = b / g;
    // [s t; -b/g a/g] is unimodular
    SparseVec nv = combine(s, p.vec, t, v);
    SparseVec ne = combine(s, p.expr, t, expr);
    SparseVec rv = combine(-bg, p.vec, ag, v);
    SparseVec re = combine(-bg, p.expr, ag, expr);
    p.vec = std::move(nv);
    p.expr = std::move(ne);
    v = std::move(rv);
    expr = std::move(re);
  }
}

std::optional<SparseVec> IntegerLattice::solve(SparseVec target) const {
  SparseVec coeffs;
  while (!target.empty()) {
    auto it = pivots_.find(target.front().first);
    if (it == pivots_.end()) return std::nullopt;
    const Integer& a = it->second.vec.front().second;
    const Integer& b = target.front().second;
    if (!mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) return std::nullopt;
    Integer q = b / a;
    axpy(target, -q, it->second.vec);
    axpy(coeffs, q, it->second.expr);
  }
  return coeffs;
}

ModSystem::ModSystem(std::size_t rows, int64_t modulus) : nrows_(rows), m_(modulus) {
  if (modulus < 1) throw std::invalid_argument("modulus must be positive");
}

std::size_t ModSystem::add_column(const std::vector<int64_t>& col) {
  if (col.size() != nrows_) throw std::invalid_argument("column has the wrong length");
  std::size_t id = ncols_++;
  for (auto& [lead, row] : pivots_) row.expr.resize(ncols_, 0);
  Row r;
  r.vec.resize(nrows_);
  for (std::size_t i = 0; i < nrows_; ++i) r.vec[i] = md(col[i]);
  r.expr.assign(ncols_, 0);
  r.expr[id] = 1;
  insert(std::move(r));
  return id;
}

namespace {

// extended gcd on nonnegative int64
int64_t egcd(int64_t a, int64_t b, int64_t& s, int64_t& t) {
  int64_t s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (b != 0) {
    int64_t q = a / b;
    int64_t r = a - q * b;
    a = b;
    b = r;
    int64_t sn = s0 - q * s1;
    s0 = s1;
    s1 = sn;
    int64_t tn = t0 - q * t1;
    t0 = t1;
    t1 = tn;
  }
  s = s0;
  t = t0;
  return a;
}

std::size_t lead_of(const std::vector<int64_t>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return i;
  return v.size();
}

}  // namespace

// Pivots have leading entries that divide m. Whenever a pivot with leading
// entry g < m is stored, (m/g) times it is queued too, which closes the
// echelon form under the annihilator and makes greedy reduction decide
// membership.
void ModSystem::insert(Row first) {
  std::vector<Row> queue;
  queue.push_back(std::move(first));
  auto lincomb = [this](int64_t a, const std::vector<int64_t>& x, int64_t b,
                        const std::vector<int64_t>& y) {
    std::vector<int64_t> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = md(md(a * x[i]) + md(b * y[i]));
    return r;
  };
  while (!queue.empty()) {
    Row v = std::move(queue.back());
    queue.pop_back();
    v.expr.resize(ncols_, 0);
    for (;;) {
      std::size_t lead = lead_of(v.vec);
      if (lead == nrows_) break;
      auto it = pivots_.find(lead);
      if (it == pivots_.end()) {
        // normalize the lead to gcd(lead, m) using a unit multiplier
        int64_t s, t;
        int64_t g = egcd(v.vec[lead], m_, s, t);
        int64_t unit = md(s);
        // s may share a factor with m; search for a unit u with u*lead = g
        if (std::gcd(unit, m_) != 1) {
          int64_t step = m_ / g;
          for (int64_t k = 0; k < g; ++k) {
            int64_t cand = md(unit + k * step);
            if (std::gcd(cand, m_) == 1) {
              unit = cand;
              break;
            }
          }
        }
        for (auto& x : v.vec) x = md(x * unit);
        for (auto& x : v.expr) x = md(x * unit);
        g = v.vec[lead];
        if (g != 1) {
          Row ann;
          ann.vec.resize(nrows_);
          ann.expr.resize(ncols_);
          int64_t f = m_ / g;
          for (std::size_t i = 0; i < nrows_; ++i) ann.vec[i] = md(v.vec[i] * f);
          for (std::size_t i = 0; i < ncols_; ++i) ann.expr[i] = md(v.expr[i] * f);
          queue.push_back(std::move(ann));
        }
        pivots_.emplace(lead, std::move(v));
        break;
      }
      Row& p = it->second;
      p.expr.resize(ncols_, 0);
      int64_t a = p.vec[lead];
      int64_t b = v.vec[lead];
      if (b % a == 0) {
        int64_t q = md(-(b / a));
        v.vec = lincomb(1, v.vec, q, p.vec);
        v.expr = lincomb(1, v.expr, q, p.expr);
        continue;
      }
      int64_t s, t;
      int64_t g = egcd(a, b, s, t);
      int64_t ag = a / g, bg = b / g;
      std::vector<int64_t> nv = lincomb(md(s), p.vec, md(t), v.vec);
      std::vector<int64_t> ne = lincomb(md(s), p.expr, md(t), v.expr);
      std::vector<int64_t> rv = lincomb(md(-bg), p.vec, md(ag), v.vec);
      std::vector<int64_t> re = lincomb(md(-bg), p.expr, md(ag), v.expr);
      pivots_.erase(it);
      // the combined row goes back through insertion so its lead is normalized
      // and its annihilator multiple is queued
      queue.push_back(Row{std::move(nv), std::move(ne)});
      queue.push_back(Row{std::move(rv), std::move(re)});
      break;
    }
  }
}

std::optional<std::vector<int64_t>> ModSystem::solve(const std::vector<int64_t>& b) const {
  if (b.size() != nrows_) throw std::invalid_argument("right-hand side has the wrong length");
  std::vector<int64_t> t(nrows_);
  for (std::size_t i = 0; i < nrows_; ++i) t[i] = md(b[i]);
  std::vector<int64_t> x(ncols_, 0);
  for (;;) {
    std::size_t lead = lead_of(t);
    if (lead == nrows_) return x;
    auto it = pivots_.find(lead);
    if (it == pivots_.end()) return std::nullopt;
    int64_t a = it->second.vec[lead];
    if (t[lead] % a != 0) return std::nullopt;
    int64_t q = t[lead] / a;
    for (std::size_t i = 0; i < nrows_; ++i) t[i] = md(t[i] - q * it->second.vec[i]);
    for (std::size_t i = 0; i < it->second.expr.size(); ++i)
      x[i] = md(x[i] + q * it->second.expr[i]);
  }
}

}  // namespace metab
