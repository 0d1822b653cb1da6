#pragma once

// Checks that do not go through the library's own algorithms: evaluation at
// random points modulo a prime, determinants by elimination over that field,
// and membership in H by folding exponents and coefficients directly.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "metab/ia_matrix.hpp"

namespace oracle {

inline constexpr uint64_t kPrime = 2305843009213693951ull;  // 2^61 - 1

inline uint64_t mulmod(uint64_t a, uint64_t b) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % kPrime);
}

inline uint64_t powmod(uint64_t a, uint64_t e) {
  uint64_t r = 1;
  for (; e; e >>= 1, a = mulmod(a, a))
    if (e & 1) r = mulmod(r, a);
  return r;
}

inline uint64_t invmod(uint64_t a) { return powmod(a, kPrime - 2); }

struct Point {
  std::vector<uint64_t> x, xinv;  // 1-based
};

inline Point random_point(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<uint64_t> d(2, kPrime - 2);
  Point p;
  p.x.assign(n + 1, 1);
  p.xinv.assign(n + 1, 1);
  for (int i = 1; i <= n; ++i) {
    p.x[i] = d(rng);
    p.xinv[i] = invmod(p.x[i]);
  }
  return p;
}

inline uint64_t reduce(const metab::Integer& c) {
  mpz_class r;
  mpz_class p;
  mpz_set_ui(p.get_mpz_t(), 1);
  p <<= 61;
  p -= 1;
  mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), p.get_mpz_t());
  return r.get_ui();
}

inline uint64_t eval(const metab::LaurentPoly& f, const Point& p) {
  uint64_t acc = 0;
  for (const metab::Term& t : f.terms()) {
    uint64_t v = reduce(t.coeff);
    for (int i = 1; i <= f.nvars(); ++i) {
      int e = t.mono[i];
      if (e > 0) v = mulmod(v, powmod(p.x[i], e));
      if (e < 0) v = mulmod(v, powmod(p.xinv[i], -e));
    }
    acc = (acc + v) % kPrime;
  }
  return acc;
}

using Dense = std::vector<std::vector<uint64_t>>;

inline Dense eval(const metab::Matrix& m, const Point& p) {
  Dense d(m.n(), std::vector<uint64_t>(m.n()));
  for (int i = 1; i <= m.n(); ++i)
    for (int j = 1; j <= m.n(); ++j) d[i - 1][j - 1] = eval(m(i, j), p);
  return d;
}

inline uint64_t det(Dense a) {
  const std::size_t n = a.size();
  uint64_t d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      d = (kPrime - d) % kPrime;
    }
    d = mulmod(d, a[c][c]);
    uint64_t inv = invmod(a[c][c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      uint64_t f = mulmod(a[r][c], inv);
      if (!f) continue;
      for (std::size_t k = c; k < n; ++k) a[r][k] = (a[r][k] + kPrime - mulmod(f, a[c][k])) % kPrime;
    }
  }
  return d;
}

inline uint64_t eval_monomial(const metab::Monomial& s, int n, const Point& p) {
  uint64_t v = 1;
  for (int i = 1; i <= n; ++i) {
    if (s[i] > 0) v = mulmod(v, powmod(p.x[i], s[i]));
    if (s[i] < 0) v = mulmod(v, powmod(p.xinv[i], -s[i]));
  }
  return v;
}

// f lies in H_{n,m} iff its image in Z_m[Z_m^n] vanishes: add up the
// coefficients of monomials that agree modulo m, then look at them mod m.
inline bool in_H(const metab::LaurentPoly& f, int m) {
  std::map<std::vector<int>, long> folded;
  for (const metab::Term& t : f.terms()) {
    std::vector<int> key;
    for (int i = 1; i <= f.nvars(); ++i) key.push_back(((t.mono[i] % m) + m) % m);
    folded[key] = (folded[key] + static_cast<long>(mpz_fdiv_ui(t.coeff.get_mpz_t(), m))) % m;
  }
  for (const auto& [k, c] : folded)
    if (c % m != 0) return false;
  return true;
}

// M sigma = sigma, checked at a random point.
inline bool fixes_sigma_at(const metab::Matrix& m, const Point& p) {
  Dense d = eval(m, p);
  for (int i = 0; i < m.n(); ++i) {
    uint64_t s = 0;
    for (int j = 0; j < m.n(); ++j) s = (s + mulmod(d[i][j], (p.x[j + 1] + kPrime - 1) % kPrime)) % kPrime;
    if (s != (p.x[i + 1] + kPrime - 1) % kPrime) return false;
  }
  return true;
}

}  // namespace oracle
