#include "metab/laurent.hpp"

#include <algorithm>
#include <unordered_map>

namespace metab {

Monomial::Monomial(std::initializer_list<int32_t> exps) {
  if (exps.size() > static_cast<std::size_t>(kMaxVars))
    throw IndexOutOfRange("too many exponents for a monomial");
  e_.fill(0);
  std::copy(exps.begin(), exps.end(), e_.begin());
}

Monomial Monomial::unit(int i, int32_t k) {
  if (i < 1 || i > kMaxVars) throw IndexOutOfRange("variable index out of range");
  Monomial m;
  m[i] = k;
  return m;
}

bool Monomial::is_one() const {
  return std::all_of(e_.begin(), e_.end(), [](int32_t v) { return v == 0; });
}

Monomial Monomial::operator+(const Monomial& o) const {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) r.e_[i] = e_[i] + o.e_[i];
  return r;
}

Monomial Monomial::operator-(const Monomial& o) const {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) r.e_[i] = e_[i] - o.e_[i];
  return r;
}

Monomial Monomial::operator-() const {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) r.e_[i] = -e_[i];
  return r;
}

Monomial Monomial::scaled(int32_t k) const {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) r.e_[i] = e_[i] * k;
  return r;
}

std::size_t Monomial::hash() const {
  // FNV-1a over the exponent words
  std::size_t h = 1469598103934665603ull;
  for (int32_t v : e_) {
    h ^= static_cast<uint32_t>(v);
    h *= 1099511628211ull;
  }
  return h;
}

IndexSet::IndexSet(std::initializer_list<int> idx) {
  for (int i : idx) {
    if (i < 1 || i > kMaxVars) throw IndexOutOfRange("index set element out of range");
    insert(i);
  }
}

IndexSet IndexSet::range(int lo, int hi) {
  IndexSet s;
  for (int i = std::max(lo, 1); i <= std::min(hi, kMaxVars); ++i) s.insert(i);
  return s;
}

std::vector<int> IndexSet::elements() const {
  std::vector<int> out;
  for (int i = 1; i <= kMaxVars; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

namespace {

std::vector<Term> merge_terms(std::vector<Term> a, const std::vector<Term>& b) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  auto x = a.begin(), xe = a.end();
  auto y = b.begin(), ye = b.end();
  while (x != xe && y != ye) {
    auto c = x->mono <=> y->mono;
    if (c < 0) {
      out.push_back(std::move(*x++));
    } else if (c > 0) {
      out.push_back(*y++);
    } else {
      x->coeff += y->coeff;
      if (x->coeff != 0) out.push_back(std::move(*x));
      ++x;
      ++y;
    }
  }
  for (; x != xe; ++x) out.push_back(std::move(*x));
  for (; y != ye; ++y) out.push_back(*y);
  return out;
}

// Product with every monomial packed into one 64-bit mixed-radix key
// (x1 most significant, so key order is lex order) and coefficients
// accumulated in int64. Returns nothing when either does not fit.
std::optional<std::vector<Term>> packed_product(const std::vector<Term>& a, const std::vector<Term>& b,
                                                int nvars) {
  using u64 = uint64_t;
  std::array<int64_t, kMaxVars> lo{}, stride{};
  unsigned __int128 span = 1;
  for (int i = nvars - 1; i >= 0; --i) {
    int64_t alo = a.front().mono.raw()[i], ahi = alo, blo = b.front().mono.raw()[i], bhi = blo;
    for (const Term& t : a) alo = std::min<int64_t>(alo, t.mono.raw()[i]), ahi = std::max<int64_t>(ahi, t.mono.raw()[i]);
    for (const Term& t : b) blo = std::min<int64_t>(blo, t.mono.raw()[i]), bhi = std::max<int64_t>(bhi, t.mono.raw()[i]);
    lo[i] = alo + blo;
    stride[i] = static_cast<int64_t>(span);
    span *= static_cast<unsigned __int128>(ahi + bhi - lo[i] + 1);
    if (span >> 62) return std::nullopt;
  }
  auto bound = [](const std::vector<Term>& v) -> std::optional<u64> {
    u64 m = 0;
    for (const Term& t : v) {
      if (!t.coeff.fits_slong_p()) return std::nullopt;
      m = std::max<u64>(m, static_cast<u64>(std::abs(t.coeff.get_si())));
    }
    return m;
  };
  auto ba = bound(a), bb = bound(b);
  if (!ba || !bb) return std::nullopt;
  unsigned __int128 worst = static_cast<unsigned __int128>(*ba) * *bb * std::min(a.size(), b.size());
  if (worst >> 62) return std::nullopt;

  auto key_of = [&](const Monomial& m) {
    int64_t k = 0;
    for (int i = 0; i < nvars; ++i) k += (m.raw()[i] - lo[i]) * stride[i];
    return k;
  };
  std::vector<int64_t> ka, kb;
  std::vector<int64_t> ca, cb;
  for (const Term& t : a) ka.push_back(key_of(t.mono)), ca.push_back(t.coeff.get_si());
  // b's keys are taken relative to lo = 0 so that ka + kb is the product key
  for (const Term& t : b) {
    int64_t k = 0;
    for (int i = 0; i < nvars; ++i) k += t.mono.raw()[i] * stride[i];
    kb.push_back(k);
    cb.push_back(t.coeff.get_si());
  }

  std::size_t cap = 64;
  while (cap < 4 * (a.size() + b.size()) && cap < 2 * a.size() * b.size()) cap <<= 1;
  constexpr u64 kEmpty = ~u64{0};
  std::vector<u64> keys(cap, kEmpty);
  std::vector<int64_t> vals(cap, 0);
  std::size_t used = 0;
  auto slot = [&](u64 k) {
    std::size_t mask = keys.size() - 1;
    std::size_t h = static_cast<std::size_t>((k * 0x9E3779B97F4A7C15ull) >> 17) & mask;
    while (keys[h] != kEmpty && keys[h] != k) h = (h + 1) & mask;
    return h;
  };
  auto grow = [&] {
    std::vector<u64> old_keys = std::exchange(keys, std::vector<u64>(keys.size() * 2, kEmpty));
    std::vector<int64_t> old_vals = std::exchange(vals, std::vector<int64_t>(vals.size() * 2, 0));
    for (std::size_t h = 0; h < old_keys.size(); ++h)
      if (old_keys[h] != kEmpty) {
        std::size_t t = slot(old_keys[h]);
        keys[t] = old_keys[h];
        vals[t] = old_vals[h];
      }
  };
  for (std::size_t i = 0; i < ka.size(); ++i)
    for (std::size_t j = 0; j < kb.size(); ++j) {
      u64 k = static_cast<u64>(ka[i] + kb[j]);
      std::size_t h = slot(k);
      if (keys[h] == kEmpty) {
        if (2 * (used + 1) > keys.size()) {
          grow();
          h = slot(k);
        }
        keys[h] = k;
        ++used;
      }
      vals[h] += ca[i] * cb[j];
    }
  const std::size_t cap_final = keys.size();
  std::vector<std::pair<u64, int64_t>> flat;
  flat.reserve(used);
  for (std::size_t h = 0; h < cap_final; ++h)
    if (keys[h] != kEmpty && vals[h] != 0) flat.emplace_back(keys[h], vals[h]);
  std::sort(flat.begin(), flat.end());
  std::vector<Term> out;
  out.reserve(flat.size());
  for (const auto& [k, c] : flat) {
    Term t;
    u64 rest = k;
    for (int i = 0; i < nvars; ++i) {
      t.mono.raw_mut()[i] = static_cast<int32_t>(static_cast<int64_t>(rest / static_cast<u64>(stride[i])) + lo[i]);
      rest %= static_cast<u64>(stride[i]);
    }
    t.coeff = static_cast<long>(c);
    out.push_back(std::move(t));
  }
  return out;
}

void normalize(std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.mono < b.mono; });
  std::size_t w = 0;
  for (std::size_t r = 0; r < terms.size();) {
    std::size_t s = r + 1;
    Integer c = terms[r].coeff;
    while (s < terms.size() && terms[s].mono == terms[r].mono) c += terms[s++].coeff;
    if (c != 0) {
      terms[w].mono = terms[r].mono;
      terms[w].coeff = std::move(c);
      ++w;
    }
    r = s;
  }
  terms.resize(w);
}

void check_nvars(int n) {
  if (n < 1 || n > kMaxVars)
    throw std::invalid_argument("variable count must be between 1 and " +
                                std::to_string(kMaxVars));
}

}  // namespace

LaurentPoly::LaurentPoly(int nvars) : nvars_(nvars) { check_nvars(nvars); }

LaurentPoly::LaurentPoly(int nvars, std::vector<Term> terms)
    : nvars_(nvars), terms_(std::move(terms)) {
  check_nvars(nvars);
  for (const Term& t : terms_)
    for (int i = nvars + 1; i <= kMaxVars; ++i)
      if (t.mono[i] != 0) throw IndexOutOfRange("monomial uses a variable beyond x" +
                                                std::to_string(nvars));
  normalize(terms_);
}

LaurentPoly LaurentPoly::constant(int nvars, const Integer& c) {
  return monomial(nvars, Monomial(), c);
}

LaurentPoly LaurentPoly::monomial(int nvars, const Monomial& e, const Integer& c) {
  std::vector<Term> t;
  t.push_back({e, c});
  return LaurentPoly(nvars, std::move(t));
}

void LaurentPoly::check_same(const LaurentPoly& o) const {
  if (nvars_ != o.nvars_)
    throw ContextMismatch("polynomials live in rings with " + std::to_string(nvars_) +
                          " and " + std::to_string(o.nvars_) + " variables");
}

std::optional<Integer> LaurentPoly::constant_value() const {
  if (terms_.empty()) return Integer(0);
  if (terms_.size() == 1 && terms_[0].mono.is_one()) return terms_[0].coeff;
  return std::nullopt;
}

std::optional<Term> LaurentPoly::single_term() const {
  if (terms_.size() != 1) return std::nullopt;
  return terms_[0];
}

bool LaurentPoly::depends_on(int i) const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [i](const Term& t) { return t.mono[i] != 0; });
}

Integer LaurentPoly::coefficient(const Monomial& e) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                             [](const Term& t, const Monomial& m) { return t.mono < m; });
  if (it != terms_.end() && it->mono == e) return it->coeff;
  return 0;
}

std::pair<Monomial, Monomial> LaurentPoly::exponent_box() const {
  Monomial lo, hi;
  if (terms_.empty()) return {lo, hi};
  lo = hi = terms_[0].mono;
  for (const Term& t : terms_)
    for (int i = 1; i <= nvars_; ++i) {
      lo[i] = std::min(lo[i], t.mono[i]);
      hi[i] = std::max(hi[i], t.mono[i]);
    }
  return {lo, hi};
}

LaurentPoly LaurentPoly::shifted(const Monomial& e) const {
  LaurentPoly r = *this;
  // a shift preserves the order of terms
  for (Term& t : r.terms_) t.mono = t.mono + e;
  return r;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (Term& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  check_same(o);
  terms_ = merge_terms(std::move(terms_), o.terms_);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += -o; }

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
  *this = *this * o;
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const Integer& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (Term& t : terms_) t.coeff *= c;
  }
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  a.check_same(b);
  if (a.is_zero() || b.is_zero()) return LaurentPoly(a.nvars_);
  if (b.terms_.size() == 1) {
    LaurentPoly r = a.shifted(b.terms_[0].mono);
    return r *= b.terms_[0].coeff;
  }
  if (a.terms_.size() == 1) {
    LaurentPoly r = b.shifted(a.terms_[0].mono);
    return r *= a.terms_[0].coeff;
  }
  if (auto fast = packed_product(a.terms_, b.terms_, a.nvars_)) {
    LaurentPoly r(a.nvars_);
    r.terms_ = std::move(*fast);
    return r;
  }
  std::unordered_map<Monomial, Integer, MonomialHash> acc;
  acc.reserve(a.terms_.size() * b.terms_.size());
  Integer prod;
  for (const Term& s : a.terms_)
    for (const Term& t : b.terms_) {
      mpz_mul(prod.get_mpz_t(), s.coeff.get_mpz_t(), t.coeff.get_mpz_t());
      acc[s.mono + t.mono] += prod;
    }
  std::vector<Term> terms;
  terms.reserve(acc.size());
  for (auto& [mono, c] : acc)
    if (c != 0) terms.push_back({mono, std::move(c)});
  LaurentPoly r(a.nvars_);
  std::sort(terms.begin(), terms.end(),
            [](const Term& x, const Term& y) { return x.mono < y.mono; });
  r.terms_ = std::move(terms);
  return r;
}

bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff)
      return false;
  return true;
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    Integer c = it->coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    std::string body;
    for (int i = 1; i <= nvars_; ++i) {
      int32_t e = it->mono[i];
      if (e == 0) continue;
      if (!body.empty()) body += "*";
      body += "x" + std::to_string(i);
      if (e != 1) body += "^" + std::to_string(e);
    }
    if (body.empty()) {
      out += c.get_str();
    } else if (c == 1) {
      out += body;
    } else {
      out += c.get_str() + "*" + body;
    }
  }
  return out;
}

std::size_t LaurentPoly::hash() const {
  std::size_t h = static_cast<std::size_t>(nvars_);
  for (const Term& t : terms_) {
    h ^= t.mono.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= std::hash<long>()(mpz_get_si(t.coeff.get_mpz_t())) + (h << 6) + (h >> 2);
  }
  return h;
}

LaurentPoly pow(const LaurentPoly& f, unsigned k) {
  LaurentPoly result = LaurentPoly::constant(f.nvars(), 1);
  LaurentPoly base = f;
  while (k) {
    if (k & 1u) result *= base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

Ring::Ring(int n) : n_(n) { check_nvars(n); }

void Ring::check_index(int i) const {
  if (i < 1 || i > n_)
    throw IndexOutOfRange("index " + std::to_string(i) + " outside 1.." + std::to_string(n_));
}

LaurentPoly Ring::x(int i, int32_t k) const {
  check_index(i);
  return LaurentPoly::monomial(n_, Monomial::unit(i, k));
}

LaurentPoly Ring::monomial(const Monomial& e, const Integer& c) const {
  return LaurentPoly::monomial(n_, e, c);
}

LaurentPoly Ring::sigma(int i) const { return x(i) - one(); }

LaurentPoly Ring::mu(int r, int m) const {
  check_index(r);
  if (m < 1) throw std::invalid_argument("mu needs m >= 1");
  std::vector<Term> t;
  for (int k = 0; k < m; ++k) t.push_back({Monomial::unit(r, k), 1});
  return LaurentPoly(n_, std::move(t));
}

LaurentPoly substitute_ones(const LaurentPoly& f, IndexSet s) {
  if (s.empty()) return f;
  std::vector<Term> t = f.terms();
  for (Term& term : t)
    for (int i : s.elements()) term.mono[i] = 0;
  return LaurentPoly(f.nvars(), std::move(t));
}

SigmaDivision divide_by_sigma(const LaurentPoly& f, int i) {
  const int n = f.nvars();
  if (i < 1 || i > n) throw IndexOutOfRange("sigma index out of range");
  std::vector<Term> q;
  for (const Term& t : f.terms()) {
    int32_t k = t.mono[i];
    Monomial base = t.mono;
    base[i] = 0;
    // c x^b x_i^k = c x^b (x_i^k - 1) + c x^b
    if (k > 0) {
      for (int32_t j = 0; j < k; ++j) {
        Monomial e = base;
        e[i] = j;
        q.push_back({e, t.coeff});
      }
    } else if (k < 0) {
      for (int32_t j = k; j < 0; ++j) {
        Monomial e = base;
        e[i] = j;
        q.push_back({e, -t.coeff});
      }
    }
  }
  return {LaurentPoly(n, std::move(q)), substitute_ones(f, IndexSet{i})};
}

LaurentPoly exact_divide_by_sigma(const LaurentPoly& f, int i) {
  SigmaDivision d = divide_by_sigma(f, i);
  if (!d.remainder.is_zero())
    throw std::domain_error("x" + std::to_string(i) + " - 1 does not divide " + f.to_string());
  return d.quotient;
}

Integer augmentation(const LaurentPoly& f) {
  Integer s = 0;
  for (const Term& t : f.terms()) s += t.coeff;
  return s;
}

namespace {

int32_t mod_exp(int32_t e, int m) {
  int32_t r = e % m;
  return r < 0 ? r + m : r;
}

}  // namespace

QuotientPoly::QuotientPoly(int nvars, int modulus) : modulus_(modulus), rep_(nvars) {
  if (modulus < 1) throw std::invalid_argument("modulus must be positive");
}

QuotientPoly QuotientPoly::from(const LaurentPoly& f, int modulus) {
  QuotientPoly q(f.nvars(), modulus);
  std::vector<Term> t;
  t.reserve(f.size());
  for (const Term& term : f.terms()) {
    Monomial e;
    for (int i = 1; i <= f.nvars(); ++i) e[i] = mod_exp(term.mono[i], modulus);
    t.push_back({e, term.coeff});
  }
  LaurentPoly combined(f.nvars(), std::move(t));
  std::vector<Term> reduced;
  for (const Term& term : combined.terms()) {
    Integer c;
    mpz_fdiv_r_ui(c.get_mpz_t(), term.coeff.get_mpz_t(), static_cast<unsigned long>(modulus));
    if (c != 0) reduced.push_back({term.mono, c});
  }
  q.rep_ = LaurentPoly(f.nvars(), std::move(reduced));
  return q;
}

void QuotientPoly::check_same(const QuotientPoly& o) const {
  if (modulus_ != o.modulus_ || nvars() != o.nvars())
    throw ContextMismatch("quotient polynomials over different quotient rings");
}

QuotientPoly QuotientPoly::operator+(const QuotientPoly& o) const {
  check_same(o);
  return from(rep_ + o.rep_, modulus_);
}

QuotientPoly QuotientPoly::operator-(const QuotientPoly& o) const {
  check_same(o);
  return from(rep_ - o.rep_, modulus_);
}

QuotientPoly QuotientPoly::operator*(const QuotientPoly& o) const {
  check_same(o);
  return from(rep_ * o.rep_, modulus_);
}

QuotientPoly QuotientPoly::operator-() const { return from(-rep_, modulus_); }

QuotientPoly reduce_mod(const LaurentPoly& f, int m) { return QuotientPoly::from(f, m); }

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : std::invalid_argument(msg + " at position " + std::to_string(pos)), pos_(pos), reason_(msg) {}

}  // namespace metab
