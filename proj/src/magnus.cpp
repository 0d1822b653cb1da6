#include "metab/magnus.hpp"

#include <cctype>

namespace metab {

namespace {

class WordParser {
 public:
  WordParser(std::string_view s, int n) : s_(s), n_(n) {}

  GroupWord run() {
    GroupWord w = sequence();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return w;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  GroupWord sequence() {
    GroupWord w;
    for (;;) {
      skip();
      if (pos_ == s_.size() || s_[pos_] == ')' || s_[pos_] == ']' || s_[pos_] == ',') return w;
      GroupWord f = factor();
      w.insert(w.end(), f.begin(), f.end());
    }
  }

  GroupWord factor() {
    GroupWord base = primary();
    while (peek('^')) {
      ++pos_;
      skip();
      std::size_t at = pos_;
      bool neg = false;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
      if (pos_ == s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
        throw ParseError("expected an integer exponent", pos_);
      long k = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        k = k * 10 + (s_[pos_++] - '0');
        if (k > 100000) throw ParseError("exponent too large", at);
      }
      GroupWord unit = neg ? inverse(base) : base;
      GroupWord r;
      for (long i = 0; i < k; ++i) r.insert(r.end(), unit.begin(), unit.end());
      base = std::move(r);
    }
    return base;
  }

  GroupWord primary() {
    skip();
    if (pos_ == s_.size()) throw ParseError("unexpected end of word", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      GroupWord w = sequence();
      if (!peek(')')) throw ParseError("expected ')'", pos_);
      ++pos_;
      return w;
    }
    if (c == '[') {
      ++pos_;
      GroupWord a = sequence();
      if (!peek(',')) throw ParseError("expected ',' in commutator", pos_);
      ++pos_;
      GroupWord b = sequence();
      if (!peek(']')) throw ParseError("expected ']'", pos_);
      ++pos_;
      return commutator(a, b);
    }
    if (c == 'x') {
      std::size_t at = pos_++;
      if (pos_ == s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
        throw ParseError("expected a generator index after 'x'", pos_);
      int idx = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        idx = idx * 10 + (s_[pos_++] - '0');
        if (idx > kMaxVars) break;
      }
      if (idx < 1 || idx > n_)
        throw ParseError("generator x" + std::to_string(idx) + " outside x1..x" + std::to_string(n_),
                         at);
      return {{idx, 1}};
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  std::string_view s_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

GroupWord parse_word(std::string_view text, int n) { return WordParser(text, n).run(); }

std::string word_to_string(const GroupWord& w) {
  std::string out;
  for (const Letter& l : w) {
    if (!out.empty()) out += " ";
    out += "x" + std::to_string(l.gen);
    if (l.sign < 0) out += "^-1";
  }
  return out;
}

GroupWord inverse(const GroupWord& w) {
  GroupWord r(w.rbegin(), w.rend());
  for (Letter& l : r) l.sign = -l.sign;
  return r;
}

GroupWord commutator(const GroupWord& a, const GroupWord& b) {
  GroupWord r = a;
  r.insert(r.end(), b.begin(), b.end());
  GroupWord ai = inverse(a), bi = inverse(b);
  r.insert(r.end(), ai.begin(), ai.end());
  r.insert(r.end(), bi.begin(), bi.end());
  return r;
}

MagnusElement::MagnusElement(int n) : n_(n), a_(n, LaurentPoly(n)) {}

MagnusElement::MagnusElement(Monomial g, std::vector<LaurentPoly> a)
    : n_(static_cast<int>(a.size())), g_(g), a_(std::move(a)) {
#ifdef METAB_CHECK_INVARIANTS
  if (!invariant_holds()) throw std::logic_error("Magnus pair violates x^g - 1 = sum a_i sigma_i");
#endif
}

MagnusElement MagnusElement::generator(int n, int i) {
  Ring(n).check_index(i);
  MagnusElement e(n);
  e.g_ = Monomial::unit(i);
  e.a_[i - 1] = LaurentPoly::constant(n, 1);
  return e;
}

bool MagnusElement::is_identity() const {
  if (!g_.is_one()) return false;
  for (const LaurentPoly& p : a_)
    if (!p.is_zero()) return false;
  return true;
}

bool MagnusElement::invariant_holds() const {
  Ring ring(n_);
  LaurentPoly s = ring.zero();
  for (int i = 1; i <= n_; ++i) s += a_[i - 1] * ring.sigma(i);
  return s == ring.monomial(g_) - ring.one();
}

MagnusElement MagnusElement::operator*(const MagnusElement& o) const {
  if (n_ != o.n_) throw ContextMismatch("Magnus elements of different rank");
  std::vector<LaurentPoly> a = a_;
  for (int i = 0; i < n_; ++i) a[i] += o.a_[i].shifted(g_);
  return MagnusElement(g_ + o.g_, std::move(a));
}

MagnusElement MagnusElement::inverse() const {
  std::vector<LaurentPoly> a(n_);
  Monomial ng = -g_;
  for (int i = 0; i < n_; ++i) a[i] = -a_[i].shifted(ng);
  return MagnusElement(ng, std::move(a));
}

std::string MagnusElement::to_string() const {
  std::string out = "(" + LaurentPoly::monomial(n_, g_).to_string() + "; ";
  for (int i = 0; i < n_; ++i) {
    if (i) out += ", ";
    out += a_[i].to_string();
  }
  return out + ")";
}

MagnusElement embed(const GroupWord& w, int n) {
  MagnusElement e(n);
  for (const Letter& l : w) {
    MagnusElement x = MagnusElement::generator(n, l.gen);
    e = e * (l.sign > 0 ? x : x.inverse());
  }
  return e;
}

bool is_identity(const GroupWord& w, int n) { return embed(w, n).is_identity(); }

QuotientElement::QuotientElement(int n, int m) : n_(n), m_(m), a_(n, QuotientPoly(n, m)) {}

QuotientElement::QuotientElement(int m, Monomial g, std::vector<QuotientPoly> a)
    : n_(static_cast<int>(a.size())), m_(m), g_(g), a_(std::move(a)) {
  for (int i = 1; i <= n_; ++i) g_[i] = ((g_[i] % m) + m) % m;
}

bool QuotientElement::is_identity() const {
  if (!g_.is_one()) return false;
  for (const QuotientPoly& p : a_)
    if (!p.is_zero()) return false;
  return true;
}

bool QuotientElement::invariant_holds() const {
  Ring ring(n_);
  QuotientPoly s(n_, m_);
  for (int i = 1; i <= n_; ++i) s = s + a_[i - 1] * reduce_mod(ring.sigma(i), m_);
  return s == reduce_mod(ring.monomial(g_) - ring.one(), m_);
}

QuotientElement QuotientElement::operator*(const QuotientElement& o) const {
  if (n_ != o.n_ || m_ != o.m_) throw ContextMismatch("quotient elements of different groups");
  std::vector<QuotientPoly> a = a_;
  for (int i = 0; i < n_; ++i)
    a[i] = a[i] + reduce_mod(o.a_[i].representative().shifted(g_), m_);
  return QuotientElement(m_, g_ + o.g_, std::move(a));
}

std::string QuotientElement::to_string() const {
  std::string out = "(" + LaurentPoly::monomial(n_, g_).to_string() + "; ";
  for (int i = 0; i < n_; ++i) {
    if (i) out += ", ";
    out += a_[i].to_string();
  }
  return out + ") mod " + std::to_string(m_);
}

QuotientElement project(const MagnusElement& e, int m) {
  std::vector<QuotientPoly> a;
  a.reserve(e.n());
  for (const LaurentPoly& p : e.a()) a.push_back(reduce_mod(p, m));
  return QuotientElement(m, e.g(), std::move(a));
}

GroupWord random_word(std::mt19937_64& rng, int n, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), gen(1, n), sign(0, 1);
  GroupWord w(len(rng));
  for (Letter& l : w) l = {gen(rng), sign(rng) ? 1 : -1};
  return w;
}

}  // namespace metab
