#include "metab/ideal.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "metab/lattice.hpp"

namespace metab {

namespace {

void normalize_product(IdealProduct& p) {
  std::vector<Atom> out;
  std::map<int, int> sig;
  long o = 1;
  for (const Atom& a : p) {
    switch (a.kind) {
      case AtomKind::Sig:
        if (a.b > 0) sig[a.a] += a.b;
        break;
      case AtomKind::O:
        o *= a.a;
        break;
      case AtomKind::U:
        if (a.b != 1) out.push_back(a);
        break;
      default:
        out.push_back(a);
    }
  }
  for (auto [i, k] : sig) out.push_back({AtomKind::Sig, i, k});
  if (o != 1) out.push_back({AtomKind::O, static_cast<int>(o)});
  std::sort(out.begin(), out.end());
  p = std::move(out);
}

}  // namespace

void IdealExpr::normalize() {
  for (IdealProduct& p : sums_) normalize_product(p);
  std::sort(sums_.begin(), sums_.end());
  sums_.erase(std::unique(sums_.begin(), sums_.end()), sums_.end());
}

IdealExpr IdealExpr::full() {
  IdealExpr e;
  e.sums_.push_back({});
  return e;
}

IdealExpr IdealExpr::atom(Atom a) {
  if ((a.kind == AtomKind::O || a.kind == AtomKind::U) && (a.kind == AtomKind::O ? a.a : a.b) < 1)
    throw std::invalid_argument("ideal modulus must be positive");
  IdealExpr e;
  e.sums_.push_back({a});
  e.normalize();
  return e;
}

IdealExpr operator+(const IdealExpr& a, const IdealExpr& b) {
  IdealExpr r = a;
  r.sums_.insert(r.sums_.end(), b.sums_.begin(), b.sums_.end());
  r.normalize();
  return r;
}

IdealExpr operator*(const IdealExpr& a, const IdealExpr& b) {
  IdealExpr r;
  for (const IdealProduct& p : a.sums_)
    for (const IdealProduct& q : b.sums_) {
      IdealProduct s = p;
      s.insert(s.end(), q.begin(), q.end());
      r.sums_.push_back(std::move(s));
    }
  r.normalize();
  return r;
}

IdealExpr IdealExpr::H(int n, int m) {
  IdealExpr e = O(m);
  for (int r = 1; r <= n; ++r) e = e + sig(r) * U(r, m);
  return e;
}

IdealExpr IdealExpr::J(int n, int m) {
  IdealExpr e = aug() * aug() * O(m) + aug() * O(m) * O(m);
  for (int r = 1; r <= n; ++r) e = e + sig(r, 3) * U(r, m);
  return e;
}

namespace {

IdealExpr tail_family(int n, int m, int u, int v, const IdealExpr& front) {
  IdealExpr inner = IdealExpr::aug() * IdealExpr::O(m) + IdealExpr::O(m) * IdealExpr::O(m);
  for (int r = 1; r <= u; ++r)
    inner = inner + IdealExpr::aug() * IdealExpr::sig(r) * IdealExpr::U(r, m);
  IdealExpr e = front * inner;
  for (int r = u + 1; r <= n; ++r)
    if (r != v || v <= u) e = e + IdealExpr::sig(r, 3) * IdealExpr::U(r, m);
  if (v > u) e = e + IdealExpr::aug() * IdealExpr::sig(v, 2) * IdealExpr::U(v, m);
  return e;
}

}  // namespace

IdealExpr IdealExpr::J_tilde(int n, int m, int u, int v) {
  if (u >= n) return IdealExpr();
  return tail_family(n, m, u, v, aug_tail(u));
}

IdealExpr IdealExpr::J_uv(int n, int m, int u, int v) { return tail_family(n, m, u, v, aug()); }

namespace {

std::string atom_text(const Atom& a) {
  switch (a.kind) {
    case AtomKind::Aug:
      return "A";
    case AtomKind::AugTail:
      return "Atail(" + std::to_string(a.a) + ")";
    case AtomKind::Sig:
      return "sig(" + std::to_string(a.a) + ")" + (a.b == 1 ? "" : "^" + std::to_string(a.b));
    case AtomKind::O:
      return "O(" + std::to_string(a.a) + ")";
    case AtomKind::U:
      return "U(" + std::to_string(a.a) + "," + std::to_string(a.b) + ")";
  }
  return "?";
}

}  // namespace

std::string IdealExpr::to_string() const {
  if (sums_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < sums_.size(); ++i) {
    if (i) out += " + ";
    if (sums_[i].empty()) {
      out += "R";
      continue;
    }
    for (std::size_t j = 0; j < sums_[i].size(); ++j) {
      if (j) out += "*";
      out += atom_text(sums_[i][j]);
    }
  }
  return out;
}

namespace {

class IdealParser {
 public:
  IdealParser(std::string_view s, int n) : s_(s), n_(n) {}

  IdealExpr run() {
    IdealExpr e = sum();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }
  int integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("expected an integer", pos_);
    if (pos_ - start > 6) throw ParseError("integer too large", start);
    return std::stoi(std::string(s_.substr(start, pos_ - start)));
  }
  std::vector<int> args(std::size_t count) {
    expect('(');
    std::vector<int> v;
    for (std::size_t i = 0; i < count; ++i) {
      if (i) expect(',');
      v.push_back(integer());
    }
    expect(')');
    return v;
  }
  void check_index(int i, std::size_t at) {
    if (i < 1 || i > n_) throw ParseError("index " + std::to_string(i) + " out of range", at);
  }
  void check_modulus(int m, std::size_t at) {
    if (m < 1) throw ParseError("modulus must be positive", at);
  }

  IdealExpr sum() {
    IdealExpr e = product();
    while (eat('+')) e = e + product();
    return e;
  }
  IdealExpr product() {
    IdealExpr e = power();
    while (eat('*')) e = e * power();
    return e;
  }
  IdealExpr power() {
    IdealExpr base = primary();
    if (!eat('^')) return base;
    int k = integer();
    if (k > 12) throw ParseError("ideal power too large", pos_);
    IdealExpr r = IdealExpr::full();
    for (int i = 0; i < k; ++i) r = r * base;
    return r;
  }
  IdealExpr primary() {
    skip();
    std::size_t at = pos_;
    if (eat('(')) {
      IdealExpr e = sum();
      expect(')');
      return e;
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    if (name.empty()) throw ParseError("expected an ideal", at);
    if (name == "A") return IdealExpr::aug();
    if (name == "R") return IdealExpr::full();
    if (name == "H") {
      auto a = args(1);
      check_modulus(a[0], at);
      return IdealExpr::H(n_, a[0]);
    }
    if (name == "J") {
      auto a = args(1);
      check_modulus(a[0], at);
      return IdealExpr::J(n_, a[0]);
    }
    if (name == "O") {
      auto a = args(1);
      check_modulus(a[0], at);
      return IdealExpr::O(a[0]);
    }
    if (name == "U") {
      auto a = args(2);
      check_index(a[0], at);
      check_modulus(a[1], at);
      return IdealExpr::U(a[0], a[1]);
    }
    if (name == "Atail") {
      auto a = args(1);
      if (a[0] > n_) throw ParseError("tail index out of range", at);
      return IdealExpr::aug_tail(a[0]);
    }
    if (name == "sig") {
      auto a = args(1);
      check_index(a[0], at);
      return IdealExpr::sig(a[0]);
    }
    if (name == "Jt" || name == "Juv") {
      auto a = args(3);
      check_modulus(a[0], at);
      if (a[1] > n_) throw ParseError("u out of range", at);
      check_index(a[2], at);
      return name == "Jt" ? IdealExpr::J_tilde(n_, a[0], a[1], a[2])
                          : IdealExpr::J_uv(n_, a[0], a[1], a[2]);
    }
    throw ParseError("unknown ideal '" + name + "'", at);
  }

  std::string_view s_;
  int n_;
  std::size_t pos_ = 0;
};

std::vector<LaurentPoly> atom_generators(const Ring& ring, const Atom& a) {
  std::vector<LaurentPoly> g;
  switch (a.kind) {
    case AtomKind::Aug:
      for (int i = 1; i <= ring.n(); ++i) g.push_back(ring.sigma(i));
      break;
    case AtomKind::AugTail:
      for (int i = a.a + 1; i <= ring.n(); ++i) g.push_back(ring.sigma(i));
      break;
    case AtomKind::Sig:
      g.push_back(pow(ring.sigma(a.a), static_cast<unsigned>(a.b)));
      break;
    case AtomKind::O:
      g.push_back(ring.constant(a.a));
      break;
    case AtomKind::U:
      g.push_back(ring.mu(a.a, a.b));
      break;
  }
  return g;
}

}  // namespace

IdealExpr IdealExpr::parse(std::string_view text, int n) { return IdealParser(text, n).run(); }

std::vector<LaurentPoly> IdealExpr::generators(const Ring& ring, const IdealProduct& p) {
  std::vector<LaurentPoly> acc{ring.one()};
  for (const Atom& a : p) {
    std::vector<LaurentPoly> gens = atom_generators(ring, a);
    std::vector<LaurentPoly> next;
    std::unordered_set<LaurentPoly> seen;
    for (const LaurentPoly& x : acc)
      for (const LaurentPoly& y : gens) {
        LaurentPoly z = x * y;
        if (seen.insert(z).second) next.push_back(std::move(z));
      }
    acc = std::move(next);
  }
  return acc;
}

std::vector<std::pair<std::size_t, LaurentPoly>> IdealExpr::generators(const Ring& ring) const {
  std::vector<std::pair<std::size_t, LaurentPoly>> out;
  for (std::size_t i = 0; i < sums_.size(); ++i)
    for (LaurentPoly& g : generators(ring, sums_[i])) out.emplace_back(i, std::move(g));
  return out;
}

bool IdealExpr::inside_augmentation() const {
  return std::all_of(sums_.begin(), sums_.end(), [](const IdealProduct& p) {
    return std::any_of(p.begin(), p.end(), [](const Atom& a) {
      return a.kind == AtomKind::Aug || a.kind == AtomKind::AugTail ||
             (a.kind == AtomKind::Sig && a.b > 0);
    });
  });
}

LaurentPoly MembershipCertificate::expand() const {
  LaurentPoly s(target.nvars());
  for (const CertificateTerm& t : terms) s += t.generator * t.cofactor;
  return s;
}

bool MembershipCertificate::valid(const Ring& ring) const {
  if (!replays()) return false;
  std::unordered_set<LaurentPoly> gens;
  for (auto& [idx, g] : ideal.generators(ring)) gens.insert(g);
  return std::all_of(terms.begin(), terms.end(),
                     [&](const CertificateTerm& t) { return gens.count(t.generator) > 0; });
}

LaurentPoly MembershipCertificate::cofactor_of(const LaurentPoly& generator) const {
  LaurentPoly s(target.nvars());
  for (const CertificateTerm& t : terms)
    if (t.generator == generator) s += t.cofactor;
  return s;
}

bool in_tail_span(const LaurentPoly& f, IndexSet s) { return substitute_ones(f, s).is_zero(); }

bool in_augmentation(const LaurentPoly& f) { return augmentation(f) == 0; }

bool in_H(const LaurentPoly& f, int m) { return reduce_mod(f, m).is_zero(); }

std::optional<MembershipCertificate> decompose_H(const LaurentPoly& f, int m) {
  if (m < 1) throw std::invalid_argument("modulus must be positive");
  const int n = f.nvars();
  Ring ring(n);
  std::vector<std::vector<Term>> cof(n + 1);
  std::vector<Term> residue;
  for (const Term& t : f.terms()) {
    // walk from e to its residue class one coordinate at a time:
    // x^{e(r-1)} - x^{e(r)} = x^{e(r)} (x_r^{qm} - 1)
    Monomial cur = t.mono;
    for (int r = 1; r <= n; ++r) {
      int32_t e = cur[r];
      int32_t rho = ((e % m) + m) % m;
      int32_t q = (e - rho) / m;
      cur[r] = rho;
      if (q > 0) {
        for (int32_t j = 0; j < q; ++j) {
          Monomial mono = cur;
          mono[r] = rho + j * m;
          cof[r].push_back({mono, t.coeff});
        }
      } else if (q < 0) {
        for (int32_t j = q; j < 0; ++j) {
          Monomial mono = cur;
          mono[r] = rho + j * m;
          cof[r].push_back({mono, -t.coeff});
        }
      }
    }
    residue.push_back({cur, t.coeff});
  }
  LaurentPoly rest(n, std::move(residue));
  std::vector<Term> divided;
  for (const Term& t : rest.terms()) {
    if (!mpz_divisible_ui_p(t.coeff.get_mpz_t(), static_cast<unsigned long>(m))) return std::nullopt;
    divided.push_back({t.mono, t.coeff / m});
  }
  MembershipCertificate cert{f, IdealExpr::H(n, m), {}};
  for (int r = 1; r <= n; ++r) {
    LaurentPoly c(n, std::move(cof[r]));
    if (!c.is_zero()) cert.terms.push_back({ring.x(r, m) - ring.one(), std::move(c)});
  }
  LaurentPoly c0(n, std::move(divided));
  if (!c0.is_zero()) cert.terms.push_back({ring.constant(m), std::move(c0)});
  return cert;
}

std::vector<LaurentPoly> tail_quotients(const LaurentPoly& f, int u, LaurentPoly* head) {
  const int n = f.nvars();
  if (u < 0 || u > n) throw IndexOutOfRange("split index out of range");
  std::vector<LaurentPoly> q(n + 1, LaurentPoly(n));
  LaurentPoly rest = f;
  for (int i = n; i > u; --i) {
    SigmaDivision d = divide_by_sigma(rest, i);
    q[i] = std::move(d.quotient);
    rest = std::move(d.remainder);
  }
  if (head) *head = std::move(rest);
  return q;
}

TailSplit split_tail(const LaurentPoly& f, int u) {
  LaurentPoly head;
  std::vector<LaurentPoly> q = tail_quotients(f, u, &head);
  Ring ring(f.nvars());
  LaurentPoly tail(f.nvars());
  for (int i = u + 1; i <= f.nvars(); ++i) tail += ring.sigma(i) * q[i];
  return {std::move(tail), std::move(head)};
}

namespace {

// q1 = (mu_{i,m} - m) / sigma_i and q2 = (nu - m) / (x_i^m - 1), with
// nu = sum_{j<m} x_i^{mj}
std::pair<LaurentPoly, LaurentPoly> congruence_quotients(const Ring& ring, int i, int m) {
  LaurentPoly q1 = exact_divide_by_sigma(ring.mu(i, m) - ring.constant(m), i);
  LaurentPoly q2 = ring.zero();
  for (int j = 1; j < m; ++j)
    for (int l = 0; l < j; ++l) q2 += ring.x(i, l * m);
  return {q1, q2};
}

}  // namespace

MembershipCertificate power_congruence(const Ring& ring, int i, int m) {
  ring.check_index(i);
  if (m < 1) throw std::invalid_argument("modulus must be positive");
  auto [q1, q2] = congruence_quotients(ring, i, m);
  LaurentPoly s = ring.sigma(i);
  LaurentPoly mu = ring.mu(i, m);
  MembershipCertificate c;
  c.target = ring.x(i, m * m) - ring.one();
  c.ideal = IdealExpr::sig(i, 3) * IdealExpr::U(i, m) + IdealExpr::sig(i, 2) * IdealExpr::O(m) +
            IdealExpr::sig(i) * IdealExpr::O(m * m);
  c.terms.push_back({s * s * s * mu, q1 * q2});
  c.terms.push_back({s * s * ring.constant(m), q1 + mu * q2});
  c.terms.push_back({s * ring.constant(m * m), ring.one()});
  return c;
}

MembershipCertificate mu_square_congruence(const Ring& ring, int v, int m) {
  ring.check_index(v);
  if (m < 1) throw std::invalid_argument("modulus must be positive");
  auto [q1, q2] = congruence_quotients(ring, v, m);
  LaurentPoly s = ring.sigma(v);
  LaurentPoly mu = ring.mu(v, m);
  MembershipCertificate c;
  c.target = ring.mu(v, m * m);
  c.ideal = IdealExpr::sig(v, 2) * IdealExpr::U(v, m) + IdealExpr::sig(v) * IdealExpr::O(m) +
            IdealExpr::O(m * m);
  c.terms.push_back({s * s * mu, q1 * q2});
  c.terms.push_back({s * ring.constant(m), q1 + mu * q2});
  c.terms.push_back({ring.constant(m * m), ring.one()});
  return c;
}

namespace {

void add_term(std::vector<CertificateTerm>& terms, const LaurentPoly& g, const LaurentPoly& c) {
  if (c.is_zero()) return;
  for (CertificateTerm& t : terms)
    if (t.generator == g) {
      t.cofactor += c;
      if (t.cofactor.is_zero())
        terms.erase(terms.begin() + (&t - terms.data()));
      return;
    }
  terms.push_back({g, c});
}

}  // namespace

std::optional<MembershipCertificate> rewrite_into_J(const Ring& ring, const LaurentPoly& f, int m) {
  auto h = decompose_H(f, m * m);
  if (!h) return std::nullopt;
  const LaurentPoly mm = ring.constant(m * m);
  MembershipCertificate out;
  out.target = f;
  out.ideal = IdealExpr::J(ring.n(), m);
  LaurentPoly c0 = ring.zero();
  for (const CertificateTerm& t : h->terms) {
    if (t.generator == mm) {
      c0 = t.cofactor;
      continue;
    }
    int r = 0;
    for (int i = 1; i <= ring.n(); ++i)
      if (t.generator.depends_on(i)) r = i;
    for (const CertificateTerm& p : power_congruence(ring, r, m).terms)
      add_term(out.terms, p.generator, p.cofactor * t.cofactor);
  }
  if (!c0.is_zero()) {
    if (augmentation(c0) == 0) {
      std::vector<LaurentPoly> q = tail_quotients(c0, 0, nullptr);
      for (int i = 1; i <= ring.n(); ++i) add_term(out.terms, ring.sigma(i) * mm, q[i]);
    } else {
      out.ideal = out.ideal + IdealExpr::O(m * m);
      add_term(out.terms, mm, c0);
    }
  }
  return out;
}

StructuredResult in_structured(const Ring& ring, const LaurentPoly& f, const IdealExpr& ideal,
                               StructuredOptions opts) {
  StructuredResult res;
  if (f.is_zero()) {
    res.status = OracleStatus::Found;
    res.certificate = MembershipCertificate{f, ideal, {}};
    return res;
  }
  if (ideal.inside_augmentation() && augmentation(f) != 0) {
    res.status = OracleStatus::Excluded;
    res.reason = "augmentation is nonzero but the ideal lies in the augmentation ideal";
    return res;
  }
  const int n = ring.n();
  auto gens = ideal.generators(ring);
  // drop zero generators and duplicates across summands
  std::vector<LaurentPoly> uniq;
  {
    std::unordered_set<LaurentPoly> seen;
    for (auto& [idx, g] : gens)
      if (!g.is_zero() && seen.insert(g).second) uniq.push_back(g);
  }
  if (uniq.empty()) {
    res.status = OracleStatus::Excluded;
    res.reason = "the ideal is zero";
    return res;
  }
  auto [flo, fhi] = f.exponent_box();
  for (int margin = 0; margin <= opts.rounds; ++margin) {
    Monomial lo, hi;
    for (int i = 1; i <= n; ++i) {
      lo[i] = flo[i] - margin;
      hi[i] = fhi[i] + margin;
    }
    std::unordered_map<Monomial, uint32_t, MonomialHash> row_of;
    auto row = [&](const Monomial& e) {
      auto [it, fresh] = row_of.emplace(e, static_cast<uint32_t>(row_of.size()));
      return it->second;
    };
    auto to_vec = [&](const LaurentPoly& p) {
      SparseVec v;
      for (const Term& t : p.terms()) v.emplace_back(row(t.mono), t.coeff);
      std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
      return v;
    };
    SparseVec target = to_vec(f);
    struct Column {
      std::size_t gen;
      Monomial shift;
    };
    std::vector<Column> cols;
    IntegerLattice lattice;
    bool too_big = false;
    for (std::size_t gi = 0; gi < uniq.size() && !too_big; ++gi) {
      auto [glo, ghi] = uniq[gi].exponent_box();
      Monomial from, to;
      bool empty = false;
      for (int i = 1; i <= n; ++i) {
        from[i] = lo[i] - glo[i];
        to[i] = hi[i] - ghi[i];
        if (from[i] > to[i]) empty = true;
      }
      if (empty) continue;
      Monomial e = from;
      for (;;) {
        cols.push_back({gi, e});
        lattice.add(to_vec(uniq[gi].shifted(e)));
        if (cols.size() > 200000) {
          too_big = true;
          break;
        }
        int i = 1;
        while (i <= n) {
          if (e[i] < to[i]) {
            ++e[i];
            break;
          }
          e[i] = from[i];
          ++i;
        }
        if (i > n) break;
      }
    }
    if (too_big) {
      res.reason = "window too large";
      return res;
    }
    auto sol = lattice.solve(target);
    if (!sol) continue;
    std::vector<std::vector<Term>> cof(uniq.size());
    for (auto& [id, c] : *sol) cof[cols[id].gen].push_back({cols[id].shift, c});
    MembershipCertificate cert{f, ideal, {}};
    for (std::size_t gi = 0; gi < uniq.size(); ++gi) {
      LaurentPoly c(n, std::move(cof[gi]));
      if (!c.is_zero()) cert.terms.push_back({uniq[gi], std::move(c)});
    }
    res.status = OracleStatus::Found;
    res.certificate = std::move(cert);
    res.window_margin = margin;
    return res;
  }
  res.reason = "no certificate within the window schedule";
  return res;
}

}  // namespace metab
