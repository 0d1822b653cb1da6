#include "metab/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <thread>

#include "metab/certificate.hpp"
#include "metab/decompose.hpp"
#include "metab/generators.hpp"
#include "metab/ideal.hpp"
#include "metab/magnus.hpp"

namespace metab {

bool SuiteReport::ok() const { return failures() == 0; }

std::size_t SuiteReport::failures() const {
  std::size_t f = 0;
  for (const IdentityCheck& c : checks) f += c.ok ? 0 : 1;
  return f;
}

std::vector<std::string> suite_names() {
  return {"type1", "type2", "congruences", "magnus", "decompose-roundtrip"};
}

std::vector<LaurentPoly> sample_polys(const Ring& ring) {
  return {ring.parse("1"),
          ring.parse("x1"),
          ring.parse("x2^-1 - 3"),
          ring.parse("2*x1*x3 + x4^2"),
          ring.parse("x1^2*x2 - x3^-1 + 5"),
          ring.parse("x1*x2*x3 - x4")};
}

LaurentPoly random_poly(const Ring& ring, std::mt19937_64& rng, int max_terms, int max_exp) {
  std::uniform_int_distribution<int> terms(1, max_terms), coeff(-2, 2), ex(-max_exp, max_exp);
  std::vector<Term> t;
  int k = terms(rng);
  for (int i = 0; i < k; ++i) {
    Monomial e;
    for (int v = 1; v <= ring.n(); ++v) e[v] = ex(rng);
    int c = coeff(rng);
    t.push_back({e, Integer(c == 0 ? 1 : c)});
  }
  return LaurentPoly(ring.n(), std::move(t));
}

LaurentPoly random_H_member(const Ring& ring, int m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, ring.n());
  LaurentPoly f = ring.zero();
  int parts = 1 + static_cast<int>(rng() % 3);
  for (int p = 0; p < parts; ++p) {
    int r = pick(rng);
    LaurentPoly gen = r == 0 ? ring.constant(m) : ring.x(r, m) - ring.one();
    f += gen * random_poly(ring, rng);
  }
  return f;
}

std::vector<IAMatrix> ig_corpus(int n, int m, int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Ring ring(n);
  const long m2 = static_cast<long>(m) * m;
  std::uniform_int_distribution<int> idx(1, n);
  auto distinct = [&](int k) {
    std::vector<int> out;
    while (static_cast<int>(out.size()) < k) {
      int i = idx(rng);
      if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
    }
    return out;
  };
  auto atom = [&]() -> IAMatrix {
    auto uij = distinct(3);
    LaurentPoly f = random_poly(ring, rng, 1, 1) * Integer(m2);
    IAMatrix a = row_elem(uij[0], koszul_row(ring, uij[1], uij[2], f));
    if (rng() % 3 == 0) a = power(a, rng() % 2 == 0 ? 1 : -1);
    if (rng() % 3 == 0) {
      // IG is normal in IA, so conjugating by a dilation stays inside it
      auto ij = distinct(2);
      IAMatrix d = dilation(n, ij[0], ij[1]);
      a = d * a * mat_inv(d);
    }
    return a;
  };
  std::vector<IAMatrix> out;
  for (int c = 0; c < count; ++c) {
    int k = 1 + c % 2;
    IAMatrix a = atom();
    for (int i = 1; i < k; ++i) a = a * atom();
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

using Check = std::function<IdentityCheck()>;

IdentityCheck timed(const std::string& name, const std::function<std::string()>& body) {
  IdentityCheck c;
  c.name = name;
  auto t0 = std::chrono::steady_clock::now();
  try {
    c.detail = body();
    c.ok = c.detail.empty();
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail = std::string("exception: ") + e.what();
  }
  c.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

// Runs the checks on a small worker pool; results keep the check order.
std::vector<IdentityCheck> run_all(const std::vector<Check>& checks) {
  std::vector<IdentityCheck> out(checks.size());
  std::atomic<std::size_t> next{0};
  unsigned workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < checks.size(); i = next++) out[i] = checks[i]();
    });
  for (std::thread& t : pool) t.join();
  return out;
}

std::string certified_ok(const Certified& c, const IAMatrix& expected, int m) {
  if (!check_ia(c.matrix)) return "result is not an IA matrix";
  if (!(c.matrix == expected)) return "matrix differs from the stated row";
  auto r = verify_witness_report(c.witness, c.matrix, m);
  return r.ok ? "" : r.message;
}

std::string tag(std::initializer_list<int> idx) {
  std::string s = "(";
  for (int i : idx) s += (s.size() > 1 ? "," : "") + std::to_string(i);
  return s + ")";
}

std::vector<Check> type1_checks(int n, int m) {
  Ring ring(n);
  auto fs = sample_polys(ring);
  std::vector<Check> checks;
  for (int u = 1; u <= n; ++u)
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        if (i == u || j == u) continue;
        for (std::size_t fi = 0; fi < fs.size(); ++fi) {
          LaurentPoly f = fs[fi];
          std::string suffix = " f#" + std::to_string(fi);
          checks.push_back([=] {
            return timed("basic" + tag({u, i, j}) + suffix, [&] {
              Ring r(n);
              auto row = koszul_row(r, i, j, f * Integer(m));
              return certified_ok(type1_basic(n, u, i, j, f, m), row_elem(u, row), m);
            });
          });
          for (int k = 1; k <= n; ++k) {
            if (k == u) continue;
            checks.push_back([=] {
              return timed("comm_k" + tag({u, i, j, k}) + suffix, [&] {
                Ring r(n);
                auto row = koszul_row(r, i, j, r.sigma(k) * r.mu(k, m) * f);
                return certified_ok(type1_comm_k(n, u, i, j, k, f, m), row_elem(u, row), m);
              });
            });
            for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
              if (k == b) continue;
              checks.push_back([=] {
                return timed("comm_ik" + tag({u, a, b, k}) + suffix, [&] {
                  Ring r(n);
                  auto row = koszul_row(r, a, b, r.sigma(k) * r.mu(a, m) * f);
                  return certified_ok(type1_comm_ik(n, u, a, b, k, f, m), row_elem(u, row), m);
                });
              });
            }
          }
        }
      }
  return checks;
}

std::vector<LaurentPoly> block_samples(const Ring& ring, int m) {
  std::vector<LaurentPoly> out;
  out.push_back(ring.constant(m));
  out.push_back(ring.constant(m) * ring.parse("x1 - 2*x3^-1"));
  for (int r = 1; r <= ring.n(); ++r) out.push_back((ring.x(r, m) - ring.one()) * ring.x(r % ring.n() + 1));
  out.push_back(ring.constant(m) * ring.x(2) + (ring.x(1, m) - ring.one()) * ring.parse("x4 + 1"));
  return out;
}

std::vector<Check> type2_checks(int n, int m) {
  Ring ring(n);
  auto fs = sample_polys(ring);
  std::vector<Check> checks;
  for (int u = 1; u <= n; ++u)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j || i == u || j == u) continue;
        for (std::size_t fi = 0; fi < fs.size(); fi += 2) {
          LaurentPoly f = fs[fi];
          std::string suffix = " f#" + std::to_string(fi);
          checks.push_back([=] {
            return timed("sq" + tag({u, i, j}) + suffix, [&] {
              Ring r(n);
              LaurentPoly s = r.sigma(u);
              auto row = koszul_row(r, i, j, s * s * r.mu(u, m) * f);
              return certified_ok(type2_sq(n, u, i, j, f, m), row_elem(u, row), m);
            });
          });
          checks.push_back([=] {
            return timed("mixed" + tag({u, i, j}) + suffix, [&] {
              Ring r(n);
              auto row = koszul_row(r, i, j, r.sigma(u) * r.sigma(j) * r.mu(i, m) * f);
              return certified_ok(type2_mixed(n, u, i, j, f, m), row_elem(u, row), m);
            });
          });
        }
      }
  auto hs = block_samples(ring, m);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      for (std::size_t fi = 0; fi < hs.size(); ++fi) {
        LaurentPoly f = hs[fi];
        checks.push_back([=] {
          return timed("block" + tag({u, v}) + " h#" + std::to_string(fi), [&] {
            return certified_ok(type2_block(n, u, v, f, m), block_matrix(n, u, v, f), m);
          });
        });
      }
  for (std::size_t a = 0; a + 1 < hs.size(); ++a) {
    LaurentPoly f = hs[a], g = hs[a + 1];
    checks.push_back([=] {
      return timed("block additivity h#" + std::to_string(a) + " + h#" + std::to_string(a + 1), [&] {
        Certified x = type2_block(n, 1, 2, f, m), y = type2_block(n, 1, 2, g, m);
        Certified s = type2_block(n, 1, 2, f + g, m);
        if (!(x.matrix * y.matrix == s.matrix)) return std::string("block(f) block(g) != block(f+g)");
        return certified_ok(certified_product({x, y}, n), s.matrix, m);
      });
    });
  }
  return checks;
}

std::vector<Check> congruence_checks(int n, int m) {
  std::vector<Check> checks;
  for (int i = 1; i <= n; ++i) {
    checks.push_back([=] {
      return timed("power congruence x" + std::to_string(i), [&] {
        Ring ring(n);
        auto c = power_congruence(ring, i, m);
        if (!c.replays()) return std::string("does not expand to x^(m^2) - 1");
        if (!(c.target == ring.x(i, m * m) - ring.one())) return std::string("wrong target");
        return c.valid(ring) ? std::string() : std::string("generator outside the stated ideal");
      });
    });
    checks.push_back([=] {
      return timed("mu square congruence x" + std::to_string(i), [&] {
        Ring ring(n);
        auto c = mu_square_congruence(ring, i, m);
        if (!c.replays()) return std::string("does not expand to mu_{m^2}");
        return c.valid(ring) ? std::string() : std::string("generator outside the stated ideal");
      });
    });
  }
  for (int r = 0; r <= n; ++r) {
    checks.push_back([=] {
      std::string name = r ? "H_{m^2} generator x" + std::to_string(r) + "^(m^2) - 1" : "H_{m^2} generator m^2";
      return timed(name, [&] {
        Ring ring(n);
        LaurentPoly g = r ? ring.x(r, m * m) - ring.one() : ring.constant(m * m);
        auto c = rewrite_into_J(ring, g, m);
        if (!c) return std::string("no rewriting found");
        if (!c->replays() || !c->valid(ring)) return std::string("rewriting does not replay");
        IdealExpr allowed = IdealExpr::J(n, m) + IdealExpr::O(m * m);
        if (!(c->ideal == allowed) && !(c->ideal == IdealExpr::J(n, m)))
          return std::string("rewriting uses an ideal outside J_m + O_{m^2}");
        return std::string();
      });
    });
  }
  return checks;
}

std::vector<Check> magnus_checks(int n, int m) {
  std::vector<Check> checks;
  const int batches = 10;
  for (int b = 0; b < batches; ++b) {
    checks.push_back([=] {
      return timed("random words batch " + std::to_string(b), [&] {
        std::mt19937_64 rng(1000 + b);
        for (int w = 0; w < 100; ++w) {
          GroupWord word = random_word(rng, n, 30);
          MagnusElement e(n);
          for (const Letter& l : word) {
            MagnusElement x = MagnusElement::generator(n, l.gen);
            e = e * (l.sign > 0 ? x : x.inverse());
            if (!e.invariant_holds()) return std::string("invariant fails on ") + word_to_string(word);
          }
          if (!(e * e.inverse()).is_identity()) return std::string("inverse fails");
          if (!project(e, m).invariant_holds()) return std::string("projected invariant fails");
        }
        return std::string();
      });
    });
    checks.push_back([=] {
      return timed("metabelian law batch " + std::to_string(b), [&] {
        std::mt19937_64 rng(5000 + b);
        for (int q = 0; q < 20; ++q) {
          GroupWord a = random_word(rng, n, 8), bb = random_word(rng, n, 8);
          GroupWord c = random_word(rng, n, 8), d = random_word(rng, n, 8);
          if (!is_identity(commutator(commutator(a, bb), commutator(c, d)), n))
            return std::string("[[a,b],[c,d]] != 1");
        }
        return std::string();
      });
    });
  }
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      checks.push_back([=] {
        return timed("[x" + std::to_string(i) + ",x" + std::to_string(j) + "] != 1", [&] {
          GroupWord w = commutator(GroupWord{{i, 1}}, GroupWord{{j, 1}});
          return is_identity(w, n) ? std::string("commutator is trivial") : std::string();
        });
      });
  return checks;
}

std::vector<Check> decompose_checks(int n, int m) {
  std::vector<Check> checks;
  const int count = 20;
  auto corpus = std::make_shared<std::vector<IAMatrix>>(ig_corpus(n, m, count, 20240601));
  for (int c = 0; c < count; ++c) {
    checks.push_back([=] {
      return timed("decompose corpus #" + std::to_string(c), [&] {
        const IAMatrix& alpha = (*corpus)[c];
        DecompositionCertificate cert = decompose(alpha, m);
        CheckOutcome out = check_certificate(cert);
        if (!out.ok) return "certificate: " + out.message;
        FileCheckResult file = check_certificate_text(certificate_to_text(cert));
        if (!file.ok) return "file check: " + file.message;
        return std::string();
      });
    });
  }
  return checks;
}

}  // namespace

SuiteReport run_suite(const std::string& name, int n, int m) {
  if (n < 2 || n > kMaxVars) throw std::invalid_argument("n must lie in 2.." + std::to_string(kMaxVars));
  if (m < 1) throw std::invalid_argument("m must be positive");
  std::vector<Check> checks;
  if (name == "type1") {
    if (n < 4) throw std::invalid_argument("suite type1 needs n >= 4");
    checks = type1_checks(n, m);
  } else if (name == "type2") {
    if (n < 4) throw std::invalid_argument("suite type2 needs n >= 4");
    checks = type2_checks(n, m);
  } else if (name == "congruences") {
    checks = congruence_checks(n, m);
  } else if (name == "magnus") {
    checks = magnus_checks(n, m);
  } else if (name == "decompose-roundtrip") {
    if (n < 4) throw std::invalid_argument("suite decompose-roundtrip needs n >= 4");
    checks = decompose_checks(n, m);
  } else {
    throw std::invalid_argument("unknown suite '" + name + "'");
  }
  SuiteReport rep;
  rep.suite = name;
  rep.n = n;
  rep.m = m;
  rep.checks = run_all(checks);
  return rep;
}

}  // namespace metab
