// Acceptance run: one PASS/FAIL line per criterion, each with a pinned time
// limit. Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>
#include <string>

#include "json.hpp"
#include "metab/certificate.hpp"
#include "metab/decompose.hpp"
#include "metab/generators.hpp"
#include "metab/ideal.hpp"
#include "metab/suites.hpp"
#include "support/oracles.hpp"

using namespace metab;
using nlohmann::json;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

int run(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.ok && s >= limit_s) o.fail("over the time limit");
  std::printf("%s [%d] %s  (%.2f s, limit %.0f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, title.c_str(), s,
              limit_s, o.ok ? "" : "  -- ", o.detail.c_str());
  std::fflush(stdout);
  return o.ok ? 0 : 1;
}

void require_suite(Outcome& o, const std::string& name, int n, int m) {
  SuiteReport r = run_suite(name, n, m);
  for (const IdentityCheck& c : r.checks)
    if (!c.ok) {
      o.fail(name + " n=" + std::to_string(n) + " m=" + std::to_string(m) + ": " + c.name + ": " + c.detail);
      return;
    }
}

// A with row u equal to f (sigma_i e_j - sigma_j e_i), written out entrywise.
Matrix koszul_matrix(int n, int u, int i, int j, const LaurentPoly& f) {
  Ring ring(n);
  Matrix m = Matrix::identity(n);
  m(u, j) += f * ring.sigma(i);
  m(u, i) -= f * ring.sigma(j);
  return m;
}

Outcome type1_identities() {
  Outcome o;
  for (int n : {4, 5})
    for (int m : {2, 3}) {
      Ring ring(n);
      for (const LaurentPoly& f : sample_polys(ring))
        for (int u = 1; u <= n; ++u)
          for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
              if (i == j || i == u || j == u) continue;
              Certified b = type1_basic(n, u, i, j, f, m);
              if (!(b.matrix.matrix() == koszul_matrix(n, u, i, j, ring.constant(m) * f)) ||
                  !verify_witness(b.witness, b.matrix, m))
                o.fail("basic row differs");
              for (int k = 1; k <= n; ++k) {
                if (k == u || k == j) continue;
                Certified c = type1_comm_k(n, u, i, j, k, f, m);
                if (!(c.matrix.matrix() == koszul_matrix(n, u, i, j, ring.sigma(k) * ring.mu(k, m) * f)) ||
                    !verify_witness(c.witness, c.matrix, m))
                  o.fail("comm_k row differs");
                Certified d = type1_comm_ik(n, u, i, j, k, f, m);
                if (!(d.matrix.matrix() == koszul_matrix(n, u, i, j, ring.sigma(k) * ring.mu(i, m) * f)) ||
                    !verify_witness(d.witness, d.matrix, m))
                  o.fail("comm_ik row differs");
              }
            }
      require_suite(o, "type1", n, m);
    }
  return o;
}

Outcome type2_identities() {
  Outcome o;
  for (int n : {4, 5})
    for (int m : {2, 3}) {
      require_suite(o, "type2", n, m);
      Ring ring(n);
      std::mt19937_64 rng(400 + 10 * n + m);
      // the two halves of H_m taken separately, then mixed
      for (int branch = 0; branch < 3; ++branch)
        for (int trial = 0; trial < 4; ++trial) {
          int r = 1 + trial % n;
          LaurentPoly f = random_poly(ring, rng, 2, 1), g = random_poly(ring, rng, 2, 1);
          LaurentPoly a = branch == 0   ? ring.constant(m) * f
                          : branch == 1 ? ring.sigma(r) * ring.mu(r, m) * f
                                        : ring.constant(m) * f + ring.sigma(r) * ring.mu(r, m) * g;
          LaurentPoly b = ring.sigma(r) * ring.mu(r, m) * g;
          Certified x = type2_block(n, 1, 2, a, m), y = type2_block(n, 1, 2, b, m);
          Certified s = type2_block(n, 1, 2, a + b, m);
          LaurentPoly su = ring.sigma(1), sv = ring.sigma(2);
          Matrix want = Matrix::identity(n);
          want(1, 1) += su * sv * a;
          want(1, 2) -= su * su * a;
          want(2, 1) += sv * sv * a;
          want(2, 2) -= su * sv * a;
          if (!(x.matrix.matrix() == want)) o.fail("block matrix differs from its definition");
          if (!verify_witness(x.witness, x.matrix, m)) o.fail("block witness does not replay");
          if (!(x.matrix * y.matrix == s.matrix)) o.fail("block(f) block(g) != block(f+g)");
        }
    }
  return o;
}

Outcome congruences() {
  Outcome o;
  std::mt19937_64 rng(3);
  for (int n : {4, 5})
    for (int m : {2, 3}) {
      require_suite(o, "congruences", n, m);
      Ring ring(n);
      for (int i = 1; i <= n; ++i) {
        for (const MembershipCertificate& c : {power_congruence(ring, i, m), mu_square_congruence(ring, i, m)}) {
          oracle::Point p = oracle::random_point(n, rng);
          uint64_t sum = 0;
          for (const CertificateTerm& t : c.terms)
            sum = (sum + oracle::mulmod(oracle::eval(t.generator, p), oracle::eval(t.cofactor, p))) % oracle::kPrime;
          if (sum != oracle::eval(c.target, p)) o.fail("certificate does not expand to its target");
        }
        LaurentPoly target = ring.x(i, m * m) - ring.one();
        if (!(power_congruence(ring, i, m).target == target)) o.fail("power congruence has the wrong target");
        if (!(mu_square_congruence(ring, i, m).target == ring.mu(i, m * m))) o.fail("mu congruence target");
      }
      IdealExpr allowed = IdealExpr::J(n, m) + IdealExpr::O(m * m);
      for (int r = 0; r <= n; ++r) {
        LaurentPoly g = r ? ring.x(r, m * m) - ring.one() : ring.constant(m * m);
        auto c = rewrite_into_J(ring, g, m);
        if (!c || !c->replays() || !c->valid(ring)) o.fail("H_{m^2} generator does not rewrite");
        else if (!(c->ideal == allowed) && !(c->ideal == IdealExpr::J(n, m))) o.fail("rewrite leaves J_m + O_{m^2}");
      }
    }
  return o;
}

Outcome magnus_layer() {
  Outcome o;
  for (int n : {4, 5}) require_suite(o, "magnus", n, 2);
  return o;
}

IAMatrix random_generator(int n, std::mt19937_64& rng) {
  Ring ring(n);
  std::uniform_int_distribution<int> idx(1, n);
  int u = idx(rng), i = idx(rng), j = idx(rng), k = idx(rng);
  while (i == u) i = idx(rng);
  while (j == u || j == i) j = idx(rng);
  while (k == u || k == j) k = idx(rng);
  LaurentPoly f = random_poly(ring, rng, 1, 1);
  const int m = 2;
  switch (rng() % 6) {
    case 0: return type1_basic(n, u, i, j, f, m).matrix;
    case 1: return type1_comm_k(n, u, i, j, k, f, m).matrix;
    case 2: return type1_comm_ik(n, u, i, j, k, f, m).matrix;
    case 3: return type2_sq(n, u, i, j, f, m).matrix;
    case 4: return type2_mixed(n, u, i, j, f, m).matrix;
    default: return rng() % 2 ? dilation(n, i, j) : mat_inv(dilation(n, i, j));
  }
}

Outcome ia_layer() {
  Outcome o;
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = trial % 2 ? 5 : 4;
    IAMatrix a = IAMatrix::identity(n);
    for (int k = 0, len = 2 + trial % 3; k < len; ++k) a = a * random_generator(n, rng);
    const Matrix& mat = a.matrix();
    oracle::Point p = oracle::random_point(n, rng);
    if (!oracle::fixes_sigma_at(mat, p)) o.fail("product does not fix sigma");
    // entry (k,l) of A lies in the span of sigma_i, i != l, iff it vanishes
    // once every x_i with i != l is set to 1
    for (int l = 1; l <= n; ++l) {
      IndexSet others;
      for (int i = 1; i <= n; ++i)
        if (i != l) others.insert(i);
      for (int k = 1; k <= n; ++k)
        if (!substitute_ones(a.a(k, l), others).is_zero()) o.fail("entry outside the tail span");
    }
    if (!entries_in_tail_span(a)) o.fail("library tail-span test disagrees");
    DetMonomial d = det_monomial(a);
    if (oracle::det(oracle::eval(mat, p)) != oracle::eval_monomial(d.s, n, p))
      o.fail("determinant is not the reported monomial");
    Matrix inv = mat.adjugate().shifted(-d.s);
    if (!(inv * mat).is_identity() || !(mat * inv).is_identity()) o.fail("adjugate inverse is not exact");
  }
  return o;
}

std::vector<DecompositionCertificate> g_certificates;

Outcome decomposition() {
  Outcome o;
  const int n = 4, m = 2;
  std::vector<IAMatrix> corpus = ig_corpus(n, m, 20, 20240601);
  for (std::size_t c = 0; c < corpus.size(); ++c) {
    const IAMatrix& a = corpus[c];
    std::string tag = "#" + std::to_string(c) + ": ";
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (!oracle::in_H(a.a(i, j), m * m)) o.fail(tag + "corpus element is not in IG_{4,4}");
    DecompositionCertificate cert = decompose(a, m);
    IAMatrix prod = IAMatrix::identity(n);
    for (const CertificateFactor& f : cert.factors) {
      if (f.tag == FactorTag::IAM && !verify_witness(f.witness, f.matrix, m)) o.fail(tag + "witness fails");
      if (f.tag == FactorTag::ISL && !in_ISL(f.matrix, f.u, m)) o.fail(tag + "ISL factor fails");
      prod = prod * f.matrix;
    }
    if (!(prod == a)) o.fail(tag + "factors do not multiply to the input");
    // the stages end at the identity exactly when the inverse product undoes the input
    IAMatrix rest = a;
    for (auto it = cert.factors.rbegin(); it != cert.factors.rend(); ++it)
      rest = rest * (it->tag == FactorTag::ISL ? it->inverse : mat_inv(it->matrix));
    if (!rest.is_identity()) o.fail(tag + "terminal matrix is not the identity");
    if (!check_certificate(cert).ok) o.fail(tag + "check_certificate rejects");
    g_certificates.push_back(std::move(cert));
  }
  return o;
}

std::string fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Every string leaf holding an integer coefficient (a digit run that is not
// a variable index or an exponent).
void coefficient_sites(json& j, std::vector<json*>& out) {
  static const std::regex coeff(R"((^|[^x^\d])\d)");
  if (j.is_string()) {
    if (std::regex_search(j.get<std::string>(), coeff)) out.push_back(&j);
  } else if (j.is_array() || j.is_object()) {
    for (auto& v : j) coefficient_sites(v, out);
  }
}

std::string perturb(const std::string& s, std::mt19937_64& rng) {
  static const std::regex coeff(R"((^|[^x^\d])(\d+))");
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), coeff); it != std::sregex_iterator(); ++it)
    runs.push_back({static_cast<std::size_t>(it->position(2)), static_cast<std::size_t>(it->length(2))});
  auto [pos, len] = runs[rng() % runs.size()];
  long v = std::stol(s.substr(pos, len));
  return s.substr(0, pos) + std::to_string(v + 1) + s.substr(pos + len);
}

int cli_check(const std::filesystem::path& file) {
  std::string cmd = std::string(METAB_CLI) + " check " + file.string() + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Outcome checker_independence() {
  Outcome o;
  if (g_certificates.size() < 20) o.fail("decomposition corpus is incomplete");
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("metab-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::mt19937_64 rng(77);
  for (std::size_t c = 0; c < g_certificates.size(); ++c) {
    std::string tag = "#" + std::to_string(c) + ": ";
    std::string text = certificate_to_text(g_certificates[c]);
    fs::path good = dir / ("cert" + std::to_string(c) + ".json");
    std::ofstream(good) << text;
    if (cli_check(good) != 0) o.fail(tag + "clean certificate rejected");

    json doc = json::parse(text);
    doc.erase("checksum");
    std::vector<json*> sites;
    coefficient_sites(doc["input"], sites);
    coefficient_sites(doc["factors"], sites);
    json* site = sites[rng() % sites.size()];
    *site = perturb(site->get<std::string>(), rng);

    json stale = doc;
    stale["checksum"] = json::parse(text)["checksum"];
    fs::path bad = dir / ("stale" + std::to_string(c) + ".json");
    std::ofstream(bad) << stale.dump(1);
    if (cli_check(bad) == 0) o.fail(tag + "perturbation with a stale checksum accepted");

    // recompute the checksum so only the mathematics can catch the change
    json sealed = doc;
    sealed["checksum"] = fnv1a(doc.dump());
    fs::path resealed = dir / ("sealed" + std::to_string(c) + ".json");
    std::ofstream(resealed) << sealed.dump(1);
    if (cli_check(resealed) == 0) o.fail(tag + "resealed perturbation accepted");
  }
  fs::remove_all(dir);
  return o;
}

Outcome oracle_agreement() {
  Outcome o;
  std::mt19937_64 rng(88);
  for (int k = 0; k < 50; ++k) {
    const int n = k % 2 ? 5 : 4, m = k % 4 < 2 ? 2 : 3;
    Ring ring(n);
    LaurentPoly f = random_H_member(ring, m, rng);
    if (!oracle::in_H(f, m)) o.fail("sample is not in H");
    auto direct = decompose_H(f, m);
    if (!direct || !direct->replays() || !direct->valid(ring)) o.fail("decompose_H misses a member");
    StructuredResult r = in_structured(ring, f, IdealExpr::H(n, m));
    if (r.status != OracleStatus::Found) o.fail("window oracle does not find a member: " + r.reason);
    else if (!r.certificate->replays() || !r.certificate->valid(ring)) o.fail("window certificate invalid");
  }
  return o;
}

}  // namespace

int main() {
  int failed = 0;
  failed += run(1, "type-1 constructors replay (n=4,5; m=2,3)", 30, type1_identities);
  failed += run(2, "type-2 rows and blocks replay, block additivity, both H branches", 30, type2_identities);
  failed += run(3, "congruence certificates expand; H_{m^2} generators rewrite into J_m + O_{m^2}", 5, congruences);
  failed += run(4, "Magnus invariant on 1000 words, metabelian law, commutators nontrivial", 20, magnus_layer);
  failed += run(5, "IA invariants and exact adjugate inverses on 200 generator products", 30, ia_layer);
  failed += run(6, "20 elements of IG_{4,4} decompose with verified factors (m=2)", 300, decomposition);
  failed += run(7, "file checker accepts clean and rejects perturbed certificates", 60, checker_independence);
  failed += run(8, "H certificates and the window oracle agree on 50 members", 60, oracle_agreement);
  std::printf("%d of 8 criteria failed\n", failed);
  return failed;
}
