// metab: command-line front end.
//
// Exit codes: 0 success, 1 verification failure (or a negative membership
// answer), 2 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "metab/builder.hpp"
#include "metab/certificate.hpp"
#include "metab/decompose.hpp"
#include "metab/ideal.hpp"
#include "metab/magnus.hpp"
#include "metab/suites.hpp"

using namespace metab;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kFail = 1, kInput = 2;

struct Common {
  int n = 4;
  int m = 2;
  bool report = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-n", c.n, "rank of the free metabelian group")->check(CLI::Range(1, kMaxVars));
  sub->add_option("-m", c.m, "modulus")->check(CLI::PositiveNumber);
  sub->add_flag("--report", c.report, "print a JSON report instead of text");
}

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (int i = 1; i <= m.n(); ++i) {
    json row = json::array();
    for (int j = 1; j <= m.n(); ++j) row.push_back(m(i, j).to_string());
    rows.push_back(row);
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_word(const std::string& text, const Common& c) {
  GroupWord w = parse_word(text, c.n);
  MagnusElement e = embed(w, c.n);
  QuotientElement q = project(e, c.m);
  if (c.report) {
    json a = json::array();
    for (const LaurentPoly& p : e.a()) a.push_back(p.to_string());
    std::cout << json{{"word", word_to_string(w)},
                      {"g", LaurentPoly::monomial(c.n, e.g()).to_string()},
                      {"a", a},
                      {"trivial", e.is_identity()},
                      {"projection", q.to_string()},
                      {"projection_trivial", q.is_identity()}}
                     .dump(2)
              << "\n";
    return kOk;
  }
  std::cout << "word:        " << (w.empty() ? "(empty)" : word_to_string(w)) << "\n"
            << "magnus pair: " << e.to_string() << "\n"
            << "verdict:     " << (e.is_identity() ? "trivial" : "nontrivial") << "\n"
            << "mod " << c.m << ":       " << q.to_string() << " ("
            << (q.is_identity() ? "trivial" : "nontrivial") << ")\n";
  return kOk;
}

int cmd_aut(const std::vector<std::string>& images, const Common& c) {
  if (static_cast<int>(images.size()) != c.n)
    throw std::invalid_argument("expected " + std::to_string(c.n) + " generator images, got " +
                                std::to_string(images.size()));
  std::vector<GroupWord> words;
  for (const std::string& s : images) words.push_back(parse_word(s, c.n));
  IAMatrix a = IAMatrix::from_images(words, c.n);
  DetMonomial det = det_monomial(a);
  bool ig = in_IG(a, c.m), ig2 = in_IG(a, c.m * c.m);
  std::string det_text = LaurentPoly::monomial(c.n, det.s).to_string();
  if (c.report) {
    std::cout << json{{"matrix", matrix_rows(a.matrix())},
                      {"determinant", det_text},
                      {"in_IG_m", ig},
                      {"in_IG_m2", ig2}}
                     .dump(2)
              << "\n";
    return kOk;
  }
  std::cout << a.matrix().render() << "determinant: " << det_text << "\n"
            << "in IG_{n," << c.m << "}:  " << (ig ? "yes" : "no") << "\n"
            << "in IG_{n," << c.m * c.m << "}:  " << (ig2 ? "yes" : "no") << "\n";
  return kOk;
}

int cmd_ideal(const std::string& poly, const std::string& ideal_text, int rounds, const Common& c) {
  Ring ring(c.n);
  LaurentPoly f = ring.parse(poly);
  IdealExpr ideal = ideal_text.empty() ? IdealExpr::H(c.n, c.m) : IdealExpr::parse(ideal_text, c.n);
  std::optional<MembershipCertificate> cert;
  std::string status;
  if (ideal == IdealExpr::H(c.n, c.m)) {
    cert = decompose_H(f, c.m);
    status = cert ? "member" : "not a member";
  } else {
    StructuredOptions opts;
    opts.rounds = rounds;
    StructuredResult r = in_structured(ring, f, ideal, opts);
    cert = r.certificate;
    status = r.status == OracleStatus::Found      ? "member"
             : r.status == OracleStatus::Excluded ? "not a member (" + r.reason + ")"
                                                  : "unknown within the search window (" + r.reason + ")";
  }
  if (c.report) {
    json terms = json::array();
    if (cert)
      for (const CertificateTerm& t : cert->terms)
        terms.push_back({{"generator", t.generator.to_string()}, {"cofactor", t.cofactor.to_string()}});
    std::cout << json{{"polynomial", f.to_string()},
                      {"ideal", ideal.to_string()},
                      {"status", status},
                      {"certificate", terms}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "polynomial: " << f.to_string() << "\nideal:      " << ideal.to_string()
              << "\nstatus:     " << status << "\n";
    if (cert)
      for (const CertificateTerm& t : cert->terms)
        std::cout << "  (" << t.generator.to_string() << ") * (" << t.cofactor.to_string() << ")\n";
  }
  return cert ? kOk : kFail;
}

int cmd_verify(const std::string& suite, const Common& c) {
  SuiteReport rep = run_suite(suite, c.n, c.m);
  double total = 0;
  for (const IdentityCheck& ch : rep.checks) total += ch.millis;
  if (c.report) {
    json checks = json::array();
    for (const IdentityCheck& ch : rep.checks)
      checks.push_back({{"name", ch.name}, {"ok", ch.ok}, {"millis", ch.millis}, {"detail", ch.detail}});
    std::cout << json{{"suite", suite},       {"n", c.n},
                      {"m", c.m},             {"passed", rep.checks.size() - rep.failures()},
                      {"failed", rep.failures()}, {"checks", checks}}
                     .dump(2)
              << "\n";
  } else {
    for (const IdentityCheck& ch : rep.checks) {
      std::printf("%-4s %9.2f ms  %s", ch.ok ? "ok" : "FAIL", ch.millis, ch.name.c_str());
      if (!ch.ok) std::printf("  -- %s", ch.detail.c_str());
      std::printf("\n");
    }
    std::printf("%s: %zu checks, %zu failed, %.1f ms of check time (n=%d, m=%d)\n", suite.c_str(),
                rep.checks.size(), rep.failures(), total, c.n, c.m);
  }
  return rep.ok() ? kOk : kFail;
}

int cmd_decompose(const std::string& input, bool from_file, bool strict, const std::string& out,
                  const Common& c) {
  IAMatrix alpha = from_file ? IAMatrix::from_matrix(matrix_from_text(read_file(input), c.n))
                             : build_matrix(input, c.n);
  DecompositionCertificate cert;
  try {
    DecomposeOptions opts;
    opts.require_IG = strict;
    cert = decompose(alpha, c.m, opts);
  } catch (const StageError& e) {
    std::cerr << "decomposition failed: " << e.what() << "\n";
    return kFail;
  }
  std::string text = certificate_to_text(cert);
  bool replay = check_certificate(cert).ok;
  std::size_t iam = 0, isl = 0;
  for (const CertificateFactor& f : cert.factors) (f.tag == FactorTag::IAM ? iam : isl)++;
  if (!out.empty()) {
    std::ofstream o(out);
    if (!o) throw std::runtime_error("cannot write " + out);
    o << text << "\n";
  }
  std::ostream& summary = out.empty() ? std::cerr : std::cout;
  if (c.report) {
    summary << json{{"factors", cert.factors.size()},
                    {"iam", iam},
                    {"isl", isl},
                    {"input_in_IG", cert.input_in_IG},
                    {"replay", replay}}
                   .dump(2)
            << "\n";
  } else {
    if (!cert.input_in_IG) summary << "note:    input lies outside IG_{n,m^2}\n";
    summary << "factors: " << cert.factors.size() << " (" << iam << " IAM, " << isl << " ISL)\n"
            << "replay:  " << (replay ? "OK" : "FAILED") << "\n";
  }
  if (out.empty()) std::cout << text << "\n";
  return replay ? kOk : kFail;
}

int cmd_check(const std::string& path, const Common& c) {
  FileCheckResult r = check_certificate_text(read_file(path));
  if (c.report) {
    std::cout << json{{"ok", r.ok}, {"factor", r.factor_index}, {"message", r.message}}.dump(2) << "\n";
  } else if (r.ok) {
    std::cout << "certificate OK\n";
  } else {
    std::cout << "certificate REJECTED";
    if (r.factor_index >= 0) std::cout << " at factor " << r.factor_index;
    std::cout << ": " << r.message << "\n";
  }
  if (r.ok) return kOk;
  return r.format_error ? kInput : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free metabelian groups: Magnus embedding, IA matrices and congruence decompositions"};
  app.require_subcommand(1, 1);

  Common common;
  std::string text, ideal_text, out, suite;
  std::vector<std::string> images;
  bool from_file = false, strict = false;
  int rounds = 3;

  CLI::App* word = app.add_subcommand("word", "Magnus pair of a group word");
  word->add_option("word", text, "word such as \"[x1,x2] x3^-2\"")->required();
  add_common(word, common);

  CLI::App* aut = app.add_subcommand("aut", "IA matrix of the automorphism with the given generator images");
  aut->add_option("images", images, "image words of x1..xn")->required();
  add_common(aut, common);

  CLI::App* ideal = app.add_subcommand("ideal", "ideal membership with a certificate");
  ideal->add_option("polynomial", text, "element of R_n")->required();
  ideal->add_option("--in", ideal_text, "ideal descriptor, default H(m)");
  ideal->add_option("--rounds", rounds, "window enlargements for the bounded search")->check(CLI::Range(0, 10));
  add_common(ideal, common);

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "type1, type2, congruences, magnus, decompose-roundtrip")->required();
  add_common(verify, common);

  CLI::App* dec = app.add_subcommand("decompose", "decompose an element of IG_{n,m^2}");
  dec->add_option("input", text, "builder expression, or a matrix file with --file")->required();
  dec->add_flag("--file", from_file, "read the input as a JSON matrix file");
  dec->add_flag("--strict", strict, "reject inputs outside IG_{n,m^2}");
  dec->add_option("--out", out, "certificate path (default: standard output)");
  add_common(dec, common);

  CLI::App* check = app.add_subcommand("check", "re-verify a certificate file");
  check->add_option("certificate", text, "certificate path")->required();
  add_common(check, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*word) return cmd_word(text, common);
    if (*aut) return cmd_aut(images, common);
    if (*ideal) return cmd_ideal(text, ideal_text, rounds, common);
    if (*verify) return cmd_verify(suite, common);
    if (*dec) return cmd_decompose(text, from_file, strict, out, common);
    if (*check) return cmd_check(text, common);
  } catch (const ParseError& e) {
    std::cerr << "parse error at position " << e.position() << ": " << e.reason() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kInput;
}
