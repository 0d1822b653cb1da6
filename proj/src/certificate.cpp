#include "metab/certificate.hpp"

#include <cstdio>
#include "json.hpp"

namespace metab {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "metab-decomposition";
constexpr int kVersion = 1;

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 1; i <= m.n(); ++i) {
    json row = json::array();
    for (int j = 1; j <= m.n(); ++j) row.push_back(m(i, j).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_parse(const json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw CertificateFormatError("matrix must have " + std::to_string(n) + " rows");
  Ring ring(n);
  Matrix m(n);
  for (int r = 0; r < n; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw CertificateFormatError("matrix row must have " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) {
      if (!row[c].is_string()) throw CertificateFormatError("matrix entries must be strings");
      try {
        m(r + 1, c + 1) = ring.parse(row[c].get<std::string>());
      } catch (const ParseError& e) {
        throw CertificateFormatError(std::string("bad polynomial: ") + e.what());
      }
    }
  }
  return m;
}

IAMatrix ia_parse(const json& j, int n) {
  Matrix m = matrix_parse(j, n);
  if (!fixes_sigma(m)) throw CertificateFormatError("stored matrix does not fix sigma");
  return IAMatrix::unverified(std::move(m));
}

json node_json(const WitnessPtr& p) {
  json j;
  j["kind"] = kind_name(p->kind);
  switch (p->kind) {
    case WitnessKind::Pow:
      j["exponent"] = p->exponent;
      j["matrix"] = matrix_json(p->matrix.matrix());
      break;
    case WitnessKind::Plain:
      j["matrix"] = matrix_json(p->matrix.matrix());
      break;
    case WitnessKind::Product: {
      json fs = json::array();
      for (const WitnessPtr& c : p->children) fs.push_back(node_json(c));
      j["factors"] = std::move(fs);
      break;
    }
    case WitnessKind::Inverse:
      j["of"] = node_json(p->children.at(0));
      break;
    case WitnessKind::Conjugate:
      j["of"] = node_json(p->children.at(0));
      j["by"] = node_json(p->children.at(1));
      break;
    case WitnessKind::Commutator:
      j["left"] = node_json(p->children.at(0));
      j["right"] = node_json(p->children.at(1));
      break;
  }
  return j;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw CertificateFormatError(std::string("missing field '") + key + "'");
  return j.at(key);
}

PowerWitness node_parse(const json& j, int n, int depth) {
  if (depth > 512) throw CertificateFormatError("witness nesting too deep");
  const json& kind_field = field(j, "kind");
  if (!kind_field.is_string()) throw CertificateFormatError("witness kind must be a string");
  const std::string kind = kind_field.get<std::string>();
  if (kind == "POW") {
    const json& e = field(j, "exponent");
    if (!e.is_number_integer()) throw CertificateFormatError("POW exponent must be an integer");
    // the exponent is range-checked by the witness discipline, not here
    return PowerWitness::pow(ia_parse(field(j, "matrix"), n), e.get<long>());
  }
  if (kind == "PLAIN") return PowerWitness::plain(ia_parse(field(j, "matrix"), n));
  if (kind == "PRODUCT") {
    const json& fs = field(j, "factors");
    if (!fs.is_array()) throw CertificateFormatError("PRODUCT factors must be a list");
    std::vector<WitnessPtr> kids;
    for (const json& f : fs) {
      PowerWitness w = node_parse(f, n, depth + 1);
      kids.push_back(w.root() ? w.root() : PowerWitness::product({}).root());
    }
    auto node = std::make_shared<WitnessNode>();
    node->kind = WitnessKind::Product;
    node->children = std::move(kids);
    return PowerWitness(node);
  }
  // The remaining kinds are rebuilt node by node so that the parsed tree has
  // exactly the stored shape.
  auto node = std::make_shared<WitnessNode>();
  auto child = [&](const char* key) {
    PowerWitness w = node_parse(field(j, key), n, depth + 1);
    if (w.root()) return w.root();
    auto empty = std::make_shared<WitnessNode>();
    empty->kind = WitnessKind::Product;
    return WitnessPtr(empty);
  };
  if (kind == "INVERSE") {
    node->kind = WitnessKind::Inverse;
    node->children = {child("of")};
  } else if (kind == "CONJUGATE") {
    node->kind = WitnessKind::Conjugate;
    node->children = {child("of"), child("by")};
  } else if (kind == "COMMUTATOR") {
    node->kind = WitnessKind::Commutator;
    node->children = {child("left"), child("right")};
  } else {
    throw CertificateFormatError("unknown witness kind '" + kind + "'");
  }
  return PowerWitness(node);
}

json witness_json(const PowerWitness& w) {
  if (!w.root()) return json{{"kind", "PRODUCT"}, {"factors", json::array()}};
  return node_json(w.root());
}

// Evidence that an ISL(u) factor has entries sigma_u * q with q in H_m:
// q and its cofactors over x_r^m - 1 and m.
json isl_evidence(const IAMatrix& g, int u, int m) {
  const int n = g.n();
  json entries = json::array();
  for (int i = 1; i <= n; ++i) {
    if (i == u) continue;
    for (int j = 1; j <= n; ++j) {
      if (j == u) continue;
      LaurentPoly a = g.a(i, j);
      if (a.is_zero()) continue;
      LaurentPoly q = exact_divide_by_sigma(a, u);
      auto cert = decompose_H(q, m);
      if (!cert) throw std::logic_error("ISL factor entry is not in sigma_u H");
      json terms = json::array();
      for (const CertificateTerm& t : cert->terms)
        terms.push_back({{"generator", t.generator.to_string()}, {"cofactor", t.cofactor.to_string()}});
      entries.push_back({{"row", i}, {"column", j}, {"quotient", q.to_string()}, {"terms", terms}});
    }
  }
  return {{"determinant", "1"}, {"entries", std::move(entries)}};
}

std::string check_isl_evidence(const json& ev, const IAMatrix& g, int u, int m) {
  const int n = g.n();
  Ring ring(n);
  for (int v = 1; v <= n; ++v)
    if (!g.a(u, v).is_zero()) return "row u of A is not zero";
  if (!field(ev, "determinant").is_string() || field(ev, "determinant").get<std::string>() != "1")
    return "evidence does not record determinant 1";
  const json& entries = field(ev, "entries");
  if (!entries.is_array()) throw CertificateFormatError("ISL evidence entries must be a list");
  std::vector<std::vector<bool>> covered(n + 1, std::vector<bool>(n + 1, false));
  for (const json& e : entries) {
    int i = field(e, "row").get<int>(), j = field(e, "column").get<int>();
    if (i < 1 || i > n || j < 1 || j > n || i == u || j == u) return "evidence entry out of range";
    LaurentPoly q = ring.parse(field(e, "quotient").get<std::string>());
    if (!(ring.sigma(u) * q == g.a(i, j)))
      return "evidence quotient does not match entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
    LaurentPoly sum = ring.zero();
    for (const json& t : field(e, "terms")) {
      LaurentPoly gen = ring.parse(field(t, "generator").get<std::string>());
      bool known = gen == ring.constant(m);
      for (int r = 1; r <= n && !known; ++r) known = gen == ring.x(r, m) - ring.one();
      if (!known) return "evidence uses a generator outside H_m";
      sum += gen * ring.parse(field(t, "cofactor").get<std::string>());
    }
    if (!(sum == q)) return "evidence cofactors do not replay";
    covered[i][j] = true;
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != u && j != u && !g.a(i, j).is_zero() && !covered[i][j])
        return "evidence misses a nonzero minor entry";
  return {};
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

json certificate_body(const DecompositionCertificate& c) {
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["n"] = c.n;
  doc["m"] = c.m;
  doc["input"] = matrix_json(c.input.matrix());
  doc["input_in_IG"] = c.input_in_IG;
  json factors = json::array();
  for (std::size_t i = 0; i < c.factors.size(); ++i) {
    const CertificateFactor& f = c.factors[i];
    json fj;
    fj["index"] = i;
    fj["matrix"] = matrix_json(f.matrix.matrix());
    if (f.tag == FactorTag::IAM) {
      fj["tag"] = "IAM";
      fj["witness"] = witness_json(f.witness);
    } else {
      fj["tag"] = "ISL";
      fj["u"] = f.u;
      fj["inverse"] = matrix_json(f.inverse.matrix());
      fj["evidence"] = isl_evidence(f.matrix, f.u, c.m);
    }
    factors.push_back(std::move(fj));
  }
  doc["factors"] = std::move(factors);
  return doc;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw CertificateFormatError(std::string("not valid JSON: ") + e.what());
  }
}

DecompositionCertificate certificate_from_json(const json& doc) {
  if (!field(doc, "format").is_string() || doc["format"].get<std::string>() != kFormat)
    throw CertificateFormatError("not a decomposition certificate");
  if (field(doc, "version") != kVersion) throw CertificateFormatError("unsupported version");
  DecompositionCertificate c;
  c.n = field(doc, "n").get<int>();
  c.m = field(doc, "m").get<int>();
  if (c.n < 1 || c.n > kMaxVars) throw CertificateFormatError("n out of range");
  if (c.m < 1) throw CertificateFormatError("m must be positive");
  c.input = ia_parse(field(doc, "input"), c.n);
  if (doc.contains("input_in_IG")) {
    if (!doc["input_in_IG"].is_boolean()) throw CertificateFormatError("input_in_IG must be a boolean");
    c.input_in_IG = doc["input_in_IG"].get<bool>();
  }
  const json& factors = field(doc, "factors");
  if (!factors.is_array()) throw CertificateFormatError("factors must be a list");
  for (const json& fj : factors) {
    CertificateFactor f;
    f.matrix = ia_parse(field(fj, "matrix"), c.n);
    const std::string tag = field(fj, "tag").get<std::string>();
    if (tag == "IAM") {
      f.tag = FactorTag::IAM;
      f.witness = node_parse(field(fj, "witness"), c.n, 0);
    } else if (tag == "ISL") {
      f.tag = FactorTag::ISL;
      f.u = field(fj, "u").get<int>();
      f.inverse = ia_parse(field(fj, "inverse"), c.n);
    } else {
      throw CertificateFormatError("unknown factor tag '" + tag + "'");
    }
    c.factors.push_back(std::move(f));
  }
  return c;
}

}  // namespace

std::string witness_to_text(const PowerWitness& w) { return witness_json(w).dump(); }

PowerWitness witness_from_text(const std::string& text, int n) {
  return node_parse(parse_json(text), n, 0);
}

std::string matrix_to_text(const Matrix& m) { return matrix_json(m).dump(); }

Matrix matrix_from_text(const std::string& text, int n) { return matrix_parse(parse_json(text), n); }

std::string certificate_to_text(const DecompositionCertificate& c) {
  json doc = certificate_body(c);
  doc["checksum"] = fnv1a(doc.dump());
  return doc.dump(1);
}

DecompositionCertificate certificate_from_text(const std::string& text) {
  try {
    return certificate_from_json(parse_json(text));
  } catch (const json::exception& e) {
    throw CertificateFormatError(std::string("malformed certificate: ") + e.what());
  }
}

FileCheckResult check_certificate_text(const std::string& text) {
  FileCheckResult res;
  try {
    json doc = parse_json(text);
    DecompositionCertificate c = certificate_from_json(doc);
    CheckOutcome out = check_certificate(c);
    if (!out.ok) {
      res.factor_index = out.factor_index;
      res.message = out.message;
      return res;
    }
    const json& factors = doc.at("factors");
    for (std::size_t i = 0; i < c.factors.size(); ++i) {
      if (c.factors[i].tag != FactorTag::ISL) continue;
      std::string e = check_isl_evidence(field(factors[i], "evidence"), c.factors[i].matrix,
                                         c.factors[i].u, c.m);
      if (!e.empty()) {
        res.factor_index = static_cast<int>(i);
        res.message = "ISL evidence: " + e;
        return res;
      }
    }
    json body = doc;
    body.erase("checksum");
    if (!doc.contains("checksum") || !doc["checksum"].is_string() ||
        doc["checksum"].get<std::string>() != fnv1a(body.dump())) {
      res.message = "checksum mismatch";
      return res;
    }
    res.ok = true;
  } catch (const CertificateFormatError& e) {
    res.format_error = true;
    res.message = e.what();
  } catch (const json::exception& e) {
    res.format_error = true;
    res.message = std::string("malformed certificate: ") + e.what();
  } catch (const ParseError& e) {
    res.format_error = true;
    res.message = std::string("bad polynomial: ") + e.what();
  }
  return res;
}

}  // namespace metab
