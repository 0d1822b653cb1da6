#include "metab/decompose.hpp"

#include "metab/row_relation.hpp"

namespace metab {

namespace {

std::string entry_name(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

LaurentPoly divide_or_fail(const LaurentPoly& f, int i, int stage, const std::string& what) {
  SigmaDivision d = divide_by_sigma(f, i);
  if (!d.remainder.is_zero())
    throw StageError(stage, what + " is not divisible by sigma_" + std::to_string(i));
  return d.quotient;
}

// Entry (u,v) of bar(alpha) - I.
LaurentPoly bar_entry(const IAMatrix& alpha, int u, int v) {
  LaurentPoly e = substitute_ones(alpha.a(u, v), IndexSet::range(u + 1, alpha.n()));
  return e;
}

PowerWitness dilation_power_witness(const IAMatrix& base, long k, int m2) {
  // base^(k m2), written with a positive exponent leaf
  if (k == 0) return PowerWitness();
  PowerWitness leaf = PowerWitness::pow(base, std::labs(k) * m2);
  return k > 0 ? leaf : PowerWitness::inverse(leaf);
}

void apply_right(StageState& s, Certified x) {
  s.current = s.current * x.matrix;
#ifdef METAB_CHECK_INVARIANTS
  if (!fixes_sigma(s.current.matrix()))
    throw StageError(s.u, "right multiplication broke A sigma = 0");
#endif
  s.right.push_back(std::move(x));
}

// Every off-diagonal entry of row u of bar(alpha) lies in sigma_u^2 H; the
// columns checked are those with v < u, or all v != u.
void check_row_reduced(const StageState& s, int m, bool all_columns) {
  const int n = s.current.n(), u = s.u;
  for (int v = 1; v <= n; ++v) {
    if (v == u || (!all_columns && v > u)) continue;
    LaurentPoly e = bar_entry(s.current, u, v);
    LaurentPoly q = divide_or_fail(divide_or_fail(e, u, u, "entry " + entry_name(u, v)), u, u,
                                   "entry " + entry_name(u, v) + " / sigma_u");
    if (!in_H(q, m)) throw StageError(u, "entry " + entry_name(u, v) + " is not in sigma_u^2 H");
  }
}

// Row element sigma_u sum_i f_i (sigma_i e_v - sigma_v e_i) with its witness.
Certified tail_clearing_element(int n, int u, int v, const std::vector<LaurentPoly>& f, int m) {
  Ring ring(n);
  std::vector<Certified> parts;
  for (int i = 1; i <= static_cast<int>(f.size()); ++i) {
    if (f[i - 1].is_zero()) continue;
    auto cert = decompose_H(f[i - 1], m);
    if (!cert) throw StageError(u, "split component is not in H");
    for (int r = 1; r <= n; ++r) {
      LaurentPoly c = cert->cofactor_of(ring.x(r, m) - ring.one());
      if (!c.is_zero()) parts.push_back(type1_comm_k(n, u, i, v, r, ring.sigma(u) * c, m));
    }
    LaurentPoly c0 = cert->cofactor_of(ring.constant(m));
    if (!c0.is_zero()) parts.push_back(type1_basic(n, u, i, v, ring.sigma(u) * c0, m));
  }
  return certified_product(parts, n);
}

}  // namespace

Matrix stage_bar(const Matrix& a, int u) { return substitute_ones(a, IndexSet::range(u + 1, a.n())); }

EntryJReport check_entry_J(const IAMatrix& alpha, int m) {
  EntryJReport rep;
  const int n = alpha.n();
  Ring ring(n);
  if (!check_ia(alpha)) {
    rep.diagnostics.push_back("matrix is not an IA matrix");
    return rep;
  }
  const int m2 = m * m;
  bool ok = true;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      LaurentPoly a = alpha.a(i, j);
      if (a.is_zero()) continue;
      if (!in_H(a, m2)) {
        rep.diagnostics.push_back("entry " + entry_name(i, j) + " is not in H_{m^2}");
        ok = false;
        continue;
      }
      auto cert = rewrite_into_J(ring, a, m);
      if (!cert || !cert->valid(ring) || !(cert->ideal == IdealExpr::J(n, m))) {
        rep.diagnostics.push_back("entry " + entry_name(i, j) + " does not rewrite into J_m");
        ok = false;
        continue;
      }
      rep.rewrites.push_back(std::move(*cert));
    }
  DetMonomial det = det_monomial(alpha);
  for (int r = 1; r <= n; ++r)
    if (det.s[r] % m2 != 0) {
      rep.diagnostics.push_back("determinant exponent of x" + std::to_string(r) +
                                " is not divisible by m^2");
      ok = false;
    }
  rep.ok = ok;
  return rep;
}

Certified reduce_row_left(StageState& s, int m) {
  const int n = s.current.n(), u = s.u;
  Ring ring(n);
  std::vector<LaurentPoly> bb(n, ring.zero());
  for (int v = 1; v < u; ++v) {
    LaurentPoly b = divide_or_fail(bar_entry(s.current, u, v), u, u, "entry " + entry_name(u, v));
    bb[v - 1] = substitute_ones(b, IndexSet{u});
  }
  RowCombination combo;
  try {
    combo = solve_row_relation(n, u, bb, m);
  } catch (const std::domain_error& e) {
    throw StageError(u, std::string("left columns: ") + e.what());
  }
  Certified delta = realize_row_combination(n, u, combo, m);
  if (!delta.matrix.is_identity()) apply_right(s, certified_inverse(delta));
  check_row_reduced(s, m, false);
  return delta;
}

Certified reduce_row_right(StageState& s, int m) {
  const int n = s.current.n(), u = s.u, m2 = m * m;
  Ring ring(n);
  std::vector<Certified> applied;
  for (int v = u + 1; v <= n; ++v) {
    const std::string where = "entry " + entry_name(u, v);
    LaurentPoly t = divide_or_fail(bar_entry(s.current, u, v), u, u, where);
    Integer aug = augmentation(t);
    if (aug % m2 != 0) throw StageError(u, where + ": integer part is not a multiple of m^2");
    long k = Integer(aug / m2).get_si();
    if (k != 0) {
      IAMatrix base = dilation(n, u, v);
      Certified x{power(base, k * m2), dilation_power_witness(base, k, m2)};
      apply_right(s, x);
      applied.push_back(std::move(x));
      t = divide_or_fail(bar_entry(s.current, u, v), u, u, where);
    }
    SigmaDivision split = divide_by_sigma(t, u);
    if (!in_H(split.quotient, m)) throw StageError(u, where + ": sigma_u part is not in H");
    std::vector<LaurentPoly> f;
    try {
      f = split_over_H(n, u - 1, split.remainder, m);
    } catch (const std::domain_error& e) {
      throw StageError(u, where + ": " + e.what());
    }
    Certified delta_v = tail_clearing_element(n, u, v, f, m);
    if (!delta_v.matrix.is_identity()) {
      Certified x = certified_inverse(delta_v);
      apply_right(s, x);
      applied.push_back(std::move(x));
    }
  }
  check_row_reduced(s, m, true);
  return certified_inverse(certified_product(applied, n));
}

FinishResult finish_row(StageState& s, int m) {
  const int n = s.current.n(), u = s.u, m2 = m * m;
  Ring ring(n);
  std::vector<Certified> parts;
  for (int v = 1; v <= n; ++v) {
    if (v == u) continue;
    const std::string where = "entry " + entry_name(u, v);
    LaurentPoly b = divide_or_fail(divide_or_fail(bar_entry(s.current, u, v), u, u, where), u, u,
                                   where + " / sigma_u");
    if (b.is_zero()) continue;
    auto cert = decompose_H(b, m);
    if (!cert) throw StageError(u, where + " / sigma_u^2 is not in H");

    std::vector<Certified> delta_v;
    delta_v.push_back(u < v ? type2_block(n, u, v, b, m) : type2_block(n, v, u, -b, m));
    for (int k = 1; k <= n; ++k) {
      if (k == u || k == v) continue;
      LaurentPoly sk = ring.sigma(k);
      for (int r = 1; r <= n; ++r) {
        LaurentPoly c = cert->cofactor_of(ring.x(r, m) - ring.one());
        if (c.is_zero()) continue;
        delta_v.push_back(r == k ? type2_sq(n, k, v, u, c, m)
                                 : type1_comm_k(n, k, v, u, r, sk * c, m));
      }
      LaurentPoly c0 = cert->cofactor_of(ring.constant(m));
      if (!c0.is_zero()) delta_v.push_back(type1_basic(n, k, v, u, sk * c0, m));
    }
    Certified dv = certified_product(delta_v, n);

    Matrix expected = Matrix::identity(n);
    for (int k = 1; k <= n; ++k) {
      expected(k, u) += ring.sigma(k) * b * ring.sigma(v);
      expected(k, v) -= ring.sigma(k) * b * ring.sigma(u);
    }
    if (!(dv.matrix.matrix() == expected))
      throw StageError(u, "clearing element for column " + std::to_string(v) +
                              " does not have the expected rank-one shape");
    parts.push_back(std::move(dv));
  }

  StageState probe = s;
  for (const Certified& p : parts) probe.current = probe.current * p.matrix;
  Matrix barred = stage_bar(probe.current.matrix(), u);
  DetMonomial det;
  try {
    det = unit_det_monomial(barred);
  } catch (const NotInvertible& e) {
    throw StageError(u, std::string("projected determinant: ") + e.what());
  }
  for (int r = 1; r <= n; ++r)
    if (r != u && det.s[r] != 0)
      throw StageError(u, "projected determinant involves x" + std::to_string(r));
  if (det.s[u] % m2 != 0) throw StageError(u, "projected determinant exponent is not a multiple of m^2");
  long su = det.s[u] / m2;
  if (su != 0) {
    int i0 = u == 1 ? 2 : 1;
    IAMatrix zeta = dilation(n, i0, u);
    parts.push_back({power(zeta, -su * m2), dilation_power_witness(zeta, -su, m2)});
  }
  Certified beta = certified_product(parts, n);
  for (Certified& p : parts) apply_right(s, std::move(p));

  // gamma^-1 = I + G built from the residual entries d_ij = c_ij / sigma_u
  Matrix c = stage_bar(s.current.matrix(), u) - Matrix::identity(n);
  for (int v = 1; v <= n; ++v)
    if (!c(u, v).is_zero()) throw StageError(u, "row u is not cleared after the column step");
  Matrix g(n);
  for (int i = 1; i <= n; ++i) {
    if (i == u) continue;
    for (int j = 1; j <= n; ++j) {
      if (j == u) continue;
      LaurentPoly d = divide_or_fail(c(i, j), u, u, "residual entry " + entry_name(i, j));
      g(i, j) = ring.sigma(u) * d;
      g(i, u) -= ring.sigma(j) * d;
    }
  }
  if (!(stage_bar(g, u) == c)) throw StageError(u, "gamma^-1 does not project to the residual");
  IAMatrix gamma_inv;
  if (u == n) {
    // nothing is projected at the last stage, so gamma^-1 is the current
    // matrix and keeps its factorization for the inversion
    if (!(g == c)) throw StageError(u, "residual is not the current matrix");
    gamma_inv = s.current;
  } else {
    try {
      gamma_inv = IAMatrix::from_matrix(Matrix::identity(n) + g);
    } catch (const NotInvertible& e) {
      throw StageError(u, std::string("gamma^-1: ") + e.what());
    }
  }
  if (!in_ISL(gamma_inv, u, m)) throw StageError(u, "gamma^-1 is not in ISL(sigma_u H_m)");
  IAMatrix gamma = mat_inv(gamma_inv);
  s.current = u == n ? IAMatrix::identity(n) : gamma * s.current;
  if (!stage_bar(s.current.matrix(), u).is_identity())
    throw StageError(u, "projection of the stage result is not the identity");
  DetMonomial dnext = det_monomial(s.current);
  for (int r = 1; r <= n; ++r)
    if (dnext.s[r] % m2 != 0) throw StageError(u, "determinant ledger broken after the stage");
  return {gamma, gamma_inv, beta};
}

IAMatrix DecompositionCertificate::product() const {
  IAMatrix r = IAMatrix::identity(n);
  for (const CertificateFactor& f : factors) r = r * f.matrix;
  return r;
}

DecompositionCertificate decompose(const IAMatrix& alpha, int m, DecomposeOptions opts) {
  const int n = alpha.n();
  if (n < 4)
    throw std::invalid_argument(
        "decomposition needs n >= 4; for n = 2, 3 the congruence subgroup behaves differently "
        "and the construction has no fourth index to work with");
  if (m < 1) throw std::invalid_argument("modulus must be positive");
  if (!check_ia(alpha)) throw std::invalid_argument("input is not an IA matrix");
  EntryJReport gate = check_entry_J(alpha, m);
  if (!gate.ok) {
    DetMonomial det = det_monomial(alpha);
    bool det_ok = true;
    for (int r = 1; r <= n; ++r) det_ok = det_ok && det.s[r] % (m * m) == 0;
    if (opts.require_IG || !det_ok) {
      std::string msg = "input fails the IG_{m^2} gate";
      for (const std::string& d : gate.diagnostics) msg += "; " + d;
      throw std::invalid_argument(msg);
    }
  }

  DecompositionCertificate cert;
  cert.n = n;
  cert.m = m;
  cert.input = alpha;
  cert.input_in_IG = gate.ok;

  StageState s;
  s.current = alpha;
  std::vector<Certified> stage_right;  // B_u for u = 1..n
  std::vector<FinishResult> finished;
  for (int u = 1; u <= n; ++u) {
    s.u = u;
    s.right.clear();
    reduce_row_left(s, m);
    reduce_row_right(s, m);
    finished.push_back(finish_row(s, m));
    stage_right.push_back(certified_product(s.right, n));
  }
  if (!s.current.is_identity()) throw StageError(n, "terminal matrix is not the identity");

  // Each stage is alpha_u = gamma_u alpha_{u-1} B_u and alpha_n = I, so
  // alpha = gamma_1^-1 ... gamma_n^-1 * B_n^-1 ... B_1^-1.
  for (int u = 1; u <= n; ++u) {
    const FinishResult& fin = finished[u - 1];
    if (fin.gamma_inv.is_identity()) continue;
    CertificateFactor f;
    f.tag = FactorTag::ISL;
    f.u = u;
    f.matrix = fin.gamma_inv;
    f.inverse = fin.gamma;
    cert.factors.push_back(std::move(f));
  }
  for (int u = n; u >= 1; --u) {
    const Certified& b = stage_right[u - 1];
    if (b.matrix.is_identity()) continue;
    CertificateFactor f;
    f.tag = FactorTag::IAM;
    f.matrix = mat_inv(b.matrix);
    f.witness = PowerWitness::inverse(b.witness);
    cert.factors.push_back(std::move(f));
  }
  CheckOutcome out = check_certificate(cert);
  if (!out.ok) throw std::logic_error("decomposition certificate does not verify: " + out.message);
  return cert;
}

CheckOutcome check_certificate(const DecompositionCertificate& c) {
  if (c.input.n() != c.n) return {false, -1, "input matrix size does not match n"};
  IAMatrix prod = IAMatrix::identity(c.n);
  for (std::size_t i = 0; i < c.factors.size(); ++i) {
    const CertificateFactor& f = c.factors[i];
    const int idx = static_cast<int>(i);
    if (f.matrix.n() != c.n) return {false, idx, "factor has the wrong size"};
    if (f.tag == FactorTag::IAM) {
      // a replayed witness over IA leaves makes the factor IA as well
      WitnessReport r = verify_witness_report(f.witness, f.matrix, c.m);
      if (!r.ok) return {false, idx, "witness: " + r.message};
    } else {
      if (f.u < 1 || f.u > c.n) return {false, idx, "ISL factor has an invalid row index"};
      if (f.inverse.n() != c.n || !(f.matrix.matrix() * f.inverse.matrix()).is_identity())
        return {false, idx, "recorded inverse does not invert the factor"};
      if (!in_ISL(f.matrix, f.u, c.m)) return {false, idx, "factor is not in ISL(sigma_u H_m)"};
    }
    prod = prod * f.matrix;
  }
  if (!(prod == c.input)) return {false, -1, "ordered product of the factors differs from the input"};
  return {true, -1, ""};
}

}  // namespace metab
