#include "metab/generators.hpp"

#include "metab/ideal.hpp"

namespace metab {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_indices(int n, std::initializer_list<int> idx) {
  Ring ring(n);
  for (int i : idx) ring.check_index(i);
}

std::vector<LaurentPoly> scaled(std::vector<LaurentPoly> a, const LaurentPoly& c) {
  for (LaurentPoly& x : a) x = x * c;
  return a;
}

// The first index of 1..n outside the excluded set.
int free_index(int n, std::initializer_list<int> excluded) {
  for (int w = 1; w <= n; ++w) {
    bool used = false;
    for (int e : excluded) used = used || e == w;
    if (!used) return w;
  }
  throw std::invalid_argument("construction needs an index outside the ones in use (n >= 4)");
}

Certified replayed(IAMatrix expected, PowerWitness w, int m, const char* who) {
  auto rep = verify_witness_report(w, expected, m);
  if (!rep.ok) throw std::logic_error(std::string(who) + ": witness replay failed: " + rep.message);
  return {std::move(expected), std::move(w)};
}

}  // namespace

IAMatrix row_elem(const RowSpec& spec) { return row_elem(spec.u, spec.a); }

Certified type1_basic(int n, int u, int i, int j, const LaurentPoly& f, int m) {
  check_indices(n, {u, i, j});
  require(i != u && j != u && i != j, "type1_basic needs i, j != u and i != j");
  require(m >= 1, "modulus must be positive");
  if (f.is_zero()) return certified_identity(n);
  Ring ring(n);
  auto k = koszul_row(ring, i, j, f);
  IAMatrix matrix = row_elem(u, scaled(k, ring.constant(m)));
  return replayed(std::move(matrix), PowerWitness::pow(row_elem(u, k), m), m, "type1_basic");
}

Certified type1_comm_k(int n, int u, int i, int j, int k, const LaurentPoly& f, int m) {
  check_indices(n, {u, i, j, k});
  require(i != u && j != u && k != u && i != j, "type1_comm_k needs i, j, k != u and i != j");
  if (f.is_zero()) return certified_identity(n);
  Ring ring(n);
  IAMatrix left = row_elem(u, koszul_row(ring, i, j, -f));
  PowerWitness w = PowerWitness::commutator(PowerWitness::plain(left),
                                            PowerWitness::pow(dilation(n, u, k), m));
  IAMatrix matrix = row_elem(u, koszul_row(ring, i, j, ring.sigma(k) * ring.mu(k, m) * f));
  return replayed(std::move(matrix), std::move(w), m, "type1_comm_k");
}

Certified type1_comm_ik(int n, int u, int i, int j, int k, const LaurentPoly& f, int m) {
  check_indices(n, {u, i, j, k});
  require(i != u && j != u && k != u && i != j && k != j,
          "type1_comm_ik needs i, j, k != u, i != j and k != j");
  if (k == i) return type1_comm_k(n, u, i, j, i, f, m);
  if (f.is_zero()) return certified_identity(n);
  Ring ring(n);
  IAMatrix left = row_elem(u, koszul_row(ring, k, j, f));
  PowerWitness w = PowerWitness::commutator(
      PowerWitness::inverse(PowerWitness::pow(dilation(n, j, i), m)), PowerWitness::plain(left));
  IAMatrix matrix = row_elem(u, koszul_row(ring, i, j, ring.sigma(k) * ring.mu(i, m) * f));
  return replayed(std::move(matrix), std::move(w), m, "type1_comm_ik");
}

Certified type2_sq(int n, int u, int i, int j, const LaurentPoly& f, int m) {
  require(n >= 4, "type2_sq needs n >= 4");
  check_indices(n, {u, i, j});
  require(i != u && j != u && i != j, "type2_sq needs i, j != u and i != j");
  if (f.is_zero()) return certified_identity(n);
  Ring ring(n);
  int w = free_index(n, {u, i, j});
  Certified inner = type1_comm_k(n, w, j, i, u, f, m);
  PowerWitness wit = PowerWitness::commutator(PowerWitness::plain(dilation(n, u, w)), inner.witness);
  LaurentPoly s = ring.sigma(u);
  IAMatrix matrix = row_elem(u, koszul_row(ring, i, j, s * s * ring.mu(u, m) * f));
  return replayed(std::move(matrix), std::move(wit), m, "type2_sq");
}

Certified type2_mixed(int n, int u, int i, int j, const LaurentPoly& f, int m) {
  require(n >= 4, "type2_mixed needs n >= 4");
  check_indices(n, {u, i, j});
  require(i != u && j != u && i != j, "type2_mixed needs i, j != u and i != j");
  if (f.is_zero()) return certified_identity(n);
  Ring ring(n);
  int w = free_index(n, {u, i, j});
  Certified inner = type1_comm_ik(n, w, i, j, u, -f, m);
  IAMatrix unipotent = row_elem(u, koszul_row(ring, w, j, ring.one()));
  PowerWitness wit = PowerWitness::commutator(PowerWitness::plain(unipotent), inner.witness);
  IAMatrix matrix = row_elem(
      u, koszul_row(ring, i, j, ring.sigma(u) * ring.sigma(j) * ring.mu(i, m) * f));
  return replayed(std::move(matrix), std::move(wit), m, "type2_mixed");
}

IAMatrix block_matrix(int n, int u, int v, const LaurentPoly& f) {
  Ring ring(n);
  ring.check_index(u);
  ring.check_index(v);
  require(u != v, "block needs two distinct indices");
  LaurentPoly su = ring.sigma(u), sv = ring.sigma(v);
  Matrix mat = Matrix::identity(n);
  mat(u, u) += su * sv * f;
  mat(u, v) -= su * su * f;
  mat(v, u) += sv * sv * f;
  mat(v, v) -= su * sv * f;
  return IAMatrix::trusted(std::move(mat));
}

namespace {

// Block for a single summand p = c * gen of f, where gen is m or
// sigma_r mu_{r,m}. E(q) is the row-w element with row q K_uv, witnessed by
// the type-1 constructor matching the summand; D = Dil(u,w) Dil(v,w).
//   block(p) = [E(p), D^-1] * E(sigma_w p)
Certified block_part(int n, int u, int v, int r, const LaurentPoly& c, int m) {
  Ring ring(n);
  int w = r ? free_index(n, {u, v, r}) : free_index(n, {u, v});
  auto witnessed_row = [&](const LaurentPoly& coeff) {
    return r ? type1_comm_k(n, w, u, v, r, coeff, m) : type1_basic(n, w, u, v, coeff, m);
  };
  Certified e = witnessed_row(c);
  Certified e_shift = witnessed_row(ring.sigma(w) * c);
  IAMatrix d_inv = mat_inv(dilation(n, u, w) * dilation(n, v, w));
  PowerWitness wit = PowerWitness::product(
      {PowerWitness::commutator(e.witness, PowerWitness::plain(d_inv)), e_shift.witness});
  LaurentPoly p = r ? ring.sigma(r) * ring.mu(r, m) * c : c * Integer(m);
  return replayed(block_matrix(n, u, v, p), std::move(wit), m, "type2_block");
}

}  // namespace

Certified type2_block(int n, int u, int v, const LaurentPoly& f, int m) {
  require(n >= 4, "type2_block needs n >= 4");
  check_indices(n, {u, v});
  require(u < v, "type2_block needs u < v");
  auto cert = decompose_H(f, m);
  if (!cert) throw std::invalid_argument("type2_block: f is not in H_{n,m}");
  if (f.is_zero()) return certified_identity(n);
  Ring ring(n);
  std::vector<Certified> parts;
  for (int r = 1; r <= n; ++r) {
    LaurentPoly c = cert->cofactor_of(ring.x(r, m) - ring.one());
    if (!c.is_zero()) parts.push_back(block_part(n, u, v, r, c, m));
  }
  LaurentPoly c0 = cert->cofactor_of(ring.constant(m));
  if (!c0.is_zero()) parts.push_back(block_part(n, u, v, 0, c0, m));
  Certified total = certified_product(parts, n);
  return replayed(block_matrix(n, u, v, f), total.witness, m, "type2_block");
}

std::vector<LaurentPoly> family_vector(int n, int m, const FamilyTerm& t) {
  Ring ring(n);
  switch (t.kind) {
    case FamilyKind::CommK:
      return koszul_row(ring, t.i, t.j, ring.sigma(t.k) * ring.mu(t.k, m));
    case FamilyKind::CommIK:
      return koszul_row(ring, t.i, t.j, ring.sigma(t.k) * ring.mu(t.i, m));
    case FamilyKind::Basic:
      return koszul_row(ring, t.i, t.j, ring.constant(m));
  }
  throw std::invalid_argument("unknown family kind");
}

std::vector<LaurentPoly> RowCombination::expand(int n, int m) const {
  std::vector<LaurentPoly> out(n, LaurentPoly(n));
  for (const FamilyTerm& t : terms) {
    auto v = family_vector(n, m, t);
    for (int c = 0; c < n; ++c) out[c] += v[c] * t.coeff;
  }
  return out;
}

Certified realize_row_combination(int n, int u, const RowCombination& c, int m) {
  Ring ring(n);
  LaurentPoly su = ring.sigma(u);
  std::vector<Certified> parts;
  for (const FamilyTerm& t : c.terms) {
    if (t.coeff.is_zero()) continue;
    switch (t.kind) {
      case FamilyKind::Basic:
        parts.push_back(type1_basic(n, u, t.i, t.j, su * t.coeff, m));
        break;
      case FamilyKind::CommK:
        parts.push_back(type1_comm_k(n, u, t.i, t.j, t.k, su * t.coeff, m));
        break;
      case FamilyKind::CommIK:
        if (t.k == t.j)
          parts.push_back(type2_mixed(n, u, t.i, t.j, t.coeff, m));
        else
          parts.push_back(type1_comm_ik(n, u, t.i, t.j, t.k, su * t.coeff, m));
        break;
    }
  }
  Certified total = certified_product(parts, n);
  auto row = c.expand(n, m);
  for (LaurentPoly& x : row) x = x * su;
  return replayed(row_elem(u, row), total.witness, m, "row combination");
}

}  // namespace metab
