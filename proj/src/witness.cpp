#include "metab/witness.hpp"

#include <functional>

namespace metab {

std::string kind_name(WitnessKind k) {
  switch (k) {
    case WitnessKind::Pow:
      return "POW";
    case WitnessKind::Product:
      return "PRODUCT";
    case WitnessKind::Inverse:
      return "INVERSE";
    case WitnessKind::Conjugate:
      return "CONJUGATE";
    case WitnessKind::Commutator:
      return "COMMUTATOR";
    case WitnessKind::Plain:
      return "PLAIN";
  }
  return "?";
}

namespace {

WitnessPtr make(WitnessKind kind, IAMatrix m, long k, std::vector<WitnessPtr> children) {
  auto node = std::make_shared<WitnessNode>();
  node->kind = kind;
  node->matrix = std::move(m);
  node->exponent = k;
  node->children = std::move(children);
  return node;
}

WitnessPtr root_or_empty(const PowerWitness& w) {
  if (w.root()) return w.root();
  return make(WitnessKind::Product, IAMatrix(), 0, {});
}

}  // namespace

PowerWitness PowerWitness::pow(const IAMatrix& base, long k) {
  return PowerWitness(make(WitnessKind::Pow, base, k, {}));
}

PowerWitness PowerWitness::plain(const IAMatrix& m) {
  return PowerWitness(make(WitnessKind::Plain, m, 0, {}));
}

PowerWitness PowerWitness::product(const std::vector<PowerWitness>& factors) {
  std::vector<WitnessPtr> kids;
  for (const PowerWitness& f : factors) {
    if (f.is_trivial()) continue;
    if (f.root_->kind == WitnessKind::Product) {
      kids.insert(kids.end(), f.root_->children.begin(), f.root_->children.end());
    } else {
      kids.push_back(f.root_);
    }
  }
  if (kids.empty()) return PowerWitness();
  if (kids.size() == 1) return PowerWitness(kids[0]);
  return PowerWitness(make(WitnessKind::Product, IAMatrix(), 0, std::move(kids)));
}

PowerWitness PowerWitness::inverse(const PowerWitness& w) {
  if (w.is_trivial()) return w;
  if (w.root_->kind == WitnessKind::Inverse) return PowerWitness(w.root_->children[0]);
  return PowerWitness(make(WitnessKind::Inverse, IAMatrix(), 0, {w.root_}));
}

PowerWitness PowerWitness::conjugate(const PowerWitness& of, const PowerWitness& by) {
  if (of.is_trivial()) return of;
  return PowerWitness(make(WitnessKind::Conjugate, IAMatrix(), 0, {of.root_, root_or_empty(by)}));
}

PowerWitness PowerWitness::commutator(const PowerWitness& left, const PowerWitness& right) {
  return PowerWitness(
      make(WitnessKind::Commutator, IAMatrix(), 0, {root_or_empty(left), root_or_empty(right)}));
}

bool PowerWitness::is_trivial() const {
  return !root_ || (root_->kind == WitnessKind::Product && root_->children.empty());
}

std::size_t PowerWitness::node_count() const {
  std::function<std::size_t(const WitnessPtr&)> count = [&](const WitnessPtr& p) -> std::size_t {
    if (!p) return 0;
    std::size_t c = 1;
    for (const WitnessPtr& ch : p->children) c += count(ch);
    return c;
  };
  return count(root_);
}

namespace {

IAMatrix eval_node(const WitnessPtr& p, int n);

IAMatrix eval_fresh(const WitnessPtr& p, int n) {
  switch (p->kind) {
    case WitnessKind::Pow:
      return power(p->matrix, p->exponent);
    case WitnessKind::Plain:
      return p->matrix;
    case WitnessKind::Product: {
      IAMatrix r = IAMatrix::identity(n);
      for (const WitnessPtr& c : p->children) r = r * eval_node(c, n);
      return r;
    }
    case WitnessKind::Inverse:
      if (p->children.size() != 1) throw std::invalid_argument("INVERSE needs one operand");
      return mat_inv(eval_node(p->children[0], n));
    case WitnessKind::Conjugate: {
      if (p->children.size() != 2) throw std::invalid_argument("CONJUGATE needs two operands");
      IAMatrix of = eval_node(p->children[0], n);
      IAMatrix by = eval_node(p->children[1], n);
      return by * of * mat_inv(by);
    }
    case WitnessKind::Commutator: {
      if (p->children.size() != 2) throw std::invalid_argument("COMMUTATOR needs two operands");
      return commutator(eval_node(p->children[0], n), eval_node(p->children[1], n));
    }
  }
  throw std::invalid_argument("malformed witness node");
}

IAMatrix eval_node(const WitnessPtr& p, int n) {
  std::call_once(p->memo->value_once, [&] { p->memo->value = eval_fresh(p, n); });
  return p->memo->value;
}

// Returns an empty string on success, otherwise the first violation.
std::string discipline(const WitnessPtr& p, int m, bool plain_allowed, int n) {
  switch (p->kind) {
    case WitnessKind::Pow:
      if (p->exponent <= 0 || p->exponent % m != 0)
        return "POW leaf with exponent " + std::to_string(p->exponent) +
               " is not a positive multiple of " + std::to_string(m);
      if (p->matrix.n() != n) return "POW base has the wrong size";
      return {};
    case WitnessKind::Plain:
      if (!plain_allowed) return "plain matrix outside a CONJUGATE or COMMUTATOR position";
      if (p->matrix.n() != n) return "plain matrix has the wrong size";
      return {};
    case WitnessKind::Product:
      for (const WitnessPtr& c : p->children)
        if (auto e = discipline(c, m, false, n); !e.empty()) return e;
      return {};
    case WitnessKind::Inverse:
      if (p->children.size() != 1) return "INVERSE needs one operand";
      return discipline(p->children[0], m, false, n);
    case WitnessKind::Conjugate:
      if (p->children.size() != 2) return "CONJUGATE needs two operands";
      if (auto e = discipline(p->children[0], m, false, n); !e.empty()) return e;
      return discipline(p->children[1], m, true, n);
    case WitnessKind::Commutator: {
      if (p->children.size() != 2) return "COMMUTATOR needs two operands";
      bool lp = p->children[0]->kind == WitnessKind::Plain;
      bool rp = p->children[1]->kind == WitnessKind::Plain;
      if (lp && rp) return "COMMUTATOR with two plain operands";
      if (auto e = discipline(p->children[0], m, true, n); !e.empty()) return e;
      return discipline(p->children[1], m, true, n);
    }
  }
  return "unknown node kind";
}

std::string stored_matrices_valid(const WitnessPtr& p) {
  if (p->kind == WitnessKind::Pow || p->kind == WitnessKind::Plain) {
    std::call_once(p->memo->leaf_once, [&] { p->memo->leaf_ok = check_ia(p->matrix); });
    if (!p->memo->leaf_ok) return kind_name(p->kind) + " matrix is not an IA matrix";
  }
  for (const WitnessPtr& c : p->children)
    if (auto e = stored_matrices_valid(c); !e.empty()) return e;
  return {};
}

}  // namespace

IAMatrix eval_witness(const PowerWitness& w, int n) {
  if (w.is_trivial()) return IAMatrix::identity(n);
  return eval_node(w.root(), n);
}

WitnessReport check_discipline(const PowerWitness& w, int m) {
  if (w.is_trivial()) return {true, ""};
  int n = 0;
  std::function<void(const WitnessPtr&)> find_n = [&](const WitnessPtr& p) {
    if (n) return;
    if (p->kind == WitnessKind::Pow || p->kind == WitnessKind::Plain) n = p->matrix.n();
    for (const WitnessPtr& c : p->children) find_n(c);
  };
  find_n(w.root());
  std::string e = discipline(w.root(), m, false, n);
  return {e.empty(), e};
}

WitnessReport verify_witness_report(const PowerWitness& w, const IAMatrix& expected, int m) {
  if (w.is_trivial()) {
    if (expected.is_identity()) return {true, ""};
    return {false, "empty witness for a non-identity matrix"};
  }
  std::string e = discipline(w.root(), m, false, expected.n());
  if (!e.empty()) return {false, e};
  e = stored_matrices_valid(w.root());
  if (!e.empty()) return {false, e};
  try {
    if (!(eval_witness(w, expected.n()) == expected))
      return {false, "witness evaluates to a different matrix"};
  } catch (const std::exception& ex) {
    return {false, std::string("witness evaluation failed: ") + ex.what()};
  }
  return {true, ""};
}

bool verify_witness(const PowerWitness& w, const IAMatrix& expected, int m) {
  return verify_witness_report(w, expected, m).ok;
}

Certified certified_identity(int n) { return {IAMatrix::identity(n), PowerWitness()}; }

Certified certified_product(const std::vector<Certified>& parts, int n) {
  Certified r = certified_identity(n);
  std::vector<PowerWitness> ws;
  for (const Certified& c : parts) {
    if (c.matrix.is_identity() && c.witness.is_trivial()) continue;
    r.matrix = r.matrix * c.matrix;
    ws.push_back(c.witness);
  }
  r.witness = PowerWitness::product(ws);
  return r;
}

Certified certified_inverse(const Certified& c) {
  return {mat_inv(c.matrix), PowerWitness::inverse(c.witness)};
}

}  // namespace metab
