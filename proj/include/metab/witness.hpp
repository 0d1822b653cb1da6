#pragma once

// Expression trees certifying membership in the subgroup generated by m-th
// powers of IA automorphisms.


#include <memory>
#include <string>
#include <vector>

#include "metab/ia_matrix.hpp"

namespace metab {

enum class WitnessKind { Pow, Product, Inverse, Conjugate, Commutator, Plain };

std::string kind_name(WitnessKind k);

struct WitnessNode;
using WitnessPtr = std::shared_ptr<const WitnessNode>;

struct WitnessNode {
  WitnessKind kind;
  IAMatrix matrix;  // Pow: the base; Plain: the matrix itself
  long exponent = 0;
  // Product: factors left to right; Inverse: {x}; Conjugate: {of, by};
  // Commutator: {left, right}
  std::vector<WitnessPtr> children;

  // Filled on first evaluation, so shared subtrees are evaluated once.
  struct Memo {
    std::once_flag value_once;
    IAMatrix value;
    std::once_flag leaf_once;
    bool leaf_ok = false;
  };
  std::shared_ptr<Memo> memo = std::make_shared<Memo>();
};

class PowerWitness {
 public:
  PowerWitness() = default;  // empty product: the identity
  explicit PowerWitness(WitnessPtr root) : root_(std::move(root)) {}

  static PowerWitness pow(const IAMatrix& base, long k);
  static PowerWitness plain(const IAMatrix& m);
  static PowerWitness product(const std::vector<PowerWitness>& factors);
  static PowerWitness inverse(const PowerWitness& w);
  static PowerWitness conjugate(const PowerWitness& of, const PowerWitness& by);
  static PowerWitness commutator(const PowerWitness& left, const PowerWitness& right);

  const WitnessPtr& root() const { return root_; }
  bool is_trivial() const;
  std::size_t node_count() const;

 private:
  WitnessPtr root_;
};

/// Exact recursive evaluation; n is needed for the empty product.
IAMatrix eval_witness(const PowerWitness& w, int n);

struct WitnessReport {
  bool ok = false;
  std::string message;
};

/// Structural discipline: every Pow exponent is a positive multiple of m,
/// Plain only appears directly below Conjugate or Commutator, the conjugated
/// operand is witnessed, and every commutator has a witnessed side.
WitnessReport check_discipline(const PowerWitness& w, int m);
/// Discipline, IA validity of every stored matrix, and eval == expected.
WitnessReport verify_witness_report(const PowerWitness& w, const IAMatrix& expected, int m);
bool verify_witness(const PowerWitness& w, const IAMatrix& expected, int m);

/// A matrix together with a witness that evaluates to it.
struct Certified {
  IAMatrix matrix;
  PowerWitness witness;
};

Certified certified_identity(int n);
/// Product of certified elements, left to right; identity factors dropped.
Certified certified_product(const std::vector<Certified>& parts, int n);
Certified certified_inverse(const Certified& c);

}  // namespace metab
