#pragma once

// Certified elementary elements of the subgroup generated by m-th powers of
// IA automorphisms. Every constructor returns the matrix together with a
// witness and replays the witness before returning; a mismatch is a
// std::logic_error, never a silent fallback.
//
// Notation: K_ij = sigma_i e_j - sigma_j e_i, a row vector in R_n^n.

#include <vector>

#include "metab/ia_matrix.hpp"
#include "metab/witness.hpp"

namespace metab {

struct RowSpec {
  int u = 0;
  std::vector<LaurentPoly> a;  // a[v-1] is the entry in column v
};

IAMatrix row_elem(const RowSpec& spec);

/// Row u = m f K_ij; witness POW(row u = f K_ij, m).
Certified type1_basic(int n, int u, int i, int j, const LaurentPoly& f, int m);
/// Row u = sigma_k mu_{k,m} f K_ij.
Certified type1_comm_k(int n, int u, int i, int j, int k, const LaurentPoly& f, int m);
/// Row u = sigma_k mu_{i,m} f K_ij; k = i is handed to type1_comm_k.
Certified type1_comm_ik(int n, int u, int i, int j, int k, const LaurentPoly& f, int m);
/// Row u = sigma_u^2 mu_{u,m} f K_ij.
Certified type2_sq(int n, int u, int i, int j, const LaurentPoly& f, int m);
/// Row u = sigma_u sigma_j mu_{i,m} f K_ij.
Certified type2_mixed(int n, int u, int i, int j, const LaurentPoly& f, int m);
/// The 2x2 block on rows/columns u < v:
///   1 + s_u s_v f    -s_u^2 f
///   s_v^2 f          1 - s_u s_v f
/// for f in H_{n,m}.
Certified type2_block(int n, int u, int v, const LaurentPoly& f, int m);

/// The matrix the block constructor produces, computed directly.
IAMatrix block_matrix(int n, int u, int v, const LaurentPoly& f);

/// One member of the vector family used to clear a row:
///   CommK:  sigma_k mu_{k,m} K_ij
///   CommIK: sigma_k mu_{i,m} K_ij
///   Basic:  m K_ij
enum class FamilyKind { CommK, CommIK, Basic };

struct FamilyTerm {
  FamilyKind kind;
  int i = 0, j = 0, k = 0;
  LaurentPoly coeff;
};

struct RowCombination {
  std::vector<FamilyTerm> terms;
  /// Sum of coeff * (family vector), as a length-n vector.
  std::vector<LaurentPoly> expand(int n, int m) const;
};

/// The family vector of a term, without its coefficient.
std::vector<LaurentPoly> family_vector(int n, int m, const FamilyTerm& t);

/// Writes b = (b_1, ..., b_{u-1}, 0, ..., 0), where b lives in the variables
/// x_1..x_{u-1} and sum sigma_v b_v = 0, as a combination of the family with
/// indices i, j, k <= u-1. Throws std::domain_error if b is not a
/// combination.
RowCombination solve_row_relation(int n, int u, const std::vector<LaurentPoly>& b, int m);

/// The element with row u equal to sigma_u times the expansion of the
/// combination (all indices of the combination must differ from u).
Certified realize_row_combination(int n, int u, const RowCombination& c, int m);

}  // namespace metab
