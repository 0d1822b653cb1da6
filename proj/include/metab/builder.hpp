#pragma once

// A small expression language for IA matrices:
//
//   elem(i,j)            I + sigma_j E_ii - sigma_i E_ij
//   row(u, a1, ..., an)  I with row u replaced by e_u + a
//   koszul(u,i,j,f)      row u = f (sigma_i e_j - sigma_j e_i)
//   pow(X, k)  inv(X)  comm(X, Y)  conj(X, Y) = Y X Y^-1
//   X * Y, parentheses, and id for the identity.

#include <string_view>

#include "metab/ia_matrix.hpp"

namespace metab {

IAMatrix build_matrix(std::string_view text, int n);

}  // namespace metab
