#pragma once

// Exact linear algebra used by the membership oracles:
//  * IntegerLattice  - incremental echelon basis of a sublattice of Z^N
//  * ModSystem       - solving A x = b over Z/m for composite m

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "metab/laurent.hpp"

namespace metab {

/// Sparse integer vector, sorted by index, no zero entries.
using SparseVec = std::vector<std::pair<uint32_t, Integer>>;

/// y += a * x
void axpy(SparseVec& y, const Integer& a, const SparseVec& x);

class IntegerLattice {
 public:
  /// Adds a generator; generators are numbered 0, 1, ... in insertion order.
  void add(SparseVec v);
  std::size_t generator_count() const { return count_; }
  std::size_t rank() const { return pivots_.size(); }

  /// Integer combination of the generators equal to target, if one exists.
  std::optional<SparseVec> solve(SparseVec target) const;

 private:
  struct Row {
    SparseVec vec;   // leading entry positive
    SparseVec expr;  // in terms of generator ids
  };
  std::map<uint32_t, Row> pivots_;
  std::size_t count_ = 0;
};

/// Linear system over Z/m. Columns are added one at a time as dense vectors
/// of residues; solve() returns a combination of the columns hitting b.
class ModSystem {
 public:
  ModSystem(std::size_t rows, int64_t modulus);
  std::size_t add_column(const std::vector<int64_t>& col);
  std::size_t column_count() const { return ncols_; }
  std::optional<std::vector<int64_t>> solve(const std::vector<int64_t>& b) const;
  int64_t modulus() const { return m_; }

 private:
  struct Row {
    std::vector<int64_t> vec;
    std::vector<int64_t> expr;
  };
  void insert(Row r);
  int64_t md(int64_t a) const {
    int64_t r = a % m_;
    return r < 0 ? r + m_ : r;
  }

  std::size_t nrows_;
  int64_t m_;
  std::size_t ncols_ = 0;
  std::map<std::size_t, Row> pivots_;
};

}  // namespace metab
