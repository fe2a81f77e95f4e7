#pragma once

#include "kemeny/markov_core.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace kemeny {

/// One cell of a partial matrix: either a specified probability or free.
/// Specified(0) and Free are different things.
class Cell {
 public:
  static Cell free() { return Cell{}; }
  static Cell specified(double v) { return Cell{v}; }

  bool is_free() const noexcept { return !value_; }
  double value() const { return *value_; }

  friend bool operator==(const Cell&, const Cell&) = default;

 private:
  Cell() = default;
  explicit Cell(double v) : value_(v) {}
  std::optional<double> value_;
};

using CellGrid = std::vector<std::vector<Cell>>;

inline constexpr double kPartialRowTol = 1e-12;

class PartialStochasticMatrix {
 public:
  /// Accepts the grid iff it is square, specified values are nonnegative,
  /// every row's specified mass is at most 1 (exactly 1 iff the row is
  /// fully specified) and every open row keeps at least two free cells.
  static PartialStochasticMatrix validate(CellGrid grid);

  int size() const noexcept { return static_cast<int>(cells_.size()); }
  const Cell& cell(int i, int j) const { return cells_[i][j]; }
  bool is_free(int i, int j) const { return cells_[i][j].is_free(); }
  const CellGrid& cells() const noexcept { return cells_; }

  bool row_fully_specified(int i) const { return free_cols_[i].empty(); }
  const std::vector<int>& free_columns(int i) const { return free_cols_[i]; }
  /// 1 - (compensated sum of the specified entries); 0 for full rows.
  double residual(int i) const { return residual_[i]; }
  int free_count() const;

 private:
  explicit PartialStochasticMatrix(CellGrid grid);
  CellGrid cells_;
  std::vector<std::vector<int>> free_cols_;
  std::vector<double> residual_;
};

PartialStochasticMatrix validate_partial(CellGrid grid);

/// Whether some completion has a single essential class: condensation of the
/// digraph whose arcs are free cells and positive specified cells must have
/// exactly one sink.
bool feasible_single_class(const PartialStochasticMatrix& P);

inline constexpr int kSubsetCheckMaxN = 12;

/// Literal check over all non-empty proper subsets X: one of P[X,X^c],
/// P[X^c,X] must hold a positive or free entry. Necessary for
/// feasible_single_class but weaker: it only rules out a split into pieces
/// with no arcs between them, not two closed classes fed by a third.
bool feasible_subset_check(const PartialStochasticMatrix& P);

/// First violating subset X (ascending bitmask order, 0-based indices), if any.
std::optional<std::vector<int>> violating_subset(const PartialStochasticMatrix& P);

/// When infeasible: a closed set X (no positive or free entry in P[X,X^c])
/// whose complement also contains a closed set. The sink of the condensation
/// with the smallest vertex, 0-based.
std::optional<std::vector<int>> closed_subset(const PartialStochasticMatrix& P);

using Assignment = std::map<std::pair<int, int>, double>;

StochasticMatrix apply_completion(const PartialStochasticMatrix& P, const Assignment& values,
                                  double tol = kValidationTol);

/// For each open row (ascending), the free column that receives the row's
/// residual mass.
struct SparsePattern {
  std::vector<int> rows;
  std::vector<int> columns;

  friend bool operator==(const SparsePattern&, const SparsePattern&) = default;
};

/// Indexable view of all sparse patterns in row-major lexicographic order
/// (the first open row varies slowest). Any sub-range [begin, end) can be
/// decoded independently, which is what the parallel oracle relies on.
class SparsePatternSpace {
 public:
  explicit SparsePatternSpace(const PartialStochasticMatrix& P);

  /// Product of free-cell counts over open rows; saturates at UINT64_MAX.
  std::uint64_t count() const noexcept { return count_; }
  SparsePattern pattern_at(std::uint64_t index) const;
  /// Overwrites `out` with the completion for `pattern`; out must be n x n.
  void fill(const SparsePattern& pattern, Matrix& out) const;
  StochasticMatrix completion(const SparsePattern& pattern) const;

  const PartialStochasticMatrix& partial() const noexcept { return *P_; }

 private:
  const PartialStochasticMatrix* P_;
  std::vector<int> open_rows_;
  std::uint64_t count_ = 1;
  Matrix base_;  // specified values, zeros elsewhere
};

/// Visits every (pattern, completion) pair in lexicographic order; stops
/// early when the callback returns false.
void enumerate_sparse_patterns(const PartialStochasticMatrix& P,
                               const std::function<bool(const SparsePattern&, const StochasticMatrix&)>& visit);

}  // namespace kemeny
