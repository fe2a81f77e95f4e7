#include "kemeny/partial_matrix.hpp"

#include "kemeny/digraph.hpp"
#include "kemeny/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace kemeny {

namespace {

// Neumaier-compensated sum of the specified entries of one row.
double specified_sum(const std::vector<Cell>& row) {
  double sum = 0.0, carry = 0.0;
  for (const Cell& c : row) {
    if (c.is_free()) continue;
    const double v = c.value();
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + carry;
}

std::string row_label(int i) { return "row " + std::to_string(i); }

// Arc j->k iff the cell is free or specified positive.
Adjacency support_or_free(const PartialStochasticMatrix& P) {
  const int n = P.size();
  Adjacency adj(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (P.is_free(j, k) || P.cell(j, k).value() > 0.0) adj[j].push_back(k);
  return adj;
}

bool open_or_positive(const PartialStochasticMatrix& P, int j, int k) {
  return P.is_free(j, k) || P.cell(j, k).value() > 0.0;
}

}  // namespace

PartialStochasticMatrix::PartialStochasticMatrix(CellGrid grid) : cells_(std::move(grid)) {
  const int n = size();
  free_cols_.resize(n);
  residual_.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (cells_[i][j].is_free()) free_cols_[i].push_back(j);
    residual_[i] = free_cols_[i].empty() ? 0.0 : 1.0 - specified_sum(cells_[i]);
  }
}

int PartialStochasticMatrix::free_count() const {
  int total = 0;
  for (const auto& cols : free_cols_) total += static_cast<int>(cols.size());
  return total;
}

PartialStochasticMatrix PartialStochasticMatrix::validate(CellGrid grid) {
  const std::size_t n = grid.size();
  if (n == 0) throw Error(ErrorCode::NotSquare, "empty matrix");
  for (std::size_t i = 0; i < n; ++i)
    if (grid[i].size() != n)
      throw Error(ErrorCode::NotSquare, row_label(static_cast<int>(i)) + " has " + std::to_string(grid[i].size()) +
                                            " cells, expected " + std::to_string(n));

  for (std::size_t i = 0; i < n; ++i) {
    const auto label = row_label(static_cast<int>(i));
    int n_free = 0;
    for (const Cell& c : grid[i]) {
      if (c.is_free()) {
        ++n_free;
        continue;
      }
      if (!std::isfinite(c.value())) throw Error(ErrorCode::InvalidArgument, label + " has a non-finite entry");
      if (c.value() < 0.0) throw Error(ErrorCode::NegativeSpecified, label + " has a negative entry");
    }
    const double sum = specified_sum(grid[i]);
    if (sum > 1.0 + kPartialRowTol) throw Error(ErrorCode::RowSumExceedsOne, label + " sums to " + std::to_string(sum));
    if (n_free == 0) {
      if (std::abs(sum - 1.0) > kPartialRowTol)
        throw Error(ErrorCode::FullySpecifiedSumNotOne, label + " sums to " + std::to_string(sum));
      continue;
    }
    if (std::abs(sum - 1.0) <= kPartialRowTol)
      throw Error(ErrorCode::RowSumOneWithFreeCells, label + " already sums to 1 but has free cells");
    if (n_free == 1) throw Error(ErrorCode::SingleFreeCellInRow, label + " has exactly one free cell");
  }
  return PartialStochasticMatrix(std::move(grid));
}

PartialStochasticMatrix validate_partial(CellGrid grid) { return PartialStochasticMatrix::validate(std::move(grid)); }

bool feasible_single_class(const PartialStochasticMatrix& P) {
  return condense(support_or_free(P)).terminal.size() == 1;
}

std::optional<std::vector<int>> violating_subset(const PartialStochasticMatrix& P) {
  const int n = P.size();
  if (n > kSubsetCheckMaxN)
    throw Error(ErrorCode::DimensionTooLarge, "subset check is limited to n <= " + std::to_string(kSubsetCheckMaxN));
  const std::uint32_t full = (1u << n) - 1u;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    bool connected = false;
    for (int j = 0; j < n && !connected; ++j)
      for (int k = 0; k < n && !connected; ++k) {
        const bool j_in = (mask >> j) & 1u, k_in = (mask >> k) & 1u;
        if (j_in != k_in) connected = open_or_positive(P, j, k);
      }
    if (!connected) {
      std::vector<int> x;
      for (int j = 0; j < n; ++j)
        if ((mask >> j) & 1u) x.push_back(j);
      return x;
    }
  }
  return std::nullopt;
}

bool feasible_subset_check(const PartialStochasticMatrix& P) { return !violating_subset(P).has_value(); }

std::optional<std::vector<int>> closed_subset(const PartialStochasticMatrix& P) {
  const Condensation c = condense(support_or_free(P));
  if (c.terminal.size() == 1) return std::nullopt;
  const int first = *std::min_element(c.terminal.begin(), c.terminal.end());
  return c.components[first];
}

StochasticMatrix apply_completion(const PartialStochasticMatrix& P, const Assignment& values, double tol) {
  const int n = P.size();
  for (const auto& [pos, v] : values) {
    const auto [i, j] = pos;
    if (i < 0 || i >= n || j < 0 || j >= n || !P.is_free(i, j))
      throw Error(ErrorCode::InvalidArgument, "assignment to a cell that is not free");
    if (v < 0.0) throw Error(ErrorCode::NegativeAssignment, "negative value for a free cell");
  }
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!P.is_free(i, j)) {
        m(i, j) = P.cell(i, j).value();
        continue;
      }
      const auto it = values.find({i, j});
      if (it == values.end())
        throw Error(ErrorCode::MissingAssignment, "free cell (" + std::to_string(i) + "," + std::to_string(j) + ")");
      m(i, j) = it->second;
    }
  return validate_stochastic(m, tol);
}

SparsePatternSpace::SparsePatternSpace(const PartialStochasticMatrix& P) : P_(&P) {
  const int n = P.size();
  base_ = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (!P.is_free(i, j)) base_(i, j) = P.cell(i, j).value();
    if (!P.row_fully_specified(i)) open_rows_.push_back(i);
  }
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
  for (int i : open_rows_) {
    const auto f = static_cast<std::uint64_t>(P.free_columns(i).size());
    count_ = count_ > cap / f ? cap : count_ * f;
  }
}

SparsePattern SparsePatternSpace::pattern_at(std::uint64_t index) const {
  SparsePattern p;
  p.rows = open_rows_;
  p.columns.resize(open_rows_.size());
  for (std::size_t r = open_rows_.size(); r-- > 0;) {
    const auto& cols = P_->free_columns(open_rows_[r]);
    p.columns[r] = cols[index % cols.size()];
    index /= cols.size();
  }
  return p;
}

void SparsePatternSpace::fill(const SparsePattern& pattern, Matrix& out) const {
  out = base_;
  for (std::size_t r = 0; r < pattern.rows.size(); ++r)
    out(pattern.rows[r], pattern.columns[r]) = P_->residual(pattern.rows[r]);
}

StochasticMatrix SparsePatternSpace::completion(const SparsePattern& pattern) const {
  Matrix m;
  fill(pattern, m);
  return validate_stochastic(m);
}

void enumerate_sparse_patterns(const PartialStochasticMatrix& P,
                               const std::function<bool(const SparsePattern&, const StochasticMatrix&)>& visit) {
  const SparsePatternSpace space(P);
  for (std::uint64_t idx = 0; idx < space.count(); ++idx) {
    const SparsePattern p = space.pattern_at(idx);
    if (!visit(p, space.completion(p))) return;
  }
}

}  // namespace kemeny
