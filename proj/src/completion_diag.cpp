#include "kemeny/completion_diag.hpp"

#include "kemeny/error.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace kemeny {

namespace {

constexpr double kWitnessTol = 1e-9;
constexpr double kEntryTol = 1e-12;

void check_entries(std::span<const double> d) {
  for (double v : d)
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw Error(ErrorCode::InvalidArgument, "diagonal entries must lie in [0,1]");
}

void check_below_one(std::span<const double> d) {
  for (double v : d)
    if (v >= 1.0 - kDiagonalOneGuard)
      throw Error(ErrorCode::DiagonalAtOne, "diagonal entry " + std::to_string(v) + " is (numerically) 1");
}

void verify_witness(const CompletionSolution& s) {
  const double k = kemeny_trace(s.witness);
  if (!(std::abs(k - s.value) <= kWitnessTol * std::max(1.0, std::abs(s.value))))
    throw Error(ErrorCode::NumericalBreakdown,
                "witness evaluates to " + std::to_string(k) + ", closed form gives " + std::to_string(s.value));
}

std::string cycle_text(int n) {
  std::string s;
  for (int j = 0; j < n; ++j) s += std::to_string(j + 1) + "->";
  return s + "1";
}

}  // namespace

double diag_cycle_kemeny(std::span<const double> d) {
  if (d.size() < 2) throw Error(ErrorCode::DimensionTooSmall, "need n >= 2");
  check_entries(d);
  check_below_one(d);
  double s = 0.0, s2 = 0.0;
  for (double v : d) {
    const double x = 1.0 / (1.0 - v);
    s += x;
    s2 += x * x;
  }
  return (s * s - s2) / (2.0 * s);
}

StochasticMatrix diagonal_cycle_matrix(std::span<const double> d) {
  const int n = static_cast<int>(d.size());
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "need n >= 2");
  Matrix t = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    t(j, j) = d[j];
    t(j, (j + 1) % n) = 1.0 - d[j];
  }
  return validate_stochastic(t);
}

CompletionSolution solve_diagonal(std::span<const double> d) {
  const int n = static_cast<int>(d.size());
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "need n >= 2");
  check_entries(d);

  std::vector<int> ones;
  std::vector<double> rest;
  for (int j = 0; j < n; ++j) {
    if (d[j] == 1.0)
      ones.push_back(j);
    else
      rest.push_back(d[j]);
  }
  if (ones.size() >= 2) throw Error(ErrorCode::TwoDiagonalOnes, "two absorbing states force two essential classes");
  check_below_one(rest);

  if (ones.empty()) {
    std::vector<int> cycle(n);
    std::iota(cycle.begin(), cycle.end(), 0);
    CompletionSolution s{diag_cycle_kemeny(d), diagonal_cycle_matrix(d), SolveMethod::DiagonalCycle,
                         Uniqueness::AnyNCycle, std::move(cycle), {}, "D + (I-D)C, C = cycle " + cycle_text(n)};
    verify_witness(s);
    return s;
  }

  // one absorbing state: every other row sends its off-diagonal mass there
  const int sink = ones.front();
  double value = 0.0;
  Matrix t = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    t(j, j) = d[j];
    if (j == sink) continue;
    t(j, sink) = 1.0 - d[j];
    value += 1.0 / (1.0 - d[j]);
  }
  CompletionSolution s{value, validate_stochastic(t), SolveMethod::DiagonalAbsorbing, Uniqueness::Unknown, {}, {},
                       "every row drains into absorbing state " + std::to_string(sink + 1)};
  verify_witness(s);
  return s;
}

CompletionSolution solve_partial_diagonal(std::span<const double> d, int n) {
  const int k = static_cast<int>(d.size());
  if (k >= n) throw Error(ErrorCode::InvalidArgument, "need k < n");
  check_entries(d);
  check_below_one(d);
  double s = 0.0, s2 = 0.0;
  for (double v : d) {
    const double x = 1.0 / (1.0 - v);
    s += x;
    s2 += x * x;
  }
  const double free_count = n - k;
  const double total = s + free_count;
  const double value = (total * total - s2 - free_count) / (2.0 * total);

  std::vector<double> padded(d.begin(), d.end());
  padded.resize(n, 0.0);
  CompletionSolution sol = solve_diagonal(padded);
  sol.value = value;
  verify_witness(sol);
  return sol;
}

std::vector<double> s_sequence(std::span<const double> x) {
  for (double v : x)
    if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveEntry, "s-sequence needs positive x");
  const std::size_t n = x.size();
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t j = n; j-- > 0;) suffix[j] = suffix[j + 1] + x[j];
  std::vector<double> s(n);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += x[k];
    sum2 += x[k] * x[k];
    s[k] = (sum * sum - sum2) / (2.0 * sum) + suffix[k + 1];
  }
  return s;
}

bool is_diagonal_minimizer(const StochasticMatrix& T, std::span<const double> d) {
  const int n = T.size();
  if (static_cast<int>(d.size()) != n) throw Error(ErrorCode::InvalidArgument, "diagonal length differs from n");
  for (int j = 0; j < n; ++j)
    if (std::abs(T(j, j) - d[j]) > kEntryTol)
      throw Error(ErrorCode::DiagonalMismatch, "t_jj differs from d_j at j = " + std::to_string(j));
  if (n < 2) return false;

  std::vector<int> next(n, -1);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (k == j || T(j, k) <= kEntryTol) continue;
      if (next[j] >= 0) return false;  // second positive off-diagonal entry
      next[j] = k;
    }
    if (next[j] < 0 || std::abs(T(j, next[j]) - (1.0 - d[j])) > kEntryTol) return false;
  }
  int v = 0;
  for (int steps = 1; steps <= n; ++steps) {
    v = next[v];
    if (v == 0) return steps == n;
  }
  return false;
}

}  // namespace kemeny
