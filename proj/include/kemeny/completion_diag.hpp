#pragma once

// Kemeny-minimising completions when every specified entry sits on the
// diagonal. With x_j = 1/(1-d_j), S = sum x_j and S2 = sum x_j^2 the optimum
// is (S^2 - S2) / (2S), attained exactly by D + (I-D)C for n-cycles C.

#include "kemeny/completion.hpp"
#include "kemeny/markov_core.hpp"

#include <span>
#include <vector>

namespace kemeny {

/// Values >= 1 - kDiagonalOneGuard are too close to 1 for the cycle formula.
inline constexpr double kDiagonalOneGuard = 1e-12;

/// K(D + (I-D)C) for any n-cycle C. Requires n >= 2 and every d_j in [0,1).
double diag_cycle_kemeny(std::span<const double> d);

/// D + (I-D)C for the cycle 0 -> 1 -> ... -> n-1 -> 0.
StochasticMatrix diagonal_cycle_matrix(std::span<const double> d);

/// m(P) for p_jj = d_j and everything else free. Exactly one d_j == 1.0 is
/// the absorbing branch; two or more is rejected.
CompletionSolution solve_diagonal(std::span<const double> d);

/// Only the first k = d.size() diagonal entries are specified in an n x n
/// partial matrix (n > k).
CompletionSolution solve_partial_diagonal(std::span<const double> d, int n);

/// s_k = [(sum_{j<=k} x_j)^2 - sum_{j<=k} x_j^2] / (2 sum_{j<=k} x_j) + sum_{j>k} x_j
/// for k = 1..n; strictly decreasing for positive x.
std::vector<double> s_sequence(std::span<const double> x);

/// True iff T equals D + (I-D)C (to 1e-12) for some n-cycle permutation C.
/// Throws DiagonalMismatch when diag(T) != d.
bool is_diagonal_minimizer(const StochasticMatrix& T, std::span<const double> d);

}  // namespace kemeny
