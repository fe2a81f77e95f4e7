#pragma once

// Kemeny-minimising completions when the only specified entries form one
// full row (taken to be the last, state n). Row n holds r0 on the diagonal
// and r_j at column n - j (1-based), i.e. p_{n,j} = r_{n-j}.
//
// Two kinds of sparse completion compete:
//   * cycle branch: states 1..n-1 form a cycle, state n is transient,
//     K = (n-2)/2 + 1/(1-r0);
//   * path branch: the free states form a path ending in n. If the value at
//     distance j from n is v_j, K = (n-1) - gamma/2 with
//       gamma = sum j(j+1) v_j / (r0 + sum (j+1) v_j).
// Minimising K over path completions means maximising gamma over orderings
// of the r-values; only the sorted ordering and the canonical interleavings
// for k = 4..n-2 can win.

#include "kemeny/completion.hpp"
#include "kemeny/markov_core.hpp"

#include <span>
#include <vector>

namespace kemeny {

struct RowSpec {
  int n = 0;
  double r0 = 0.0;
  std::vector<double> r;  // r[j-1] = r_j, j = 1..n-1

  /// Throws MassNotOne / InvalidArgument when the invariants fail.
  void validate() const;
};

/// Reads row `row` of a fully specified n x n row (p_{row, c} entries) as a
/// RowSpec after relabelling `row` to the last state.
RowSpec row_spec_from_row(std::span<const double> row_values, int row);

/// Specified last-row entries of the partial matrix: p_{n,j} = r_{n-j}.
std::vector<double> specified_row(const RowSpec& spec);

struct OrderingCandidate {
  std::vector<int> sigma;      // sigma[j-1] = index (1-based) of the r-value at distance j
  std::vector<double> values;  // values[j-1] = r_{sigma(j)}
  double gamma = 0.0;
  double kemeny = 0.0;
};

/// (2n - k - 3)/2 + 1/(1 - r0) for a k-cycle on the free states.
double row_cycle_value(int n, int k, double r0);

/// n - 1 - sum j(j+1) rt_j / (2 sum (j+1) rt_j) for distance-class masses
/// rt_0..rt_{d-1}.
double row_path_value(std::span<const double> rtilde, int n);

/// gamma for the values placed at distances 1..n-1.
double objective_gamma(double r0, std::span<const double> ordered);

/// Sign (-1, 0, +1) of the change in gamma when the entries at distances j1
/// and j2 (1-based, j1 < j2) are exchanged.
int swap_sign(double r0, std::span<const double> ordered, int j1, int j2, double tol = 1e-12);

/// 0-based positions into the sorted sequence rho giving the canonical
/// interleaving for parameter k: slot j takes rho_{k-2j} for j <= (k-1)/2,
/// rho_{2j-k+1} for ceil(k/2) <= j <= k-2 and rho_j afterwards.
std::vector<int> canonical_positions(int length, int k);

/// Canonical ordering of a nondecreasing rho for parameter k (4 <= k <= n-2,
/// length n-1).
std::vector<double> canonical_ordering(std::span<const double> rho, int k);

enum class OrderCase {
  Sorted,          // gamma < 4: nondecreasing order
  CanonicalUnique, // gamma in (k, k+1), k >= 4: canonical-k is the unique argmax
  IntegerFamily,   // gamma == k: canonical-k plus the exchanges r_j <-> r_{k-1-j}
  FullCycle,       // r_{n-1} = 1: gamma = n - 1
};

std::string_view to_string(OrderCase c);

struct GammaMax {
  OrderCase order_case = OrderCase::Sorted;
  int k = 0;  // canonical parameter for CanonicalUnique / IntegerFamily
  OrderingCandidate best;
  /// Distance pairs (j, k-1-j), 1-based, whose exchange keeps gamma fixed.
  std::vector<std::pair<int, int>> exchange_pairs;
};

/// Best gamma over {sorted} U {canonical-k : k = 4..n-2}.
GammaMax maximize_gamma(const RowSpec& spec);

/// All candidates maximize_gamma considers, in evaluation order.
std::vector<OrderingCandidate> gamma_candidates(const RowSpec& spec);

/// Path completion for ordering sigma: the free state holding r_{sigma(j)}
/// in the specified row sits at distance j from state n.
StochasticMatrix path_witness(const RowSpec& spec, std::span<const int> sigma);

/// Cycle on states 1..n-1 (1 -> 2 -> ... -> n-1 -> 1) with the specified row.
StochasticMatrix cycle_witness(const RowSpec& spec);

CompletionSolution solve_row(const RowSpec& spec);

/// Test-instance generator: r-values whose gamma-maximising ordering is the
/// canonical one for k, with gamma_max in [gamma, k+1). `weights` (length
/// n-2, nonnegative, unit sum) must already be laid out so that
/// (eps*weights, 1-eps) follows the canonical-k pattern.
RowSpec regime_instance(int n, int k, double gamma, double eps, std::span<const double> weights);

/// Arranges arbitrary weights into the layout regime_instance expects.
std::vector<double> arrange_regime_weights(std::span<const double> weights, int k, double eps);

}  // namespace kemeny
