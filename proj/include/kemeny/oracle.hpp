#pragma once

// Independent checks of the closed forms.
//
// Each kernel exists twice: a plain serial loop (the reference) and an
// OpenMP version that splits the same index space across threads. Both
// reduce with the same total order (value, then lexicographic position), so
// their reports agree bit for bit.

#include "kemeny/completion_row.hpp"
#include "kemeny/markov_core.hpp"
#include "kemeny/partial_matrix.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace kemeny {

enum class OracleMethod { SparseEnumeration, PermutationBruteForce, RandomSearch };
enum class Execution { Serial, Parallel };

std::string_view to_string(OracleMethod m);

struct OracleReport {
  double best_value;
  StochasticMatrix best_completion;
  std::uint64_t patterns_examined = 0;
  /// Sparse enumeration: patterns with a single essential class.
  /// Permutation search: orderings evaluated (all are feasible).
  /// Random search: accepted moves.
  std::uint64_t patterns_feasible = 0;
  OracleMethod method;
  std::optional<SparsePattern> best_pattern;  // sparse enumeration
  std::vector<int> best_sigma;                // permutation search; empty if the cycle branch won
};

inline constexpr std::uint64_t kDefaultPatternBudget = 10'000'000;

/// Minimum of K over single-essential sparse completions of P.
OracleReport sparse_enumeration_min(const PartialStochasticMatrix& P,
                                    std::uint64_t budget = kDefaultPatternBudget,
                                    Execution exec = Execution::Parallel);

inline constexpr int kPermBruteForceMaxOrder = 10;

/// Every ordering of the row values (n-1 <= 10) plus the cycle branch.
OracleReport perm_bruteforce_row(const RowSpec& spec, Execution exec = Execution::Parallel);

struct RandomSearchOptions {
  std::uint64_t iterations = 10'000;
  double step = 0.25;  // scale of local moves, as a fraction of the admissible interval
  std::uint64_t seed = 0;
  int restarts = 8;
};

/// Seeded restarts of coordinate descent over the completion polytope. Moves
/// are x e_i (e_p - e_q)^T within a row's free cells, scored with the
/// rank-one update. Returns an upper bound on m(P).
OracleReport random_search_min(const PartialStochasticMatrix& P, const RandomSearchOptions& opts = {},
                               Execution exec = Execution::Parallel);

/// True when the build has OpenMP; Parallel silently runs serially otherwise.
bool parallel_available() noexcept;

}  // namespace kemeny
