#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace kemeny {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kValidationTol = 1e-9;
inline constexpr double kIdentityTol = 1e-8;

/// Dense row-stochastic matrix. Construction goes through validate(), so a
/// live object always has entries in [0,1] and unit row sums.
class StochasticMatrix {
 public:
  /// Clamps entries into [0,1] and renormalises rows that are within `tol`
  /// of stochastic; anything further off throws.
  static StochasticMatrix validate(const Matrix& raw, double tol = kValidationTol);

  int size() const noexcept { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const noexcept { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

 private:
  explicit StochasticMatrix(Matrix m) : entries_(std::move(m)) {}
  Matrix entries_;
};

StochasticMatrix validate_stochastic(const Matrix& raw, double tol = kValidationTol);

struct EssentialStructure {
  std::vector<std::vector<int>> scc_partition;
  std::vector<int> terminal_sccs;  // indices into scc_partition
  bool single_essential = false;

  bool irreducible() const noexcept { return scc_partition.size() == 1; }
  /// Members of the unique essential class. Only meaningful when single_essential.
  const std::vector<int>& essential_class() const { return scc_partition.at(terminal_sccs.front()); }
};

/// SCCs of the digraph with an arc j->k iff t_{jk} > 0.
EssentialStructure essential_structure(const StochasticMatrix& T);

Vector stationary_vector(const StochasticMatrix& T);

/// Q^# for Q = I - T, via (Q + 1 w^T)^{-1} - 1 w^T.
Matrix group_inverse_Q(const StochasticMatrix& T);

double kemeny_trace(const StochasticMatrix& T);

/// Sum of 1/(1 - lambda) over the spectrum with the unit eigenvalue removed.
double kemeny_eigen(const StochasticMatrix& T);

/// Grounds the chain at state `g` (default: smallest index of the terminal
/// SCC) and evaluates the full-rank-factorisation trace through
/// Sherman-Morrison on the (n-1)x(n-1) block S.
double kemeny_grounded(const StochasticMatrix& T, std::optional<int> g = std::nullopt);

Matrix mean_first_passage(const StochasticMatrix& T);

/// alpha_k = w^T M e_k - 1.
Vector accessibility_indices(const StochasticMatrix& T);

/// Var(R_k) of the first-return time to k, recovered from alpha_k.
Vector return_time_variances(const StochasticMatrix& T);

/// K(T + x e_i (e_p - e_q)^T) from the group inverse of T, without
/// refactoring. x must lie in [-t_ip, t_iq].
double kemeny_rank_one_update(const StochasticMatrix& T, int i, int p, int q, double x);

/// Same update when K(T) and Q^# are already at hand (used by search loops).
double kemeny_rank_one_update(const Matrix& q_group_inverse, double kemeny, int i, int p, int q, double x);

struct ChainAnalysis {
  Vector w;
  Matrix q_group_inverse;
  double kemeny = 0.0;
  std::optional<Matrix> mfpt;   // irreducible only
  std::optional<Vector> alpha;  // irreducible only
  std::optional<Vector> ret_var;
};

ChainAnalysis analyze(const StochasticMatrix& T);

}  // namespace kemeny
