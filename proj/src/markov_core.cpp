#include "kemeny/markov_core.hpp"

#include "kemeny/digraph.hpp"
#include "kemeny/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <string>

namespace kemeny {

namespace {

constexpr double kUnitEigenWindow = 1e-6;
constexpr double kRcondFloor = 1e-14;
constexpr double kGroundedRcondFloor = 1e-8;

void require_single_essential(const StochasticMatrix& T) {
  if (!essential_structure(T).single_essential)
    throw Error(ErrorCode::MultipleEssentialClasses, "Kemeny's constant needs a single essential class");
}

void require_irreducible(const StochasticMatrix& T) {
  if (!essential_structure(T).irreducible())
    throw Error(ErrorCode::NotIrreducible, "mean first passage times need an irreducible chain");
}

}  // namespace

StochasticMatrix StochasticMatrix::validate(const Matrix& raw, double tol) {
  if (raw.rows() != raw.cols() || raw.rows() < 1)
    throw Error(ErrorCode::NotSquare, "got " + std::to_string(raw.rows()) + "x" + std::to_string(raw.cols()));
  const Eigen::Index n = raw.rows();
  Matrix m = raw;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = m(i, j);
      if (!std::isfinite(v))
        throw Error(ErrorCode::InvalidArgument, "non-finite entry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      if (v < -tol)
        throw Error(ErrorCode::NegativeEntry, "entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " + std::to_string(v));
      m(i, j) = std::clamp(v, 0.0, 1.0);
    }
    const double raw_sum = raw.row(i).sum();
    if (std::abs(raw_sum - 1.0) > tol)
      throw Error(ErrorCode::RowSumViolation, "row " + std::to_string(i) + " sums to " + std::to_string(raw_sum));
    // leave rows alone when the sum is only off by summation rounding
    const double s = m.row(i).sum();
    if (std::abs(s - 1.0) > 4.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon()) m.row(i) /= s;
  }
  return StochasticMatrix(std::move(m));
}

StochasticMatrix validate_stochastic(const Matrix& raw, double tol) { return StochasticMatrix::validate(raw, tol); }

EssentialStructure essential_structure(const StochasticMatrix& T) {
  const int n = T.size();
  Adjacency adj(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (T(j, k) > 0.0) adj[j].push_back(k);
  Condensation c = condense(adj);
  EssentialStructure s;
  s.scc_partition = std::move(c.components);
  s.terminal_sccs = std::move(c.terminal);
  s.single_essential = s.terminal_sccs.size() == 1;
  return s;
}

Vector stationary_vector(const StochasticMatrix& T) {
  require_single_essential(T);
  const int n = T.size();
  Matrix a = Matrix::Identity(n, n) - T.entries().transpose();
  a.row(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::PartialPivLU<Matrix> lu(a);
  if (!(lu.rcond() > kRcondFloor)) throw Error(ErrorCode::SingularSystem, "stationary system is singular");
  Vector w = lu.solve(rhs);
  for (auto& x : w) x = std::max(x, 0.0);
  w /= w.sum();
  const double residual = (T.entries().transpose() * w - w).cwiseAbs().maxCoeff();
  if (!(residual <= kIdentityTol))
    throw Error(ErrorCode::NumericalBreakdown, "stationary residual " + std::to_string(residual));
  return w;
}

Matrix group_inverse_Q(const StochasticMatrix& T) {
  const int n = T.size();
  const Vector w = stationary_vector(T);
  const Matrix rank_one = Vector::Ones(n) * w.transpose();
  const Matrix shifted = Matrix::Identity(n, n) - T.entries() + rank_one;
  Eigen::PartialPivLU<Matrix> lu(shifted);
  if (!(lu.rcond() > kRcondFloor)) throw Error(ErrorCode::SingularSystem, "Q + 1w^T is singular");
  return lu.inverse() - rank_one;
}

double kemeny_trace(const StochasticMatrix& T) { return group_inverse_Q(T).trace(); }

double kemeny_eigen(const StochasticMatrix& T) {
  require_single_essential(T);
  Eigen::EigenSolver<Matrix> solver(T.entries(), false);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NumericalBreakdown, "eigenvalue iteration failed");
  const Eigen::VectorXcd lambda = solver.eigenvalues();

  Eigen::Index unit = 0;
  for (Eigen::Index j = 1; j < lambda.size(); ++j)
    if (std::abs(lambda(j) - 1.0) < std::abs(lambda(unit) - 1.0)) unit = j;
  if (std::abs(lambda(unit) - 1.0) > kUnitEigenWindow)
    throw Error(ErrorCode::NumericalBreakdown, "no eigenvalue within 1e-6 of 1");

  std::complex<double> sum = 0.0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    if (j == unit) continue;
    if (std::abs(lambda(j) - 1.0) <= kUnitEigenWindow)
      throw Error(ErrorCode::EigenvalueAtOne, "second eigenvalue within 1e-6 of 1");
    sum += 1.0 / (1.0 - lambda(j));
  }
  if (std::abs(sum.imag()) > kIdentityTol * std::max(1.0, std::abs(sum.real())))
    throw Error(ErrorCode::NumericalBreakdown, "imaginary residue " + std::to_string(sum.imag()));
  return sum.real();
}

double kemeny_grounded(const StochasticMatrix& T, std::optional<int> g) {
  const EssentialStructure structure = essential_structure(T);
  if (!structure.single_essential)
    throw Error(ErrorCode::MultipleEssentialClasses, "Kemeny's constant needs a single essential class");
  const auto& essential = structure.essential_class();
  const int n = T.size();
  const int ground = g.value_or(essential.front());
  if (ground < 0 || ground >= n) throw Error(ErrorCode::OutOfRange, "grounding state " + std::to_string(ground));
  if (std::find(essential.begin(), essential.end(), ground) == essential.end())
    throw Error(ErrorCode::SpectralRadiusNotLessThanOne, "grounding state outside the essential class");
  if (n == 1) return 0.0;

  std::vector<int> keep;
  for (int k = 0; k < n; ++k)
    if (k != ground) keep.push_back(k);
  const int m = n - 1;
  Matrix i_minus_s(m, m);
  Vector u(m);
  for (int a = 0; a < m; ++a) {
    u(a) = T(ground, keep[a]);
    for (int b = 0; b < m; ++b) i_minus_s(a, b) = (a == b ? 1.0 : 0.0) - T(keep[a], keep[b]);
  }
  Eigen::PartialPivLU<Matrix> lu(i_minus_s);
  if (!(lu.rcond() > kGroundedRcondFloor))
    throw Error(ErrorCode::SpectralRadiusNotLessThanOne, "I - S is singular or ill-conditioned");
  const Matrix inv = lu.inverse();
  const Vector col = inv * Vector::Ones(m);        // (I-S)^{-1} 1
  const Vector row = inv.transpose() * u;          // ((I-S)^{-1})^T u
  return inv.trace() - row.dot(col) / (1.0 + u.dot(col));
}

Matrix mean_first_passage(const StochasticMatrix& T) {
  require_irreducible(T);
  const int n = T.size();
  const Vector w = stationary_vector(T);
  const Matrix qg = group_inverse_Q(T);
  Matrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) m(j, k) = j == k ? 1.0 / w(k) : (qg(k, k) - qg(j, k)) / w(k);
  return m;
}

Vector accessibility_indices(const StochasticMatrix& T) {
  const Matrix m = mean_first_passage(T);
  const Vector w = stationary_vector(T);
  return (m.transpose() * w).array() - 1.0;
}

Vector return_time_variances(const StochasticMatrix& T) {
  const Vector alpha = accessibility_indices(T);
  const Vector w = stationary_vector(T);
  Vector var(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) var(k) = (2.0 * w(k) * alpha(k) - 1.0 + w(k)) / (w(k) * w(k));
  return var;
}

double kemeny_rank_one_update(const Matrix& qg, double kemeny, int i, int p, int q, double x) {
  if (x == 0.0 || p == q) return kemeny;
  const double first = qg(p, i) - qg(q, i);
  const double denominator = 1.0 - x * first;
  if (std::abs(denominator) <= 1e-12) throw Error(ErrorCode::DenominatorVanishes, "1 - x h^T Q# e_i vanishes");
  const double second = (qg.row(p) - qg.row(q)).dot(qg.col(i));
  return kemeny + x * second / denominator;
}

double kemeny_rank_one_update(const StochasticMatrix& T, int i, int p, int q, double x) {
  const int n = T.size();
  if (i < 0 || i >= n || p < 0 || p >= n || q < 0 || q >= n)
    throw Error(ErrorCode::OutOfRange, "index outside the matrix");
  constexpr double slack = 1e-12;
  if (x < -T(i, p) - slack || x > T(i, q) + slack)
    throw Error(ErrorCode::OutOfRange, "x outside [-t_ip, t_iq]");
  const Matrix qg = group_inverse_Q(T);
  return kemeny_rank_one_update(qg, qg.trace(), i, p, q, x);
}

ChainAnalysis analyze(const StochasticMatrix& T) {
  ChainAnalysis a;
  a.w = stationary_vector(T);
  a.q_group_inverse = group_inverse_Q(T);
  a.kemeny = a.q_group_inverse.trace();
  if (essential_structure(T).irreducible()) {
    a.mfpt = mean_first_passage(T);
    a.alpha = accessibility_indices(T);
    a.ret_var = return_time_variances(T);
  }
  return a;
}

}  // namespace kemeny
