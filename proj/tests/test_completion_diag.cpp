#include "kemeny/completion_diag.hpp"
#include "kemeny/error.hpp"
#include "kemeny/oracle.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace kemeny;
using namespace kemeny::testing;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

std::vector<double> random_d(int n, Rng& rng, double hi = 0.9) {
  std::vector<double> d(n);
  for (double& v : d) v = uniform(rng) < 0.2 ? 0.0 : uniform(rng, 0.0, hi);
  return d;
}

Matrix diag_plus_cycle(const std::vector<double>& d, const std::vector<int>& order) {
  const int n = static_cast<int>(d.size());
  Matrix t = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) t(j, j) = d[j];
  for (int j = 0; j < n; ++j) t(order[j], order[(j + 1) % n]) = 1.0 - d[order[j]];
  return t;
}

/// Random completion with diagonal d and a single essential class that is
/// not D + (I-D)C: mixes a cycle with random extra mass.
StochasticMatrix random_non_cycle_completion(const std::vector<double>& d, Rng& rng) {
  const int n = static_cast<int>(d.size());
  while (true) {
    Matrix t = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      std::vector<double> w(n, 0.0);
      double total = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        w[k] = uniform(rng) < 0.5 ? uniform(rng) : 0.0;
        total += w[k];
      }
      if (total == 0.0) {
        w[(j + 1) % n] = 1.0;
        total = 1.0;
      }
      for (int k = 0; k < n; ++k) t(j, k) = k == j ? d[j] : (1.0 - d[j]) * w[k] / total;
    }
    const StochasticMatrix s = validate_stochastic(t);
    if (essential_structure(s).single_essential && !is_diagonal_minimizer(s, d)) return s;
  }
}

}  // namespace

TEST_CASE("diag_cycle_kemeny examples") {
  CHECK(diag_cycle_kemeny(std::vector<double>(5, 0.0)) == doctest::Approx(2.0));
  CHECK(diag_cycle_kemeny(std::vector<double>{0.5, 0, 0}) == doctest::Approx(1.25));
  CHECK(diag_cycle_kemeny(std::vector<double>{0.5, 0.5}) == doctest::Approx(1.0));
  CHECK(code_of([] { diag_cycle_kemeny(std::vector<double>{1.0, 0.5}); }) == ErrorCode::DiagonalAtOne);
  CHECK(code_of([] { diag_cycle_kemeny(std::vector<double>{0.5}); }) == ErrorCode::DimensionTooSmall);
}

TEST_CASE("solve_diagonal examples") {
  const CompletionSolution ab = solve_diagonal(std::vector<double>{1.0, 0.5, 0.5});
  CHECK(ab.value == doctest::Approx(4.0));
  CHECK(ab.method == SolveMethod::DiagonalAbsorbing);
  CHECK(ab.uniqueness == Uniqueness::Unknown);
  CHECK(kemeny_trace(ab.witness) == doctest::Approx(4.0));
  // an absorbing row is fully specified in a partial matrix
  const Cell F = Cell::free();
  const auto absorbing = validate_partial({{Cell::specified(1), Cell::specified(0), Cell::specified(0)},
                                           {F, Cell::specified(0.5), F},
                                           {F, F, Cell::specified(0.5)}});
  CHECK(sparse_enumeration_min(absorbing).best_value == doctest::Approx(4.0));

  const CompletionSolution zero = solve_diagonal(std::vector<double>(4, 0.0));
  CHECK(zero.value == doctest::Approx(1.5));
  CHECK(zero.witness.entries() == cycle_matrix(4));
  CHECK(zero.uniqueness == Uniqueness::AnyNCycle);
  CHECK(zero.cycle == std::vector<int>{0, 1, 2, 3});

  const CompletionSolution half = solve_diagonal(std::vector<double>{0.5, 0, 0});
  CHECK(half.value == doctest::Approx(1.25));
  CHECK(sparse_enumeration_min(diagonal_partial({0.5, 0, 0})).best_value == doctest::Approx(1.25));

  CHECK(code_of([] { solve_diagonal(std::vector<double>{1.0, 1.0, 0.2}); }) == ErrorCode::TwoDiagonalOnes);
  CHECK(code_of([] { solve_diagonal(std::vector<double>{0.3}); }) == ErrorCode::DimensionTooSmall);
  CHECK(code_of([] { solve_diagonal(std::vector<double>{1.0 - 1e-13, 0.2}); }) == ErrorCode::DiagonalAtOne);
}

TEST_CASE("solve_partial_diagonal examples") {
  CHECK(solve_partial_diagonal(std::vector<double>{}, 5).value == doctest::Approx(2.0));
  CHECK(solve_partial_diagonal(std::vector<double>{0.5}, 3).value == doctest::Approx(1.25));
  CHECK(solve_partial_diagonal(std::vector<double>{0.5, 0.5}, 4).value == doctest::Approx(13.0 / 6.0));
  CHECK(sparse_enumeration_min(diagonal_partial({0.5, 0.5, 0, 0})).best_value == doctest::Approx(13.0 / 6.0));
  CHECK(code_of([] { solve_partial_diagonal(std::vector<double>{0.5, 0.5}, 2); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("s_sequence examples") {
  const auto s = s_sequence(std::vector<double>{1, 1, 1});
  CHECK(s[0] == doctest::Approx(2.0));
  CHECK(s[1] == doctest::Approx(1.5));
  CHECK(s[2] == doctest::Approx(1.0));
  CHECK(s_sequence(std::vector<double>{2, 1, 1})[2] == doctest::Approx(1.25));
  CHECK(code_of([] { s_sequence(std::vector<double>{1, 0, 1}); }) == ErrorCode::NonPositiveEntry);
}

TEST_CASE("is_diagonal_minimizer examples") {
  const std::vector<double> d{0.2, 0.4, 0.1};
  CHECK(is_diagonal_minimizer(validate_stochastic(diag_plus_cycle(d, {0, 2, 1})), d));
  // two 2-cycles: no n-cycle, and two essential classes
  Matrix two(4, 4);
  two << 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
  const StochasticMatrix t2 = validate_stochastic(two);
  CHECK_FALSE(is_diagonal_minimizer(t2, std::vector<double>(4, 0.0)));
  CHECK_FALSE(essential_structure(t2).single_essential);
  Matrix dense = Matrix::Constant(3, 3, 0.3);
  for (int j = 0; j < 3; ++j) dense(j, j) = 0.4;
  CHECK_FALSE(is_diagonal_minimizer(validate_stochastic(dense), std::vector<double>(3, 0.4)));
  CHECK(code_of([&] { is_diagonal_minimizer(validate_stochastic(dense), std::vector<double>(3, 0.1)); }) ==
        ErrorCode::DiagonalMismatch);
}

TEST_CASE("property: closed form equals the sparse-pattern oracle") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 3, trial < 80 ? 5 : 6);  // n = 2 leaves one free cell per row
    const std::vector<double> d = random_d(n, rng);
    const CompletionSolution s = solve_diagonal(d);
    const OracleReport r = sparse_enumeration_min(diagonal_partial(d));
    CHECK(std::abs(s.value - r.best_value) <= 1e-9);
    CHECK(std::abs(kemeny_trace(s.witness) - s.value) <= 1e-9);
    CHECK(essential_structure(s.witness).single_essential);
    CHECK(std::abs(reference_kemeny(s.witness) - s.value) <= 1e-8);
  }
}

TEST_CASE("property: every sparse pattern with a shorter cycle gives s_k") {
  Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = uniform_int(rng, 3, 5);
    const std::vector<double> d = random_d(n, rng);
    const double best = solve_diagonal(d).value;
    enumerate_sparse_patterns(diagonal_partial(d), [&](const SparsePattern& pat, const StochasticMatrix& t) {
      if (!essential_structure(t).single_essential) return true;
      // successor function; find its unique cycle
      std::vector<int> next(n);
      for (std::size_t r = 0; r < pat.rows.size(); ++r) next[pat.rows[r]] = pat.columns[r];
      int v = 0;
      for (int step = 0; step < n; ++step) v = next[v];
      std::vector<int> on_cycle(n, 0);
      int len = 0;
      for (int u = v; !on_cycle[u]; u = next[u], ++len) on_cycle[u] = 1;
      std::vector<double> x;
      for (int j = 0; j < n; ++j)
        if (on_cycle[j]) x.push_back(1.0 / (1.0 - d[j]));
      for (int j = 0; j < n; ++j)
        if (!on_cycle[j]) x.push_back(1.0 / (1.0 - d[j]));
      const double k = kemeny_trace(t);
      CHECK(std::abs(k - s_sequence(x)[len - 1]) <= 1e-9);
      if (len < n) CHECK(k > best + 1e-12);
      return true;
    });
  }
}

TEST_CASE("property: monotone in each d_j, s_k strictly decreasing") {
  Rng rng(43);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = uniform_int(rng, 2, 8);
    std::vector<double> d = random_d(n, rng, 0.8);
    const double before = solve_diagonal(d).value;
    d[uniform_int(rng, 0, n - 1)] += 0.1;
    CHECK(solve_diagonal(d).value > before + 1e-12);

    std::vector<double> x(n);
    for (double& v : x) v = uniform(rng, 1e-3, 10.0);
    const auto s = s_sequence(x);
    for (int k = 0; k + 1 < n; ++k) CHECK(s[k] > s[k + 1] + 1e-12);
  }
}

TEST_CASE("property: leaving the cycle strictly increases K") {
  Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 3, 8);
    const std::vector<double> d = random_d(n, rng);
    const StochasticMatrix t = diagonal_cycle_matrix(d);
    const double k0 = kemeny_trace(t);
    // state n-1 steps to 0 along the cycle; divert part of it to k
    for (double x : {0.1 * (1 - d[n - 1]), 1.0 - d[n - 1]}) {
      for (int k = 1; k <= n - 2; ++k) {
        Matrix m = t.entries();
        m(n - 1, k) += x;
        m(n - 1, 0) -= x;
        const StochasticMatrix moved = validate_stochastic(m);
        CHECK(kemeny_trace(moved) > k0 + 1e-12);
      }
    }
  }
}

TEST_CASE("property: uniqueness of the n-cycle minimisers") {
  Rng rng(45);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = uniform_int(rng, 3, 7);  // n = 2 has no non-cycle completion
    const std::vector<double> d = random_d(n, rng);
    const double best = solve_diagonal(d).value;
    for (int c = 0; c < 50; ++c) {
      const StochasticMatrix t = random_non_cycle_completion(d, rng);
      CHECK(kemeny_trace(t) > best + 1e-12);
    }
    // every n-cycle is accepted and attains the optimum
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin() + 1, order.end(), rng);
    const StochasticMatrix opt = validate_stochastic(diag_plus_cycle(d, order));
    CHECK(is_diagonal_minimizer(opt, d));
    CHECK(std::abs(kemeny_trace(opt) - best) <= 1e-9);
  }
}

TEST_CASE("property: partial diagonal equals zero padding") {
  Rng rng(46);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = uniform_int(rng, 2, 9);
    const int k = uniform_int(rng, 0, n - 1);
    const std::vector<double> d = random_d(k, rng);
    std::vector<double> padded = d;
    padded.resize(n, 0.0);
    CHECK(std::abs(solve_partial_diagonal(d, n).value - solve_diagonal(padded).value) <= 1e-12 * n);
  }
}
