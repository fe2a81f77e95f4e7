#include "kemeny/error.hpp"
#include "kemeny/oracle.hpp"
#include "oracle_detail.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

namespace kemeny {

namespace detail {

std::optional<double> evaluate_pattern(const SparsePatternSpace& space, std::uint64_t index, Matrix& scratch) {
  space.fill(space.pattern_at(index), scratch);
  const StochasticMatrix t = validate_stochastic(scratch);
  if (!essential_structure(t).single_essential) return std::nullopt;
  return kemeny_trace(t);
}

double path_value(const RowSpec& spec, const std::vector<int>& sigma, std::vector<double>& rtilde) {
  rtilde.resize(sigma.size() + 1);
  rtilde[0] = spec.r0;
  for (std::size_t j = 0; j < sigma.size(); ++j) rtilde[j + 1] = spec.r[sigma[j] - 1];
  return row_path_value(rtilde, spec.n);
}

std::uint64_t factorial(int m) {
  std::uint64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

PatternBest sparse_scan_serial(const SparsePatternSpace& space) {
  PatternBest best;
  Matrix scratch;
  for (std::uint64_t idx = 0; idx < space.count(); ++idx) {
    if (const auto k = evaluate_pattern(space, idx, scratch)) {
      ++best.feasible;
      best.offer(*k, idx);
    }
  }
  return best;
}

PermBest perm_scan_serial(const RowSpec& spec) {
  PermBest best;
  std::vector<int> sigma(spec.n - 1);
  std::iota(sigma.begin(), sigma.end(), 1);
  std::vector<double> rtilde;
  do {
    best.offer(path_value(spec, sigma, rtilde), sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return best;
}

RestartResult run_restart(const PartialStochasticMatrix& P, const RandomSearchOptions& opts, int restart,
                          std::uint64_t iterations) {
  std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int n = P.size();
  std::vector<int> open_rows;
  for (int i = 0; i < n; ++i)
    if (!P.row_fully_specified(i)) open_rows.push_back(i);

  // strictly positive start: every free cell gets mass, so the start has a
  // single essential class whenever P is feasible
  Matrix t = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (!P.is_free(i, j)) t(i, j) = P.cell(i, j).value();
    if (P.row_fully_specified(i)) continue;
    const auto& cols = P.free_columns(i);
    std::vector<double> weights(cols.size());
    for (double& w : weights) w = 0.05 + unit(rng);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (std::size_t c = 0; c < cols.size(); ++c) t(i, cols[c]) = P.residual(i) * weights[c] / total;
  }

  RestartResult out;
  StochasticMatrix current = validate_stochastic(t);
  Matrix qg = group_inverse_Q(current);
  double value = qg.trace();

  for (std::uint64_t it = 0; it < iterations && !open_rows.empty(); ++it) {
    ++out.proposals;
    const int i = open_rows[static_cast<std::size_t>(unit(rng) * open_rows.size()) % open_rows.size()];
    const auto& cols = P.free_columns(i);
    const std::size_t a = static_cast<std::size_t>(unit(rng) * cols.size()) % cols.size();
    std::size_t b = static_cast<std::size_t>(unit(rng) * (cols.size() - 1)) % (cols.size() - 1);
    if (b >= a) ++b;
    const int p = cols[a], q = cols[b];
    const double lo = -current(i, p), hi = current(i, q);
    if (hi - lo <= 0.0) continue;

    double x;
    const double mode = unit(rng);
    if (mode < 0.25) {
      x = hi;  // empty column q into p
    } else if (mode < 0.5) {
      x = lo;
    } else {
      x = std::clamp(opts.step * (hi - lo) * (2.0 * unit(rng) - 1.0), lo, hi);
    }
    if (x == 0.0) continue;

    double predicted;
    try {
      predicted = kemeny_rank_one_update(qg, value, i, p, q, x);
    } catch (const Error&) {
      continue;
    }
    if (!(predicted < value)) continue;

    Matrix moved = current.entries();
    moved(i, p) += x;
    moved(i, q) -= x;
    if (x == hi) moved(i, q) = 0.0;
    if (x == lo) moved(i, p) = 0.0;
    const StochasticMatrix candidate = validate_stochastic(moved);
    if (!essential_structure(candidate).single_essential) continue;
    Matrix candidate_qg;
    try {
      candidate_qg = group_inverse_Q(candidate);
    } catch (const Error&) {
      continue;
    }
    if (!(candidate_qg.trace() < value)) continue;
    current = candidate;
    qg = std::move(candidate_qg);
    value = qg.trace();
    ++out.accepted;
  }
  out.completion = current.entries();
  out.value = value;
  return out;
}

}  // namespace detail

std::string_view to_string(OracleMethod m) {
  switch (m) {
    case OracleMethod::SparseEnumeration: return "sparse_enum";
    case OracleMethod::PermutationBruteForce: return "perm_bruteforce";
    case OracleMethod::RandomSearch: return "random_search";
  }
  return "unknown";
}

OracleReport sparse_enumeration_min(const PartialStochasticMatrix& P, std::uint64_t budget, Execution exec) {
  if (!feasible_single_class(P)) throw Error(ErrorCode::Infeasible, "no completion has a single essential class");
  const SparsePatternSpace space(P);
  if (space.count() > budget)
    throw Error(ErrorCode::BudgetExceeded,
                std::to_string(space.count()) + " sparse patterns exceed the budget of " + std::to_string(budget));
  const detail::PatternBest best =
      exec == Execution::Parallel ? detail::sparse_scan_parallel(space) : detail::sparse_scan_serial(space);
  if (best.feasible == 0) throw Error(ErrorCode::Infeasible, "no sparse pattern has a single essential class");
  SparsePattern pattern = space.pattern_at(best.index);
  return OracleReport{best.value, space.completion(pattern), space.count(), best.feasible,
                      OracleMethod::SparseEnumeration, std::move(pattern), {}};
}

OracleReport perm_bruteforce_row(const RowSpec& spec, Execution exec) {
  spec.validate();
  const int m = spec.n - 1;
  if (m > kPermBruteForceMaxOrder)
    throw Error(ErrorCode::DimensionTooLarge, "permutation brute force is limited to n-1 <= 10");
  const detail::PermBest path =
      exec == Execution::Parallel ? detail::perm_scan_parallel(spec) : detail::perm_scan_serial(spec);
  const std::uint64_t orderings = detail::factorial(m);

  if (spec.r0 < 1.0) {
    const double cycle = row_cycle_value(spec.n, spec.n - 1, spec.r0);
    if (cycle < path.value)
      return OracleReport{cycle, cycle_witness(spec), orderings + 1, orderings + 1,
                          OracleMethod::PermutationBruteForce, std::nullopt, {}};
  }
  const std::uint64_t examined = orderings + (spec.r0 < 1.0 ? 1 : 0);
  return OracleReport{path.value, path_witness(spec, path.sigma), examined, examined,
                      OracleMethod::PermutationBruteForce, std::nullopt, path.sigma};
}

OracleReport random_search_min(const PartialStochasticMatrix& P, const RandomSearchOptions& opts, Execution exec) {
  if (!feasible_single_class(P)) throw Error(ErrorCode::Infeasible, "no completion has a single essential class");
  const int restarts = std::max(1, opts.restarts);
  const std::uint64_t per_restart = std::max<std::uint64_t>(1, opts.iterations / restarts);

  std::vector<detail::RestartResult> results;
  if (exec == Execution::Parallel) {
    results = detail::restarts_parallel(P, opts, per_restart);
  } else {
    for (int r = 0; r < restarts; ++r) results.push_back(detail::run_restart(P, opts, r, per_restart));
  }

  std::size_t best = 0;
  std::uint64_t proposals = 0, accepted = 0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    proposals += results[r].proposals;
    accepted += results[r].accepted;
    if (results[r].value < results[best].value) best = r;
  }
  const StochasticMatrix completion = validate_stochastic(results[best].completion);
  return OracleReport{kemeny_trace(completion), completion, proposals, accepted, OracleMethod::RandomSearch,
                      std::nullopt, {}};
}

}  // namespace kemeny
