#include "kemeny/completion_row.hpp"

#include "kemeny/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace kemeny {

namespace {

constexpr double kMassTol = 1e-12;
constexpr double kWitnessTol = 1e-9;
constexpr double kIntegerGammaTol = 1e-9;
constexpr double kGammaTieTol = 1e-12;

// Indices 1..m of the r-values, ordered by (value, index).
std::vector<int> sorted_indices(std::span<const double> r) {
  std::vector<int> idx(r.size());
  std::iota(idx.begin(), idx.end(), 1);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return r[a - 1] < r[b - 1]; });
  return idx;
}

OrderingCandidate make_candidate(const RowSpec& spec, std::vector<int> sigma) {
  OrderingCandidate c;
  c.values.reserve(sigma.size());
  for (int m : sigma) c.values.push_back(spec.r[m - 1]);
  c.sigma = std::move(sigma);
  c.gamma = objective_gamma(spec.r0, c.values);
  c.kemeny = (spec.n - 1) - c.gamma / 2.0;
  return c;
}

std::string join_values(std::span<const double> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

}  // namespace

void RowSpec::validate() const {
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "row spec needs n >= 2");
  if (static_cast<int>(r.size()) != n - 1) throw Error(ErrorCode::InvalidArgument, "row spec needs n-1 off-diagonal values");
  double sum = r0;
  if (!std::isfinite(r0) || r0 < 0.0) throw Error(ErrorCode::InvalidArgument, "r0 must be a probability");
  for (double v : r) {
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::InvalidArgument, "row values must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kMassTol) throw Error(ErrorCode::MassNotOne, "row sums to " + std::to_string(sum));
}

RowSpec row_spec_from_row(std::span<const double> row_values, int row) {
  const int n = static_cast<int>(row_values.size());
  if (row < 0 || row >= n) throw Error(ErrorCode::OutOfRange, "row index");
  std::vector<double> relabelled(row_values.begin(), row_values.end());
  std::swap(relabelled[row], relabelled[n - 1]);
  RowSpec spec{n, relabelled[n - 1], std::vector<double>(n - 1)};
  for (int m = 1; m <= n - 1; ++m) spec.r[m - 1] = relabelled[n - 1 - m];
  spec.validate();
  return spec;
}

std::vector<double> specified_row(const RowSpec& spec) {
  std::vector<double> row(spec.n);
  for (int c = 0; c + 1 < spec.n; ++c) row[c] = spec.r[spec.n - 2 - c];
  row[spec.n - 1] = spec.r0;
  return row;
}

double row_cycle_value(int n, int k, double r0) {
  if (k < 1 || k > n - 1) throw Error(ErrorCode::BadCycleLength, "cycle length " + std::to_string(k));
  if (!(r0 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "r0 must be nonnegative");
  if (r0 >= 1.0) throw Error(ErrorCode::DiagonalAtOne, "r0 = 1 leaves no cycle branch");
  return (2.0 * n - k - 3.0) / 2.0 + 1.0 / (1.0 - r0);
}

double row_path_value(std::span<const double> rtilde, int n) {
  if (rtilde.empty()) throw Error(ErrorCode::EmptyPartition, "no distance classes");
  if (static_cast<int>(rtilde.size()) > n) throw Error(ErrorCode::InvalidArgument, "more distance classes than states");
  double mass = 0.0, num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < rtilde.size(); ++j) {
    if (rtilde[j] < 0.0) throw Error(ErrorCode::InvalidArgument, "negative class mass");
    mass += rtilde[j];
    num += static_cast<double>(j * (j + 1)) * rtilde[j];
    den += static_cast<double>(j + 1) * rtilde[j];
  }
  if (std::abs(mass - 1.0) > kMassTol) throw Error(ErrorCode::MassNotOne, "class masses sum to " + std::to_string(mass));
  return (n - 1) - num / (2.0 * den);
}

double objective_gamma(double r0, std::span<const double> ordered) {
  double num = 0.0, den = r0;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const double j = static_cast<double>(i + 1);
    num += j * (j + 1.0) * ordered[i];
    den += (j + 1.0) * ordered[i];
  }
  return num == 0.0 ? 0.0 : num / den;
}

int swap_sign(double r0, std::span<const double> ordered, int j1, int j2, double tol) {
  const int m = static_cast<int>(ordered.size());
  if (j1 < 1 || j2 <= j1 || j2 > m) throw Error(ErrorCode::BadIndices, "need 1 <= j1 < j2 <= n-1");
  const double diff = ordered[j1 - 1] - ordered[j2 - 1];
  if (diff == 0.0) return 0;
  const double slack = j1 + j2 + 1 - objective_gamma(r0, ordered);
  if (std::abs(slack) <= tol) return 0;
  return (diff > 0) == (slack > 0) ? 1 : -1;
}

std::vector<int> canonical_positions(int length, int k) {
  if (k < 4 || k > length - 1) throw Error(ErrorCode::BadK, "canonical ordering needs 4 <= k <= n-2");
  std::vector<int> pos(length);
  for (int j = 1; j <= length; ++j) {
    int idx;
    if (j <= (k - 1) / 2)
      idx = k - 2 * j;
    else if (j <= k - 2)
      idx = 2 * j - k + 1;
    else
      idx = j;
    pos[j - 1] = idx - 1;
  }
  return pos;
}

std::vector<double> canonical_ordering(std::span<const double> rho, int k) {
  if (!std::is_sorted(rho.begin(), rho.end())) throw Error(ErrorCode::InvalidArgument, "rho must be nondecreasing");
  const auto pos = canonical_positions(static_cast<int>(rho.size()), k);
  std::vector<double> out(rho.size());
  for (std::size_t j = 0; j < pos.size(); ++j) out[j] = rho[pos[j]];
  return out;
}

std::string_view to_string(OrderCase c) {
  switch (c) {
    case OrderCase::Sorted: return "sorted";
    case OrderCase::CanonicalUnique: return "canonical-unique";
    case OrderCase::IntegerFamily: return "integer-family";
    case OrderCase::FullCycle: return "full-cycle";
  }
  return "unknown";
}

std::vector<OrderingCandidate> gamma_candidates(const RowSpec& spec) {
  spec.validate();
  const auto sorted = sorted_indices(spec.r);
  std::vector<OrderingCandidate> out;
  out.push_back(make_candidate(spec, sorted));
  const int m = spec.n - 1;
  for (int k = 4; k <= spec.n - 2; ++k) {
    const auto pos = canonical_positions(m, k);
    std::vector<int> sigma(m);
    for (int j = 0; j < m; ++j) sigma[j] = sorted[pos[j]];
    out.push_back(make_candidate(spec, std::move(sigma)));
  }
  return out;
}

GammaMax maximize_gamma(const RowSpec& spec) {
  const auto candidates = gamma_candidates(spec);
  GammaMax g;
  g.best = candidates.front();
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    const auto& cand = candidates[c];
    const double scale = std::max(1.0, std::abs(g.best.gamma));
    if (cand.gamma > g.best.gamma + kGammaTieTol * scale ||
        (std::abs(cand.gamma - g.best.gamma) <= kGammaTieTol * scale && cand.values < g.best.values))
      g.best = cand;
  }

  const double gamma = g.best.gamma;
  const double nearest = std::round(gamma);
  const bool full_cycle = std::any_of(spec.r.begin(), spec.r.end(), [](double v) { return v == 1.0; });
  if (full_cycle) {
    g.order_case = OrderCase::FullCycle;
  } else if (std::abs(gamma - nearest) <= kIntegerGammaTol && nearest >= 4 && nearest <= spec.n - 2) {
    // checked before the < 4 branch: gamma = 4 may land an ulp below
    g.order_case = OrderCase::IntegerFamily;
    g.k = static_cast<int>(nearest);
    for (int j = 1; j <= g.k / 2 - 1; ++j) g.exchange_pairs.emplace_back(j, g.k - 1 - j);
  } else if (gamma < 4.0) {
    g.order_case = OrderCase::Sorted;
  } else {
    g.order_case = OrderCase::CanonicalUnique;
    g.k = static_cast<int>(std::floor(gamma));
  }
  return g;
}

StochasticMatrix path_witness(const RowSpec& spec, std::span<const int> sigma) {
  const int n = spec.n;
  if (static_cast<int>(sigma.size()) != n - 1) throw Error(ErrorCode::InvalidArgument, "sigma must have n-1 entries");
  Matrix t = Matrix::Zero(n, n);
  int toward = n - 1;
  for (int m : sigma) {
    const int state = n - 1 - m;  // column holding r_m in the specified row
    t(state, toward) = 1.0;
    toward = state;
  }
  const auto row = specified_row(spec);
  for (int c = 0; c < n; ++c) t(n - 1, c) = row[c];
  return validate_stochastic(t);
}

StochasticMatrix cycle_witness(const RowSpec& spec) {
  const int n = spec.n;
  Matrix t = Matrix::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) t(j, (j + 1) % (n - 1)) = 1.0;
  const auto row = specified_row(spec);
  for (int c = 0; c < n; ++c) t(n - 1, c) = row[c];
  return validate_stochastic(t);
}

CompletionSolution solve_row(const RowSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const GammaMax gm = maximize_gamma(spec);
  const double path_value = (n - 1) - gm.best.gamma / 2.0;

  CompletionSolution sol{path_value, path_witness(spec, gm.best.sigma), SolveMethod::RowPath, Uniqueness::Unknown,
                         {}, gm.best.values, {}};
  if (spec.r0 == 1.0) {
    sol.method = SolveMethod::RowAbsorbing;
    sol.description = "specified row is absorbing; every free state feeds a path into it";
  } else {
    const double cycle_value = row_cycle_value(n, n - 1, spec.r0);
    if (cycle_value < path_value) {
      sol = CompletionSolution{cycle_value, cycle_witness(spec), SolveMethod::RowCycle, Uniqueness::Unknown,
                               {}, {}, "cycle on the free states; the specified state is transient"};
      for (int j = 0; j + 1 < n; ++j) sol.cycle.push_back(j);
    }
  }
  if (sol.method != SolveMethod::RowCycle) {
    switch (gm.order_case) {
      case OrderCase::Sorted:
      case OrderCase::CanonicalUnique:
      case OrderCase::FullCycle:
        sol.uniqueness = Uniqueness::Unique;
        break;
      case OrderCase::IntegerFamily:
        sol.uniqueness = Uniqueness::ExchangeFamily;
        break;
    }
    if (sol.method == SolveMethod::RowPath) {
      sol.description = std::string("path completion, ordering ") + std::string(to_string(gm.order_case));
      if (gm.k) sol.description += " k=" + std::to_string(gm.k);
      sol.description += ", values by distance " + join_values(gm.best.values);
    }
  }

  const double check = kemeny_trace(sol.witness);
  if (!(std::abs(check - sol.value) <= kWitnessTol * std::max(1.0, std::abs(sol.value))))
    throw Error(ErrorCode::NumericalBreakdown,
                "witness evaluates to " + std::to_string(check) + ", closed form gives " + std::to_string(sol.value));
  return sol;
}

std::vector<double> arrange_regime_weights(std::span<const double> weights, int k, double eps) {
  std::vector<double> sorted(weights.begin(), weights.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.push_back((1.0 - eps) / eps);  // stands in for the dominant last value
  const auto pos = canonical_positions(static_cast<int>(sorted.size()), k);
  std::vector<double> out(weights.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = sorted[pos[j]];
  return out;
}

RowSpec regime_instance(int n, int k, double gamma, double eps, std::span<const double> weights) {
  if (k < 4 || k > n - 2) throw Error(ErrorCode::BadK, "need 4 <= k <= n-2");
  if (!(gamma >= k && gamma < k + 1)) throw Error(ErrorCode::InvalidArgument, "gamma must lie in [k, k+1)");
  if (!(eps > 0.0 && eps < 0.5)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 1/2)");
  if (static_cast<int>(weights.size()) != n - 2) throw Error(ErrorCode::InvalidArgument, "weights need n-2 entries");
  double total = 0.0;
  for (double c : weights) {
    if (c < 0.0) throw Error(ErrorCode::InvalidArgument, "weights must be nonnegative");
    total += c;
  }
  if (std::abs(total - 1.0) > kMassTol) throw Error(ErrorCode::InvalidArgument, "weights must sum to 1");

  std::vector<double> rhat(n - 1);
  for (int j = 0; j < n - 2; ++j) rhat[j] = eps * weights[j];
  rhat[n - 2] = 1.0 - eps;
  std::vector<double> rho = rhat;
  std::sort(rho.begin(), rho.end());
  if (canonical_ordering(rho, k) != rhat)
    throw Error(ErrorCode::InvalidArgument, "weights are not laid out in the canonical order for k");

  double tail = 0.0;
  for (int j = 1; j <= n - 2; ++j) tail += j * weights[j - 1] * (j + 1 - gamma);
  const double one_minus_r0 = gamma / ((1.0 - eps) * (n - 1) * (n - gamma) + eps * tail);
  const double r0 = 1.0 - one_minus_r0;
  if (!(r0 > 0.0 && r0 < 1.0)) throw Error(ErrorCode::R0OutOfRange, "r0 = " + std::to_string(r0) + "; eps too large");

  RowSpec spec{n, r0, std::vector<double>(n - 1)};
  for (int j = 0; j < n - 1; ++j) spec.r[j] = one_minus_r0 * rhat[j];
  spec.validate();
  return spec;
}

}  // namespace kemeny
