#include "kemeny/completion_row.hpp"
#include "kemeny/error.hpp"
#include "kemeny/oracle.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <deque>
#include <set>

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

const RowSpec kExample{6, 0.0, {1.0 / 3, 1.0 / 3, 1.0 / 6, 1.0 / 6, 0.0}};

/// Minimum over the cycle branch and every ordering, K from the directly
/// built path matrix.
double brute_force_row(const RowSpec& spec) {
  std::vector<double> v = spec.r;
  std::sort(v.begin(), v.end());
  double best = spec.r0 < 1.0 ? (spec.n - 2) / 2.0 + 1.0 / (1.0 - spec.r0) : 1e300;
  do {
    const double g = reference_gamma(v);
    best = std::min(best, (spec.n - 1) - g / 2.0);
  } while (std::next_permutation(v.begin(), v.end()));
  return best;
}

/// BFS distance from every state to `target` along positive entries.
std::vector<int> distances_to(const Matrix& t, int target) {
  const int n = static_cast<int>(t.rows());
  std::vector<int> dist(n, -1);
  dist[target] = 0;
  std::deque<int> queue{target};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int u = 0; u < n; ++u)
      if (t(u, v) > 0.0 && dist[u] < 0) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
  }
  return dist;
}

/// All arrangements reachable from `base` by exchanging any subset of the
/// distance pairs (j, k-1-j), j = 1..floor(k/2)-1.
std::set<std::vector<double>> exchange_family(const std::vector<double>& base, int k) {
  std::vector<std::pair<int, int>> pairs;
  for (int j = 1; j <= k / 2 - 1; ++j) pairs.emplace_back(j, k - 1 - j);
  std::set<std::vector<double>> out;
  for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
    std::vector<double> v = base;
    for (std::size_t p = 0; p < pairs.size(); ++p)
      if (mask >> p & 1u) std::swap(v[pairs[p].first - 1], v[pairs[p].second - 1]);
    out.insert(v);
  }
  return out;
}

std::vector<double> uniform_weights(int m) { return std::vector<double>(m, 1.0 / m); }

}  // namespace

TEST_CASE("row_cycle_value examples") {
  CHECK(row_cycle_value(4, 3, 0.0) == doctest::Approx(2.0));
  CHECK(row_cycle_value(6, 5, 0.0) == doctest::Approx(3.0));
  CHECK(row_cycle_value(5, 2, 0.5) == doctest::Approx(4.5));
  CHECK(code_of([] { row_cycle_value(5, 5, 0.5); }) == ErrorCode::BadCycleLength);
  CHECK(code_of([] { row_cycle_value(5, 3, 1.0); }) == ErrorCode::DiagonalAtOne);

  // witnesses: a k-cycle on the free states, the rest feeding into it
  for (auto [n, k, r0] : std::vector<std::tuple<int, int, double>>{{4, 3, 0.0}, {5, 2, 0.5}, {6, 4, 0.3}}) {
    Matrix t = Matrix::Zero(n, n);
    for (int j = 0; j < k; ++j) t(j, (j + 1) % k) = 1.0;
    for (int j = k; j < n - 1; ++j) t(j, j - 1) = 1.0;  // path back into the cycle
    t(n - 1, n - 1) = r0;
    t(n - 1, n - 2) = 1.0 - r0;
    CHECK(kemeny_trace(validate_stochastic(t)) == doctest::Approx(row_cycle_value(n, k, r0)).epsilon(1e-10));
  }
}

TEST_CASE("row_path_value examples") {
  CHECK(row_path_value(std::vector<double>{0, 1}, 2) == doctest::Approx(0.5));
  CHECK(row_path_value(std::vector<double>{0, 0, 1.0 / 6, 1.0 / 6, 1.0 / 3, 1.0 / 3}, 6) ==
        doctest::Approx(86.0 / 29.0).epsilon(1e-12));
  CHECK(row_path_value(std::vector<double>{0, 1.0 / 6, 0, 1.0 / 6, 1.0 / 3, 1.0 / 3}, 6) ==
        doctest::Approx(83.0 / 28.0).epsilon(1e-12));
  CHECK(code_of([] { row_path_value(std::vector<double>{}, 3); }) == ErrorCode::EmptyPartition);
  CHECK(code_of([] { row_path_value(std::vector<double>{0.5, 0.4}, 3); }) == ErrorCode::MassNotOne);
}

TEST_CASE("objective_gamma and swap_sign examples") {
  const std::vector<double> best{1.0 / 6, 0, 1.0 / 6, 1.0 / 3, 1.0 / 3};
  CHECK(objective_gamma(0.0, best) == doctest::Approx(57.0 / 14.0).epsilon(1e-14));
  CHECK(objective_gamma(1.0, std::vector<double>(4, 0.0)) == 0.0);
  CHECK(objective_gamma(0.0, std::vector<double>{0, 0, 0, 1}) == doctest::Approx(4.0));

  const std::vector<double> other{0, 1.0 / 6, 1.0 / 6, 1.0 / 3, 1.0 / 3};
  CHECK(objective_gamma(0.0, other) == doctest::Approx(118.0 / 29.0));
  CHECK(swap_sign(0.0, other, 1, 2) == 1);
  CHECK(swap_sign(0.0, other, 2, 3) == 0);  // equal values
  // gamma = 4 exactly and j1 + j2 + 1 = 4
  CHECK(swap_sign(0.0, std::vector<double>{0, 0, 0, 1}, 1, 2) == 0);
  CHECK(code_of([&] { swap_sign(0.0, other, 2, 2); }) == ErrorCode::BadIndices);
  CHECK(code_of([&] { swap_sign(0.0, other, 3, 6); }) == ErrorCode::BadIndices);
}

TEST_CASE("canonical_ordering examples") {
  const std::vector<double> rho{0, 1.0 / 6, 1.0 / 6, 1.0 / 3, 1.0 / 3};
  CHECK(canonical_ordering(rho, 4) == std::vector<double>{1.0 / 6, 0, 1.0 / 6, 1.0 / 3, 1.0 / 3});
  CHECK(canonical_ordering(std::vector<double>(7, 0.125), 5) == std::vector<double>(7, 0.125));
  CHECK(code_of([&] { canonical_ordering(rho, 3); }) == ErrorCode::BadK);
  CHECK(code_of([&] { canonical_ordering(rho, 5); }) == ErrorCode::BadK);
  // k = 7 on 9 slots: rho_5, rho_3, rho_1, rho_2, rho_4, rho_6, rho_7, rho_8, rho_9
  CHECK(canonical_positions(9, 7) == std::vector<int>{4, 2, 0, 1, 3, 5, 6, 7, 8});

  Rng rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = uniform_int(rng, 5, 12);
    std::vector<double> r(m);
    for (double& v : r) v = uniform(rng);
    std::sort(r.begin(), r.end());
    const int k = uniform_int(rng, 4, m - 1);
    std::vector<double> c = canonical_ordering(r, k);
    std::sort(c.begin(), c.end());
    CHECK(c == r);
  }
}

TEST_CASE("maximize_gamma examples") {
  const GammaMax g = maximize_gamma(kExample);
  CHECK(g.best.gamma == doctest::Approx(57.0 / 14.0).epsilon(1e-14));
  CHECK(g.order_case == OrderCase::CanonicalUnique);
  CHECK(g.k == 4);
  const BruteGamma bg = brute_force_gamma(kExample);
  CHECK(bg.gamma_max == doctest::Approx(57.0 / 14.0).epsilon(1e-14));
  REQUIRE(bg.argmax.size() == 1);
  CHECK(bg.argmax.front() == g.best.values);

  const RowSpec low{5, 0.0, {0.9, 0.05, 0.03, 0.02}};
  const GammaMax gl = maximize_gamma(low);
  CHECK(gl.order_case == OrderCase::Sorted);
  const BruteGamma bl = brute_force_gamma(low);
  REQUIRE(bl.argmax.size() == 1);
  CHECK(bl.argmax.front() == std::vector<double>{0.02, 0.03, 0.05, 0.9});
  CHECK(gl.best.values == bl.argmax.front());

  const RowSpec full{5, 0.0, {1.0, 0, 0, 0}};
  const GammaMax gf = maximize_gamma(full);
  CHECK(gf.order_case == OrderCase::FullCycle);
  CHECK(gf.best.gamma == doctest::Approx(4.0));
}

TEST_CASE("solve_row examples") {
  const CompletionSolution s = solve_row(kExample);
  CHECK(s.value == doctest::Approx(83.0 / 28.0).epsilon(1e-12));
  CHECK(s.method == SolveMethod::RowPath);
  CHECK(s.ordering == std::vector<double>{1.0 / 6, 0, 1.0 / 6, 1.0 / 3, 1.0 / 3});
  CHECK(kemeny_trace(s.witness) == doctest::Approx(83.0 / 28.0).epsilon(1e-12));

  const CompletionSolution two = solve_row(RowSpec{2, 0.0, {1.0}});
  CHECK(two.value == doctest::Approx(0.5));
  CHECK(two.witness.entries() == cycle_matrix(2));

  const CompletionSolution c = solve_row(RowSpec{5, 0.9, {0.1, 0, 0, 0}});
  CHECK(c.value == doctest::Approx(23.0 / 7.0).epsilon(1e-12));
  CHECK(c.value == doctest::Approx(brute_force_row(RowSpec{5, 0.9, {0.1, 0, 0, 0}})).epsilon(1e-12));

  const CompletionSolution ab = solve_row(RowSpec{4, 1.0, {0, 0, 0}});
  CHECK(ab.method == SolveMethod::RowAbsorbing);
  CHECK(ab.value == doctest::Approx(3.0));
  CHECK(kemeny_trace(ab.witness) == doctest::Approx(3.0));

  // flat values keep gamma below 3, so the cycle branch wins
  const RowSpec near{5, 0.0, {0.25, 0.25, 0.25, 0.25}};
  const CompletionSolution cs = solve_row(near);
  CHECK(cs.method == SolveMethod::RowCycle);
  CHECK(cs.value == doctest::Approx(2.5));

  CHECK(code_of([] { solve_row(RowSpec{4, 0.5, {0.1, 0.1, 0.1}}); }) == ErrorCode::MassNotOne);
  CHECK(code_of([] { solve_row(RowSpec{1, 1.0, {}}); }) == ErrorCode::DimensionTooSmall);
}

TEST_CASE("regime_instance examples") {
  {
    const std::vector<double> c = arrange_regime_weights(uniform_weights(6), 4, 0.01);
    const RowSpec spec = regime_instance(8, 4, 4.5, 0.01, c);
    const BruteGamma bg = brute_force_gamma(spec);
    CHECK(bg.gamma_max >= 4.5 - 1e-12);
    CHECK(bg.gamma_max < 5.0);
    REQUIRE(bg.argmax.size() == 1);
    std::vector<double> rho = spec.r;
    std::sort(rho.begin(), rho.end());
    CHECK(bg.argmax.front() == canonical_ordering(rho, 4));
  }
  {
    const std::vector<double> c = arrange_regime_weights(uniform_weights(6), 5, 0.005);
    const RowSpec spec = regime_instance(8, 5, 5.25, 0.005, c);
    const BruteGamma bg = brute_force_gamma(spec);
    REQUIRE(bg.argmax.size() == 1);
    std::vector<double> rho = spec.r;
    std::sort(rho.begin(), rho.end());
    CHECK(bg.argmax.front() == canonical_ordering(rho, 5));
  }
  {
    const std::vector<double> c = arrange_regime_weights(uniform_weights(6), 5, 0.01);
    const RowSpec spec = regime_instance(8, 5, 5.0, 0.01, c);
    const BruteGamma bg = brute_force_gamma(spec, 1e-10);
    CHECK(bg.gamma_max == doctest::Approx(5.0).epsilon(1e-10));
    std::vector<double> rho = spec.r;
    std::sort(rho.begin(), rho.end());
    const auto canon = canonical_ordering(rho, 5);
    CHECK(std::find(bg.argmax.begin(), bg.argmax.end(), canon) != bg.argmax.end());
  }
  const auto c = arrange_regime_weights(uniform_weights(6), 4, 0.01);
  CHECK(code_of([&] { regime_instance(8, 4, 4.5, 0.6, c); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { regime_instance(8, 7, 7.5, 0.01, c); }) == ErrorCode::BadK);
  const auto wide = arrange_regime_weights(uniform_weights(4), 4, 0.49);
  CHECK(code_of([&] { regime_instance(6, 4, 4.99, 0.49, wide); }) == ErrorCode::R0OutOfRange);
}

TEST_CASE("index convention round trip") {
  // distinct values so every column can be identified
  const RowSpec spec{6, 0.05, {0.3, 0.25, 0.2, 0.12, 0.08}};
  const std::vector<double> row = specified_row(spec);
  // p_{n,j} = r_{n-j}: column 0 (state 1) holds r_5, column 4 holds r_1
  CHECK(row[0] == spec.r[4]);
  CHECK(row[4] == spec.r[0]);
  CHECK(row[5] == spec.r0);
  const RowSpec back = row_spec_from_row(row, 5);
  CHECK(back.r == spec.r);
  CHECK(back.r0 == spec.r0);

  const CompletionSolution s = solve_row(spec);
  REQUIRE(s.method == SolveMethod::RowPath);
  const Matrix& w = s.witness.entries();
  for (int c = 0; c < 6; ++c) CHECK(w(5, c) == row[c]);
  const std::vector<int> dist = distances_to(w, 5);
  for (int j = 1; j <= 5; ++j) {
    const int col = static_cast<int>(std::find(row.begin(), row.end(), s.ordering[j - 1]) - row.begin());
    CHECK(dist[col] == j);
  }
  // a specified row in the middle: relabelling swaps it with the last state
  const std::vector<double> mid{0.1, 0.2, 0.3, 0.4};
  const RowSpec ms = row_spec_from_row(mid, 1);
  CHECK(ms.r0 == 0.2);
  CHECK(ms.r == std::vector<double>{0.3, 0.4, 0.1});
}

TEST_CASE("property: solve_row equals brute force and the sparse oracle") {
  Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 2, 7);
    const RowSpec spec = random_row_spec(n, rng, 0.2, uniform(rng) < 0.3 ? 0.0 : 1.0);
    const CompletionSolution s = solve_row(spec);
    CHECK(std::abs(s.value - brute_force_row(spec)) <= 1e-10);
    CHECK(std::abs(s.value - perm_bruteforce_row(spec).best_value) <= 1e-10);
    CHECK(std::abs(kemeny_trace(s.witness) - s.value) <= 1e-9);
    CHECK(essential_structure(s.witness).single_essential);
    const std::vector<double> row = specified_row(spec);
    for (int c = 0; c < n; ++c) CHECK(s.witness(n - 1, c) == row[c]);
    if (n <= 6) CHECK(std::abs(s.value - sparse_enumeration_min(row_partial(spec)).best_value) <= 1e-9);
  }
}

TEST_CASE("property: path values follow gamma") {
  Rng rng(53);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = uniform_int(rng, 2, 9);
    const RowSpec spec = random_row_spec(n, rng);
    for (const OrderingCandidate& c : gamma_candidates(spec)) {
      CHECK(std::abs(c.kemeny - ((n - 1) - c.gamma / 2.0)) <= 1e-12);
      CHECK(c.gamma >= 0.0);
      CHECK(c.gamma <= n - 1 + 1e-12);
      CHECK(std::abs(c.gamma - reference_gamma(c.values)) <= 1e-12 * std::max(1.0, c.gamma));
      std::vector<double> rt{spec.r0};
      rt.insert(rt.end(), c.values.begin(), c.values.end());
      CHECK(std::abs(row_path_value(rt, n) - c.kemeny) <= 1e-12 * n);
      const Matrix ref = reference_path_matrix(n, spec.r0, c.values);
      CHECK(std::abs(reference_kemeny(validate_stochastic(ref)) - c.kemeny) <= 1e-8 * n);
    }
  }
}

TEST_CASE("property: splitting a distance class never lowers gamma") {
  Rng rng(54);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = uniform_int(rng, 3, 8);
    const RowSpec spec = random_row_spec(n, rng);
    // random partition of r_1..r_{n-1} into d nonempty classes at distances 1..d
    const int d = uniform_int(rng, 1, n - 2);
    std::vector<int> cls(n - 1);
    for (int j = 0; j < n - 1; ++j) cls[j] = j < d ? j : uniform_int(rng, 0, d - 1);
    std::shuffle(cls.begin(), cls.end(), rng);
    std::vector<int> size(d, 0);
    for (int c : cls) ++size[c];
    std::vector<int> big;
    for (int c = 0; c < d; ++c)
      if (size[c] >= 2) big.push_back(c);
    if (big.empty()) continue;
    const int split = big[uniform_int(rng, 0, static_cast<int>(big.size()) - 1)];
    std::vector<int> members;
    for (int j = 0; j < n - 1; ++j)
      if (cls[j] == split) members.push_back(j);
    const int mover = members[uniform_int(rng, 0, static_cast<int>(members.size()) - 1)];

    auto value = [&](const std::vector<int>& classes, int depth) {
      std::vector<double> rt(depth + 1, 0.0);
      rt[0] = spec.r0;
      for (int j = 0; j < n - 1; ++j) rt[classes[j] + 1] += spec.r[j];
      return row_path_value(rt, n);
    };
    const double g = value(cls, d);
    std::vector<int> after = cls;
    after[mover] = d;  // new singleton class beyond the current last one
    const double h = value(after, d + 1);
    CHECK(h <= g + 1e-12);  // K decreases as gamma grows
  }
}

TEST_CASE("property: swap_sign matches recomputed gamma") {
  Rng rng(55);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = uniform_int(rng, 3, 9);
    RowSpec spec = random_row_spec(n, rng, 0.25);
    if (uniform(rng) < 0.2) spec.r[uniform_int(rng, 0, n - 2)] = spec.r[0];  // force some equal pairs
    std::vector<double> v = spec.r;
    const double mass = std::accumulate(v.begin(), v.end(), spec.r0);
    for (double& x : v) x /= mass;
    const double r0 = spec.r0 / mass;
    const int j1 = uniform_int(rng, 1, n - 2), j2 = uniform_int(rng, j1 + 1, n - 1);
    std::vector<double> w = v;
    std::swap(w[j1 - 1], w[j2 - 1]);
    const double delta = objective_gamma(r0, w) - objective_gamma(r0, v);
    const int sign = swap_sign(r0, v, j1, j2);
    if (std::abs(delta) <= 1e-12)
      CHECK(sign == 0);
    else
      CHECK(sign == (delta > 0 ? 1 : -1));
  }
}

TEST_CASE("property: order cases (a) and (b) on random specs") {
  Rng rng(56);
  int case_a = 0, case_b = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = uniform_int(rng, 5, 8);
    // heavy far mass pushes gamma above 4 in a good share of draws
    RowSpec spec = random_row_spec(n, rng, 0.2, uniform(rng, 0.0, 1.0));
    if (trial % 2) {
      const int far = uniform_int(rng, 0, n - 2);
      for (int j = 0; j < n - 1; ++j) spec.r[j] *= j == far ? 1.0 : 0.2;
      const double mass = std::accumulate(spec.r.begin(), spec.r.end(), spec.r0);
      for (double& x : spec.r) x /= mass;
      spec.r0 = 1.0 - std::accumulate(spec.r.begin(), spec.r.end(), 0.0);
      if (spec.r0 < 0) spec.r0 = 0;
    }
    const BruteGamma bg = brute_force_gamma(spec);
    const GammaMax gm = maximize_gamma(spec);
    CHECK(std::abs(gm.best.gamma - bg.gamma_max) <= 1e-12 * std::max(1.0, bg.gamma_max));
    std::vector<double> rho = spec.r;
    std::sort(rho.begin(), rho.end());
    if (bg.gamma_max < 4.0) {
      ++case_a;
      CHECK(reference_gamma(rho) >= bg.gamma_max - 1e-12);
    } else if (std::abs(bg.gamma_max - std::round(bg.gamma_max)) > 1e-9 && bg.gamma_max > 4.0 &&
               std::floor(bg.gamma_max) <= n - 2) {
      ++case_b;
      const auto canon = canonical_ordering(rho, static_cast<int>(std::floor(bg.gamma_max)));
      REQUIRE(bg.argmax.size() == 1);
      CHECK(bg.argmax.front() == canon);
    }
  }
  CHECK(case_a > 50);
  CHECK(case_b > 20);
}

TEST_CASE("property: order case (c) exchange family") {
  Rng rng(57);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = uniform_int(rng, 6, 9);
    const int k = uniform_int(rng, 4, n - 2);
    std::vector<double> w(n - 2);
    for (double& x : w) x = uniform(rng) < 0.3 ? 0.0 : uniform(rng);
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (total == 0.0) {
      w.assign(n - 2, 1.0);
      total = n - 2;
    }
    for (double& x : w) x /= total;
    const std::vector<double> c = arrange_regime_weights(w, k, 0.01);
    const RowSpec spec = regime_instance(n, k, static_cast<double>(k), 0.01, c);
    const BruteGamma bg = brute_force_gamma(spec, 1e-10);
    CHECK(bg.gamma_max == doctest::Approx(static_cast<double>(k)).epsilon(1e-10));
    std::vector<double> rho = spec.r;
    std::sort(rho.begin(), rho.end());
    const auto canon = canonical_ordering(rho, k);
    CHECK(reference_gamma(canon) >= bg.gamma_max - 1e-10);
    const auto family = exchange_family(canon, k);
    for (const auto& a : bg.argmax) CHECK(family.count(a) == 1);
    const GammaMax gm = maximize_gamma(spec);
    CHECK(gm.order_case == OrderCase::IntegerFamily);
    CHECK(gm.k == k);
    CHECK(static_cast<int>(gm.exchange_pairs.size()) == k / 2 - 1);
  }
}

TEST_CASE("property: small n reduces to sorted versus cycle") {
  Rng rng(58);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = uniform_int(rng, 3, 5);
    const RowSpec spec = random_row_spec(n, rng);
    std::vector<double> sorted = spec.r;
    std::sort(sorted.begin(), sorted.end());
    double expect = (n - 1) - reference_gamma(sorted) / 2.0;
    if (spec.r0 < 1.0) expect = std::min(expect, (n - 2) / 2.0 + 1.0 / (1.0 - spec.r0));
    CHECK(std::abs(solve_row(spec).value - expect) <= 1e-10);
  }
}
