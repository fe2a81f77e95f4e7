// Serial reference vs OpenMP kernels on the oracle workloads.
#include "kemeny/oracle.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>

#ifdef KEMENY_HAVE_OPENMP
#include <omp.h>
#endif

using namespace kemeny;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, int reps, const std::function<OracleReport(Execution)>& kernel) {
  OracleReport s = kernel(Execution::Serial), p = kernel(Execution::Parallel);
  const double ts = best_of(reps, [&] { s = kernel(Execution::Serial); });
  const double tp = best_of(reps, [&] { p = kernel(Execution::Parallel); });
  std::printf("%-34s %10.4f %10.4f %7.2fx  %s\n", name, ts, tp, ts / tp,
              s.best_value == p.best_value ? "same" : "DIFFERENT");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel oracle kernels"};
  int reps = 3, threads = 0;
  app.add_option("--reps", reps, "repetitions, best time kept")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");
  CLI11_PARSE(app, argc, argv);
  int max_threads = 1;
#ifdef KEMENY_HAVE_OPENMP
  if (threads > 0) omp_set_num_threads(threads);
  max_threads = omp_get_max_threads();
#endif
  std::printf("openmp: %s, max threads %d\n", parallel_available() ? "yes" : "no", max_threads);
  std::printf("%-34s %10s %10s %8s\n", "kernel", "serial s", "parallel s", "speedup");

  CellGrid diag(7, std::vector<Cell>(7, Cell::free()));
  for (int j = 0; j < 7; ++j) diag[j][j] = Cell::specified(0.1 * j);
  const PartialStochasticMatrix pd = validate_partial(diag);
  row("sparse enumeration, diagonal n=7", reps,
      [&](Execution e) { return sparse_enumeration_min(pd, kDefaultPatternBudget, e); });

  const RowSpec spec{10, 0.05, {0.02, 0.3, 0.01, 0.07, 0.15, 0.0, 0.2, 0.1, 0.1}};
  row("permutation brute force, n=10", reps, [&](Execution e) { return perm_bruteforce_row(spec, e); });

  const PartialStochasticMatrix pf = validate_partial(CellGrid(6, std::vector<Cell>(6, Cell::free())));
  row("random search, all free n=6", reps,
      [&](Execution e) { return random_search_min(pf, RandomSearchOptions{20'000, 0.25, 1, 16}, e); });
  return 0;
}
