#include "kemeny/error.hpp"
#include "kemeny/oracle.hpp"
#include "oracle_detail.hpp"

#include <algorithm>
#include <exception>
#include <numeric>

#ifdef KEMENY_HAVE_OPENMP
#include <omp.h>
#endif

namespace kemeny {

bool parallel_available() noexcept {
#ifdef KEMENY_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

namespace detail {

namespace {

// Exceptions must not cross an OpenMP region boundary; park the first one.
class ErrorSlot {
 public:
  void capture() {
#pragma omp critical(kemeny_error_slot)
    if (!error_) error_ = std::current_exception();
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

PatternBest sparse_scan_parallel(const SparsePatternSpace& space) {
  PatternBest best;
  ErrorSlot errors;
  const std::uint64_t count = space.count();
#pragma omp parallel
  {
    PatternBest local;
    Matrix scratch;
#pragma omp for schedule(static) nowait
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      try {
        if (const auto k = evaluate_pattern(space, idx, scratch)) {
          ++local.feasible;
          local.offer(*k, idx);
        }
      } catch (...) {
        errors.capture();
      }
    }
#pragma omp critical(kemeny_sparse_merge)
    best.merge(local);
  }
  errors.rethrow();
  return best;
}

PermBest perm_scan_parallel(const RowSpec& spec) {
  const int m = spec.n - 1;
  // chunk c fixes the leading element; its tail runs in lexicographic order
  std::vector<PermBest> chunks(m);
  ErrorSlot errors;
#pragma omp parallel for schedule(dynamic, 1)
  for (int c = 0; c < m; ++c) {
    try {
      std::vector<int> sigma(m);
      std::iota(sigma.begin(), sigma.end(), 1);
      std::rotate(sigma.begin(), sigma.begin() + c, sigma.begin() + c + 1);
      std::vector<double> rtilde;
      do {
        chunks[c].offer(path_value(spec, sigma, rtilde), sigma);
      } while (std::next_permutation(sigma.begin() + 1, sigma.end()));
    } catch (...) {
      errors.capture();
    }
  }
  errors.rethrow();
  PermBest best;
  for (const auto& c : chunks) best.offer(c.value, c.sigma);
  return best;
}

std::vector<RestartResult> restarts_parallel(const PartialStochasticMatrix& P, const RandomSearchOptions& opts,
                                             std::uint64_t per_restart) {
  const int restarts = std::max(1, opts.restarts);
  std::vector<RestartResult> results(restarts);
  ErrorSlot errors;
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < restarts; ++r) {
    try {
      results[r] = run_restart(P, opts, r, per_restart);
    } catch (...) {
      errors.capture();
    }
  }
  errors.rethrow();
  return results;
}

}  // namespace detail

}  // namespace kemeny
