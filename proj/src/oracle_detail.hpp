#pragma once

// Shared pieces of the serial and OpenMP oracle kernels.

#include "kemeny/oracle.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace kemeny::detail {

/// Running minimum ordered by (value, position); position is the pattern
/// index or the permutation itself.
struct PatternBest {
  double value = std::numeric_limits<double>::infinity();
  std::uint64_t index = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t feasible = 0;

  bool offer(double v, std::uint64_t i) {
    if (v < value || (v == value && i < index)) {
      value = v;
      index = i;
      return true;
    }
    return false;
  }
  void merge(const PatternBest& other) {
    offer(other.value, other.index);
    feasible += other.feasible;
  }
};

struct PermBest {
  double value = std::numeric_limits<double>::infinity();
  std::vector<int> sigma;

  void offer(double v, const std::vector<int>& s) {
    if (v < value || (v == value && (sigma.empty() || s < sigma))) {
      value = v;
      sigma = s;
    }
  }
};

/// K of the sparse completion `index`, or nullopt when it has more than one
/// essential class. `scratch` is reused across calls.
std::optional<double> evaluate_pattern(const SparsePatternSpace& space, std::uint64_t index, Matrix& scratch);

/// Path-branch K for the ordering sigma.
double path_value(const RowSpec& spec, const std::vector<int>& sigma, std::vector<double>& rtilde);

std::uint64_t factorial(int m);

struct RestartResult {
  Matrix completion;
  double value = std::numeric_limits<double>::infinity();
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
};

RestartResult run_restart(const PartialStochasticMatrix& P, const RandomSearchOptions& opts, int restart,
                          std::uint64_t iterations);

// Serial reference kernels.
PatternBest sparse_scan_serial(const SparsePatternSpace& space);
PermBest perm_scan_serial(const RowSpec& spec);

// OpenMP kernels.
PatternBest sparse_scan_parallel(const SparsePatternSpace& space);
PermBest perm_scan_parallel(const RowSpec& spec);
std::vector<RestartResult> restarts_parallel(const PartialStochasticMatrix& P, const RandomSearchOptions& opts,
                                             std::uint64_t per_restart);

}  // namespace kemeny::detail
