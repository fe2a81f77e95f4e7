#pragma once

#include "kemeny/markov_core.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kemeny {

enum class SolveMethod {
  DiagonalCycle,        // all specified diagonal entries < 1
  DiagonalAbsorbing,    // one specified diagonal entry equal to 1
  RowCycle,             // cycle on the free states, specified row transient
  RowPath,              // every cycle passes through the specified row
  RowAbsorbing,         // specified row is e_n
  SparseEnumeration,
  FullySpecified,
};

enum class Uniqueness {
  AnyNCycle,       // minimisers are exactly D + (I-D)C over all n-cycles C
  ExchangeFamily,  // argmax orderings form the exchange family of the canonical one
  Unique,
  Unknown,
};

std::string_view to_string(SolveMethod m);
std::string_view to_string(Uniqueness u);

struct CompletionSolution {
  double value = 0.0;
  StochasticMatrix witness;
  SolveMethod method;
  Uniqueness uniqueness = Uniqueness::Unknown;
  /// Cycle order of the witness (state indices, 0-based) when it has one.
  std::vector<int> cycle;
  /// Row case: values placed at distance 1..n-1 from the specified state.
  std::vector<double> ordering;
  std::string description;
};

inline std::string_view to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::DiagonalCycle: return "diagonal-cycle";
    case SolveMethod::DiagonalAbsorbing: return "diagonal-absorbing";
    case SolveMethod::RowCycle: return "row-cycle";
    case SolveMethod::RowPath: return "row-path";
    case SolveMethod::RowAbsorbing: return "absorbing-specified-row";
    case SolveMethod::SparseEnumeration: return "sparse-enumeration";
    case SolveMethod::FullySpecified: return "fully-specified";
  }
  return "unknown";
}

inline std::string_view to_string(Uniqueness u) {
  switch (u) {
    case Uniqueness::AnyNCycle: return "any-n-cycle";
    case Uniqueness::ExchangeFamily: return "exchange-family";
    case Uniqueness::Unique: return "unique";
    case Uniqueness::Unknown: return "unknown";
  }
  return "unknown";
}

}  // namespace kemeny
