#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kemeny {

enum class ErrorCode {
  // stochastic matrices
  NotSquare,
  NegativeEntry,
  RowSumViolation,
  MultipleEssentialClasses,
  SingularSystem,
  EigenvalueAtOne,
  SpectralRadiusNotLessThanOne,
  NotIrreducible,
  OutOfRange,
  DenominatorVanishes,
  NumericalBreakdown,
  // partial matrices
  NegativeSpecified,
  RowSumExceedsOne,
  FullySpecifiedSumNotOne,
  SingleFreeCellInRow,
  RowSumOneWithFreeCells,
  DimensionTooLarge,
  MissingAssignment,
  NegativeAssignment,
  // closed-form solvers
  DiagonalAtOne,
  TwoDiagonalOnes,
  DimensionTooSmall,
  NonPositiveEntry,
  DiagonalMismatch,
  BadCycleLength,
  EmptyPartition,
  MassNotOne,
  BadIndices,
  BadK,
  R0OutOfRange,
  InvalidArgument,
  // oracle
  BudgetExceeded,
  Infeasible,
  // text / JSON input
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps them onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::RowSumViolation: return "RowSumViolation";
    case ErrorCode::MultipleEssentialClasses: return "MultipleEssentialClasses";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::EigenvalueAtOne: return "EigenvalueAtOne";
    case ErrorCode::SpectralRadiusNotLessThanOne: return "SpectralRadiusNotLessThanOne";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DenominatorVanishes: return "DenominatorVanishes";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::NegativeSpecified: return "NegativeSpecified";
    case ErrorCode::RowSumExceedsOne: return "RowSumExceedsOne";
    case ErrorCode::FullySpecifiedSumNotOne: return "FullySpecifiedSumNotOne";
    case ErrorCode::SingleFreeCellInRow: return "SingleFreeCellInRow";
    case ErrorCode::RowSumOneWithFreeCells: return "RowSumOneWithFreeCells";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::MissingAssignment: return "MissingAssignment";
    case ErrorCode::NegativeAssignment: return "NegativeAssignment";
    case ErrorCode::DiagonalAtOne: return "DiagonalAtOne";
    case ErrorCode::TwoDiagonalOnes: return "TwoDiagonalOnes";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorCode::DiagonalMismatch: return "DiagonalMismatch";
    case ErrorCode::BadCycleLength: return "BadCycleLength";
    case ErrorCode::EmptyPartition: return "EmptyPartition";
    case ErrorCode::MassNotOne: return "MassNotOne";
    case ErrorCode::BadIndices: return "BadIndices";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::R0OutOfRange: return "R0OutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace kemeny
