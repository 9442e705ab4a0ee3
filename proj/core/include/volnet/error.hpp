#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace volnet {

/// Machine-readable failure categories. The CLI prints `code_name()` as the
/// first token of its single-line error report.
enum class ErrorCode {
  kIo,
  kMissingColumn,
  kUnparseableRow,
  kPriceInvariantViolation,
  kDuplicateDate,
  kEmptyIntersection,
  kWindowTooSmall,
  kSeriesTooShort,
  kRankDeficientDesign,
  kNonFiniteInput,
  kDidNotConverge,
  kGridEmpty,
  kTooFewObservations,
  kInvalidArgument,
  kHistoryTooShort,
  kSingularSubmatrix,
  kExplosiveModel,
  kNonFiniteSimulation,
  kPanelTooShort,
  kBootstrapAborted,
  kDegenerateSplit,
  kLengthMismatch,
  kZeroActualForMape,
  kExplosiveSpec,
  kConfig,
  kModelFormat,
};

[[nodiscard]] std::string_view code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace volnet
