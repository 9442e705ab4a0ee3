#include "volnet/error.hpp"

namespace volnet {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kUnparseableRow: return "UnparseableRow";
    case ErrorCode::kPriceInvariantViolation: return "PriceInvariantViolation";
    case ErrorCode::kDuplicateDate: return "DuplicateDate";
    case ErrorCode::kEmptyIntersection: return "EmptyIntersection";
    case ErrorCode::kWindowTooSmall: return "WindowTooSmall";
    case ErrorCode::kSeriesTooShort: return "SeriesTooShort";
    case ErrorCode::kRankDeficientDesign: return "RankDeficientDesign";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kDidNotConverge: return "DidNotConverge";
    case ErrorCode::kGridEmpty: return "GridEmpty";
    case ErrorCode::kTooFewObservations: return "TooFewObservations";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kHistoryTooShort: return "HistoryTooShort";
    case ErrorCode::kSingularSubmatrix: return "SingularSubmatrix";
    case ErrorCode::kExplosiveModel: return "ExplosiveModel";
    case ErrorCode::kNonFiniteSimulation: return "NonFiniteSimulation";
    case ErrorCode::kPanelTooShort: return "PanelTooShort";
    case ErrorCode::kBootstrapAborted: return "BootstrapAborted";
    case ErrorCode::kDegenerateSplit: return "DegenerateSplit";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kZeroActualForMape: return "ZeroActualForMape";
    case ErrorCode::kExplosiveSpec: return "ExplosiveSpec";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kModelFormat: return "ModelFormatError";
  }
  return "Unknown";
}

}  // namespace volnet
