#include "bebplan/error.hpp"

namespace bebplan {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingDepot: return "MissingDepot";
    case ErrorCode::DuplicateTripLabel: return "DuplicateTripLabel";
    case ErrorCode::IncompleteDeadheadMatrix: return "IncompleteDeadheadMatrix";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::PowerOutOfRange: return "PowerOutOfRange";
    case ErrorCode::NotABev: return "NotABev";
    case ErrorCode::NotAnNcb: return "NotAnNcb";
    case ErrorCode::EmptySchedule: return "EmptySchedule";
    case ErrorCode::NoPeriods: return "NoPeriods";
    case ErrorCode::NoPurchasableTypes: return "NoPurchasableTypes";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeThreshold: return "NegativeThreshold";
    case ErrorCode::InventoryMismatch: return "InventoryMismatch";
    case ErrorCode::NoFeasibleSolutionFound: return "NoFeasibleSolutionFound";
    case ErrorCode::MpsParse: return "MpsParse";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace bebplan
