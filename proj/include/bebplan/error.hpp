#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bebplan {

enum class ErrorCode {
  MissingDepot,
  DuplicateTripLabel,
  IncompleteDeadheadMatrix,
  NegativeValue,
  InvalidInput,
  PowerOutOfRange,
  NotABev,
  NotAnNcb,
  EmptySchedule,
  NoPeriods,
  NoPurchasableTypes,
  DimensionMismatch,
  NegativeThreshold,
  InventoryMismatch,
  NoFeasibleSolutionFound,
  MpsParse,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a code so callers and tests can
// branch on the kind without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bebplan
