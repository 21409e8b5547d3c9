#include "emt/error.hpp"

namespace emt {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::MissingColumn: return "MissingColumn";
  case ErrorCode::NonMonotoneDates: return "NonMonotoneDates";
  case ErrorCode::GapInDates: return "GapInDates";
  case ErrorCode::NegativeCount: return "NegativeCount";
  case ErrorCode::EmptyInput: return "EmptyInput";
  case ErrorCode::InvalidValue: return "InvalidValue";
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::NotDaily: return "NotDaily";
  case ErrorCode::NotWeekly: return "NotWeekly";
  case ErrorCode::PartialYear: return "PartialYear";
  case ErrorCode::UnknownYear: return "UnknownYear";
  case ErrorCode::AllYearsExcluded: return "AllYearsExcluded";
  case ErrorCode::LengthMismatch: return "LengthMismatch";
  case ErrorCode::RangeOutOfBounds: return "RangeOutOfBounds";
  case ErrorCode::TooShort: return "TooShort";
  case ErrorCode::LagTooLarge: return "LagTooLarge";
  case ErrorCode::ZeroBaseline: return "ZeroBaseline";
  case ErrorCode::DegenerateInterval: return "DegenerateInterval";
  case ErrorCode::NegativeLevel: return "NegativeLevel";
  case ErrorCode::DegenerateDesign: return "DegenerateDesign";
  case ErrorCode::Infeasible: return "Infeasible";
  case ErrorCode::SolverLimit: return "SolverLimit";
  case ErrorCode::EmptyTable: return "EmptyTable";
  case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::ZeroBaseline:
  case ErrorCode::DegenerateInterval:
  case ErrorCode::NegativeLevel:
  case ErrorCode::DegenerateDesign:
  case ErrorCode::Infeasible:
  case ErrorCode::SolverLimit:
  case ErrorCode::IoError:
    return false;
  default:
    return true;
  }
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> row)
    : std::runtime_error(row ? message + " (row " + std::to_string(*row) + ")"
                             : message),
      code_(code), row_(row) {}

} // namespace emt
