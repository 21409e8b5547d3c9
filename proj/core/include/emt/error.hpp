#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace emt {

enum class ErrorCode {
  // input validation
  MissingColumn,
  NonMonotoneDates,
  GapInDates,
  NegativeCount,
  EmptyInput,
  InvalidValue,
  InvalidArgument,
  NotDaily,
  NotWeekly,
  PartialYear,
  UnknownYear,
  AllYearsExcluded,
  LengthMismatch,
  RangeOutOfBounds,
  TooShort,
  LagTooLarge,
  // computation
  ZeroBaseline,
  DegenerateInterval,
  NegativeLevel,
  DegenerateDesign,
  Infeasible,
  SolverLimit,
  EmptyTable,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for codes that describe bad input or arguments rather than a
/// failure of a numerical procedure. The CLI maps these to exit code 1.
bool is_validation_error(ErrorCode code) noexcept;

/// Exception thrown by all library operations. Row numbers are 1-based data
/// rows (the header is row 0) when the error comes from a CSV reader.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> row = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> row() const noexcept { return row_; }

private:
  ErrorCode code_;
  std::optional<std::size_t> row_;
};

} // namespace emt
