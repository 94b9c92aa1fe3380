#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace volclust {

enum class ErrorCode {
  MalformedRecord,
  EmptyInput,
  UnsortedInput,
  DegenerateSplit,
  LengthMismatch,
  NoPositives,
  OneClassOnly,
  InsufficientSet,
  EmptySet,
  DegenerateDistances,
  TooFewDisagreements,
  AllZeroWeights,
  SpecViolation,
  NonFiniteLoss,
  InvalidArgument,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure pinned to a 1-based input line (the CSV header is line 1).
class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line, const std::string& reason)
      : Error(ErrorCode::MalformedRecord,
              "line " + std::to_string(line) + ": " + reason),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised when training hits a non-finite loss; records the failing epoch.
class NonFiniteLoss : public Error {
 public:
  explicit NonFiniteLoss(std::size_t epoch)
      : Error(ErrorCode::NonFiniteLoss,
              "non-finite loss at epoch " + std::to_string(epoch)),
        epoch_(epoch) {}

  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

}  // namespace volclust
