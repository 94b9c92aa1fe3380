#include "volclust/error.hpp"

namespace volclust {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedRecord: return "malformed_record";
    case ErrorCode::EmptyInput: return "empty_input";
    case ErrorCode::UnsortedInput: return "unsorted_input";
    case ErrorCode::DegenerateSplit: return "degenerate_split";
    case ErrorCode::LengthMismatch: return "length_mismatch";
    case ErrorCode::NoPositives: return "no_positives";
    case ErrorCode::OneClassOnly: return "one_class_only";
    case ErrorCode::InsufficientSet: return "insufficient_set";
    case ErrorCode::EmptySet: return "empty_set";
    case ErrorCode::DegenerateDistances: return "degenerate_distances";
    case ErrorCode::TooFewDisagreements: return "too_few_disagreements";
    case ErrorCode::AllZeroWeights: return "all_zero_weights";
    case ErrorCode::SpecViolation: return "spec_violation";
    case ErrorCode::NonFiniteLoss: return "non_finite_loss";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::IoError: return "io_error";
  }
  return "unknown";
}

}  // namespace volclust
