#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "volclust/event_stream.hpp"

namespace volclust {

/// Set functions applied to the per-instance mismatch scores.
enum class Aggregator {
  Sum,
  Mean,
  OneMinusMean,
};

std::string_view to_string(Aggregator g) noexcept;

/// An instance-based metric: g applied to {c * 1[y_i != yhat_i]}.
struct InstanceMetricSpec {
  double mismatch_weight = 1.0;
  Aggregator aggregator = Aggregator::Sum;
};

/// Number of positions where the two label vectors differ.
/// Throws LengthMismatch (or InvalidArgument for empty / non-binary input).
std::size_t hamming_disagreement(std::span<const int> y,
                                 std::span<const int> y_hat);

double instance_metric(const InstanceMetricSpec& spec, std::span<const int> y,
                       std::span<const int> y_hat);

/// Mean of precision at the rank of each positive, ranking by descending
/// score with ties kept in stream order. Throws NoPositives.
double average_precision(const EvalStream& stream);

/// Probability that a random positive outscores a random negative, with ties
/// counted as one half. Throws OneClassOnly.
double auroc(const EvalStream& stream);

}  // namespace volclust
