#include "volclust/instance_metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "volclust/error.hpp"

namespace volclust {
namespace {

void check_labels(std::span<const int> y, std::span<const int> y_hat) {
  if (y.size() != y_hat.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "label vectors differ in length: " + std::to_string(y.size()) +
                    " vs " + std::to_string(y_hat.size()));
  }
  if (y.empty()) throw Error(ErrorCode::InvalidArgument, "empty label vectors");
  auto binary = [](int v) { return v == 0 || v == 1; };
  if (!std::all_of(y.begin(), y.end(), binary) ||
      !std::all_of(y_hat.begin(), y_hat.end(), binary)) {
    throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
  }
}

}  // namespace

std::string_view to_string(Aggregator g) noexcept {
  switch (g) {
    case Aggregator::Sum: return "sum";
    case Aggregator::Mean: return "mean";
    case Aggregator::OneMinusMean: return "one_minus_mean";
  }
  return "unknown";
}

std::size_t hamming_disagreement(std::span<const int> y,
                                 std::span<const int> y_hat) {
  check_labels(y, y_hat);
  std::size_t h = 0;
  for (std::size_t i = 0; i < y.size(); ++i) h += y[i] != y_hat[i] ? 1 : 0;
  return h;
}

double instance_metric(const InstanceMetricSpec& spec, std::span<const int> y,
                       std::span<const int> y_hat) {
  if (!(spec.mismatch_weight > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "mismatch weight must be positive");
  }
  check_labels(y, y_hat);
  // Left-to-right sum of c * 1[mismatch]; zero terms leave the running sum
  // untouched, so the result depends only on the mismatch count.
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sum += spec.mismatch_weight * (y[i] != y_hat[i] ? 1.0 : 0.0);
  }
  const double m = static_cast<double>(y.size());
  switch (spec.aggregator) {
    case Aggregator::Sum: return sum;
    case Aggregator::Mean: return sum / m;
    case Aggregator::OneMinusMean: return 1.0 - sum / m;
  }
  return sum;
}

double average_precision(const EvalStream& stream) {
  const auto records = stream.records();
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].p > records[b].p;
  });
  std::size_t positives = 0;
  double precision_sum = 0.0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (records[order[rank]].y == 1) {
      ++positives;
      precision_sum += static_cast<double>(positives) / static_cast<double>(rank + 1);
    }
  }
  if (positives == 0) throw Error(ErrorCode::NoPositives, "no positive labels");
  return precision_sum / static_cast<double>(positives);
}

double auroc(const EvalStream& stream) {
  const auto records = stream.records();
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].p < records[b].p;
  });
  // Mann-Whitney U from mid-ranks; a tied block shares its average rank,
  // which credits each tied positive/negative pair with one half.
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && records[order[j]].p == records[order[i]].p) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t q = i; q < j; ++q) {
      if (records[order[q]].y == 1) {
        positive_rank_sum += mid_rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = records.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::OneClassOnly, "AU-ROC needs both classes");
  }
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

}  // namespace volclust
