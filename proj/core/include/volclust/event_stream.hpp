#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace volclust {

/// One timestamped test event: ground truth label and predicted score.
struct PredictionRecord {
  double t = 0.0;
  int y = 0;
  double p = 0.0;
  std::string id;

  bool operator==(const PredictionRecord&) const = default;
};

/// Chronologically ordered, validated sequence of records.
///
/// Immutable once built. Records are nondecreasing in t; records sharing a
/// timestamp keep the order they were supplied in.
class EvalStream {
 public:
  /// Validates the records and takes ownership. Throws EmptyInput,
  /// UnsortedInput, or InvalidArgument for a record violating its invariants.
  /// Missing ids are filled with the record index.
  static EvalStream from_records(std::vector<PredictionRecord> records);

  std::span<const PredictionRecord> records() const noexcept {
    return records_;
  }
  std::size_t size() const noexcept { return records_.size(); }
  const PredictionRecord& operator[](std::size_t i) const {
    return records_[i];
  }
  double t_start() const noexcept { return records_.front().t; }
  double t_end() const noexcept { return records_.back().t; }

  std::vector<int> labels() const;
  std::vector<double> scores() const;
  std::vector<double> timestamps() const;

  bool operator==(const EvalStream&) const = default;

 private:
  explicit EvalStream(std::vector<PredictionRecord> records)
      : records_(std::move(records)) {}

  std::vector<PredictionRecord> records_;
};

enum class RecordFormat { Jsonl, Csv };

RecordFormat parse_format(std::string_view name);
std::string_view to_string(RecordFormat format) noexcept;

struct ParseOptions {
  /// Stable-sort by t instead of rejecting decreasing timestamps.
  bool sort_by_time = false;
};

/// Decodes a JSONL or CSV prediction log.
///
/// JSONL: one object per line with "t", "y", "p" and optional string "id";
/// blank lines are skipped and unknown keys ignored. CSV: header exactly
/// `t,y,p` or `t,y,p,id`. Throws MalformedRecord (with its line number),
/// EmptyInput, or UnsortedInput.
EvalStream parse_records(std::istream& input, RecordFormat format,
                         const ParseOptions& options = {});
EvalStream parse_records(std::string_view text, RecordFormat format,
                         const ParseOptions& options = {});

/// Writes records in a form parse_records reads back exactly.
void write_records(std::ostream& out, const EvalStream& stream,
                   RecordFormat format);
std::string write_records(const EvalStream& stream, RecordFormat format);

struct SplitRatios {
  double train = 0.70;
  double val = 0.15;
  double test = 0.15;
};

/// Splits at floor(train*M) and floor((train+val)*M). Throws DegenerateSplit
/// when a part would be empty, InvalidArgument for bad ratios.
std::tuple<EvalStream, EvalStream, EvalStream> chronological_split(
    const EvalStream& stream, const SplitRatios& ratios = {});

/// Predicted label is 1 iff p >= threshold; threshold must lie in (0, 1).
std::vector<int> threshold_labels(const EvalStream& stream, double threshold);

struct DisagreementEntry {
  std::size_t index = 0;  // position in the source stream
  std::string id;
  double t = 0.0;

  bool operator==(const DisagreementEntry&) const = default;
};

/// Records whose thresholded prediction differs from the label, in stream
/// order (hence sorted by t).
struct DisagreementSet {
  std::vector<DisagreementEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
  std::vector<double> timestamps() const;
};

DisagreementSet disagreement_set(const EvalStream& stream, double threshold);

}  // namespace volclust
