#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "volclust/event_stream.hpp"
#include "volclust/vcs.hpp"

namespace volclust {

struct VcsBlock {
  double value = 0.0;
  double t_mean = 0.0;
  double signed_deviation = 0.0;
  std::size_t tau = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<double> t_stat;

  bool operator==(const VcsBlock&) const = default;
};

struct DensityBlock {
  std::size_t bins = 0;
  std::vector<double> bin_edges;  // bins + 1 edges spanning [t_start, t_end]
  std::vector<std::size_t> error_counts;

  bool operator==(const DensityBlock&) const = default;
};

struct EvalReport {
  std::size_t n_events = 0;
  std::size_t n_errors = 0;
  double threshold = 0.5;
  std::optional<double> ap;
  std::optional<double> auroc;
  std::optional<VcsBlock> vcs;
  std::string vcs_undefined_reason;  // set iff vcs is empty
  DensityBlock density;

  bool operator==(const EvalReport&) const = default;
};

inline constexpr const char* kTooFewDisagreements = "too_few_disagreements";

/// Error counts over `bins` equal-width bins spanning the stream's period.
/// The last bin is closed on the right.
DensityBlock error_density(const EvalStream& stream,
                           const DisagreementSet& set, std::size_t bins);

/// Runs every metric on the stream. Undefined metrics (no positives, one
/// class, K < 2) are left empty rather than thrown.
EvalReport build_report(const EvalStream& stream, double threshold,
                        const VcsConfig& vcs_config, std::size_t density_bins);

std::string to_json(const EvalReport& report);
/// Throws InvalidArgument on a document that does not match the schema.
EvalReport report_from_json(const std::string& text);

/// `bin_start,bin_end,error_count` rows.
void write_density_csv(std::ostream& out, const DensityBlock& density);

/// Horizontal strip of one rectangle per bin, opacity = count / max count.
void write_density_svg(std::ostream& out, const DensityBlock& density);
/// Throws IoError when the file cannot be written.
void emit_density_svg(const EvalReport& report, const std::string& path);

}  // namespace volclust
