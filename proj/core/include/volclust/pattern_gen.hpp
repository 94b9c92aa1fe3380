#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "volclust/event_stream.hpp"
#include "volclust/vcs.hpp"

namespace volclust {

enum class PatternKind { Random, Clustered, Regular };

PatternKind parse_pattern_kind(std::string_view name);
std::string_view to_string(PatternKind kind) noexcept;

struct PatternSpec {
  PatternKind kind = PatternKind::Random;
  std::size_t n_events = 2000;
  std::size_t n_errors = 200;
  Period period{0.0, 1000.0};
  double cluster_center = 0.9;
  double cluster_width = 0.02;
  std::uint64_t seed = 0;
};

/// Synthetic stream of M events with exactly K errors at threshold 0.5.
///
/// Random: M uniform times, K of them chosen as errors. Clustered and
/// regular: M - K correct events at uniform times plus K error events placed
/// uniformly inside the cluster window, or at start + (i + 0.5) * L / K.
/// Errors are y = 1 with p = 0.1; correct events draw y from a fair coin and
/// get p = 0.9 or 0.1 to match. Throws SpecViolation.
EvalStream generate_pattern(const PatternSpec& spec);

struct DriftSpec {
  std::size_t n_events = 1000;
  Period period{0.0, 1000.0};
  std::uint64_t seed = 0;
  double drift_onset = 0.8;
  std::size_t feature_dim = 4;
  double drift_shift = 3.0;
  /// Class means sit at +/- separation along the first feature.
  double separation = 2.5;
  /// Class means along the second feature, which the drift leaves alone.
  double secondary_separation = 1.0;
  /// Standard deviation of the second feature.
  double drift_feature_noise = 1.0;
};

/// Labeled feature stream, one row per event, sorted by t.
struct FeatureStream {
  std::vector<std::vector<double>> features;
  std::vector<int> y;
  std::vector<double> t;

  std::size_t size() const noexcept { return y.size(); }
  std::size_t dim() const noexcept {
    return features.empty() ? 0 : features.front().size();
  }
};

/// Two Gaussian classes separated along features 0 and 1; the rest is noise.
/// After the onset the class-1 mean moves by -drift_shift along feature 0, so
/// a model leaning on feature 0 fails in the final stretch of the period
/// while feature 1 still carries a usable boundary. Throws SpecViolation.
FeatureStream generate_drift_dataset(const DriftSpec& spec);

}  // namespace volclust
