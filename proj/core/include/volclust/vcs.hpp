#pragma once

// Volatility-cluster statistic.
//
// For a disagreement set of K error timestamps over a test period, each of
// tau trials draws k < K errors without replacement and k uniform times in
// the period, then compares
//
//   D_disg = sum over sampled errors of the distance to the nearest *other*
//            error, and
//   D_r    = sum over random times of the distance to the nearest error,
//
// through T = D_r / (D_r + D_disg). T near 1 means errors are clustered,
// near 0 regularly spaced, near 1/2 random. VCS = |1/2 - mean_i T_i|.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "volclust/event_stream.hpp"

namespace volclust {

class Rng;

struct Period {
  double start = 0.0;
  double end = 0.0;

  double length() const noexcept { return end - start; }
};

inline Period period_of(const EvalStream& stream) {
  return {stream.t_start(), stream.t_end()};
}

struct VcsConfig {
  std::size_t tau = 5;
  double subsample_fraction = 0.5;
  std::uint64_t seed = 42;

  /// k = max(1, floor(fraction * K)), capped at K - 1. Requires K >= 2.
  std::size_t subsample_size(std::size_t n_errors) const;
};

struct VcsTrial {
  std::size_t repeat_index = 0;
  std::vector<std::size_t> subsample;  // positions in the disagreement set
  std::vector<double> random_times;
  double d_disg = 0.0;
  double d_r = 0.0;
  double t_stat = 0.0;
};

struct VcsResult {
  std::vector<VcsTrial> trials;
  double t_mean = 0.0;
  double vcs = 0.0;
  VcsConfig config;
  std::size_t n_errors = 0;
  std::size_t k = 0;

  /// t_mean - 1/2: positive for clustered errors, negative for regular ones.
  double signed_deviation() const noexcept { return t_mean - 0.5; }
};

/// Distance from entry `position` to the nearest other entry of the set.
/// The set must be sorted by time. Throws InsufficientSet when K < 2.
double nn_distance(const DisagreementSet& set, std::size_t position);

/// Sum of nn_distance over the given positions. Throws InsufficientSet.
double disg_distance_sum(const DisagreementSet& set,
                         const std::vector<std::size_t>& positions);

/// Distance from an arbitrary time to the nearest entry (no exclusion).
/// Throws EmptySet.
double distance_to_set(const DisagreementSet& set, double t);

struct ReferenceSample {
  double sum = 0.0;
  std::vector<double> times;
};

/// Draws k times start + u * (end - start), u = rng.uniform01(), and sums
/// their distances to the set. Throws EmptySet.
ReferenceSample random_reference_sum(std::size_t k, const Period& period,
                                     const DisagreementSet& set, Rng& rng);

/// D_r / (D_r + D_disg). Throws DegenerateDistances when both are zero.
double t_statistic(double d_r, double d_disg);

/// One trial, fully determined by (config.seed, repeat_index).
VcsTrial vcs_trial(const DisagreementSet& set, const Period& period,
                   const VcsConfig& config, std::size_t repeat_index);

/// Throws TooFewDisagreements when K < 2.
VcsResult vcs(const DisagreementSet& set, const Period& period,
              const VcsConfig& config = {});

}  // namespace volclust
