#include "volclust/vcs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "volclust/error.hpp"
#include "volclust/rng.hpp"

namespace volclust {
namespace {

void require_sorted(const DisagreementSet& set) {
  const bool sorted = std::is_sorted(
      set.entries.begin(), set.entries.end(),
      [](const auto& a, const auto& b) { return a.t < b.t; });
  if (!sorted) {
    throw Error(ErrorCode::InvalidArgument, "disagreement set must be sorted by t");
  }
}

void require_pair(const DisagreementSet& set) {
  if (set.size() < 2) {
    throw Error(ErrorCode::InsufficientSet,
                "nearest-neighbour distance needs at least two entries");
  }
}

// Neighbours of a sorted set sit next to each other, including ties.
double nn_distance_sorted(const DisagreementSet& set, std::size_t position) {
  const auto& e = set.entries;
  double best = std::numeric_limits<double>::infinity();
  if (position > 0) best = e[position].t - e[position - 1].t;
  if (position + 1 < e.size()) best = std::min(best, e[position + 1].t - e[position].t);
  return best;
}

double distance_to_sorted(const DisagreementSet& set, double t) {
  const auto& e = set.entries;
  auto it = std::ranges::lower_bound(e, t, {}, &DisagreementEntry::t);
  double best = std::numeric_limits<double>::infinity();
  if (it != e.end()) best = it->t - t;
  if (it != e.begin()) best = std::min(best, t - std::prev(it)->t);
  return best;
}

ReferenceSample reference_sorted(std::size_t k, const Period& period,
                                 const DisagreementSet& set, Rng& rng) {
  ReferenceSample out;
  out.times.reserve(k);
  const double length = period.length();
  for (std::size_t i = 0; i < k; ++i) {
    const double t = period.start + rng.uniform01() * length;
    out.times.push_back(t);
    out.sum += distance_to_sorted(set, t);
  }
  return out;
}

}  // namespace

std::size_t VcsConfig::subsample_size(std::size_t n_errors) const {
  if (n_errors < 2) {
    throw Error(ErrorCode::TooFewDisagreements,
                "VCS needs at least two disagreements, got " + std::to_string(n_errors));
  }
  const auto k = static_cast<std::size_t>(
      std::floor(subsample_fraction * static_cast<double>(n_errors)));
  return std::clamp<std::size_t>(k, 1, n_errors - 1);
}

double nn_distance(const DisagreementSet& set, std::size_t position) {
  require_pair(set);
  require_sorted(set);
  if (position >= set.size()) {
    throw Error(ErrorCode::InvalidArgument, "position outside the set");
  }
  return nn_distance_sorted(set, position);
}

double disg_distance_sum(const DisagreementSet& set,
                         const std::vector<std::size_t>& positions) {
  require_pair(set);
  require_sorted(set);
  double sum = 0.0;
  for (auto pos : positions) {
    if (pos >= set.size()) {
      throw Error(ErrorCode::InvalidArgument, "position outside the set");
    }
    sum += nn_distance_sorted(set, pos);
  }
  return sum;
}

double distance_to_set(const DisagreementSet& set, double t) {
  if (set.empty()) throw Error(ErrorCode::EmptySet, "empty disagreement set");
  require_sorted(set);
  return distance_to_sorted(set, t);
}

ReferenceSample random_reference_sum(std::size_t k, const Period& period,
                                     const DisagreementSet& set, Rng& rng) {
  if (set.empty()) throw Error(ErrorCode::EmptySet, "empty disagreement set");
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  if (!(period.start <= period.end)) {
    throw Error(ErrorCode::InvalidArgument, "period start exceeds end");
  }
  require_sorted(set);
  return reference_sorted(k, period, set, rng);
}

double t_statistic(double d_r, double d_disg) {
  if (!(d_r >= 0.0 && d_disg >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "distances must be non-negative");
  }
  const double denom = d_r + d_disg;
  if (denom == 0.0) {
    throw Error(ErrorCode::DegenerateDistances, "D_r + D_disg is zero");
  }
  return d_r / denom;
}

VcsTrial vcs_trial(const DisagreementSet& set, const Period& period,
                   const VcsConfig& config, std::size_t repeat_index) {
  const std::size_t k_total = set.size();
  const std::size_t k = config.subsample_size(k_total);
  require_sorted(set);

  Rng rng(config.seed, StreamDomain::VcsTrial, repeat_index);
  VcsTrial trial;
  trial.repeat_index = repeat_index;

  // Partial Fisher-Yates: the first k slots become the sample.
  std::vector<std::size_t> positions(k_total);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(k_total - i));
    std::swap(positions[i], positions[j]);
  }
  trial.subsample.assign(positions.begin(), positions.begin() + k);

  for (auto pos : trial.subsample) trial.d_disg += nn_distance_sorted(set, pos);
  auto reference = reference_sorted(k, period, set, rng);
  trial.d_r = reference.sum;
  trial.random_times = std::move(reference.times);
  trial.t_stat = t_statistic(trial.d_r, trial.d_disg);
  return trial;
}

VcsResult vcs(const DisagreementSet& set, const Period& period,
              const VcsConfig& config) {
  if (config.tau == 0) throw Error(ErrorCode::InvalidArgument, "tau must be >= 1");
  if (!(config.subsample_fraction > 0.0 && config.subsample_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "subsample fraction must lie in (0, 1)");
  }
  if (!(period.start <= period.end)) {
    throw Error(ErrorCode::InvalidArgument, "period start exceeds end");
  }
  VcsResult result;
  result.k = config.subsample_size(set.size());
  result.n_errors = set.size();
  result.config = config;
  result.trials.reserve(config.tau);
  double t_sum = 0.0;
  for (std::size_t i = 0; i < config.tau; ++i) {
    result.trials.push_back(vcs_trial(set, period, config, i));
    t_sum += result.trials.back().t_stat;
  }
  result.t_mean = t_sum / static_cast<double>(config.tau);
  result.vcs = std::abs(0.5 - result.t_mean);
  return result;
}

}  // namespace volclust
