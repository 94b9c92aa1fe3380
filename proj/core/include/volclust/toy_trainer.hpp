#pragma once

// Linear-logistic model trained by full-batch gradient descent on
//
//   L = mean binary cross-entropy + gamma * (1/2 - t_soft)^2,
//
// where t_soft is the weighted soft T over the training timestamps with
// membership weights w_i = |p_i - y_i|. Gradients are hand-derived: the
// penalty reaches the parameters through d t_soft / d w_i, dw_i/dp_i = +-1
// and dp_i/dtheta = p_i (1 - p_i) x_i.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "volclust/event_stream.hpp"
#include "volclust/pattern_gen.hpp"
#include "volclust/soft_vca.hpp"
#include "volclust/vcs.hpp"

namespace volclust {

struct TrainConfig {
  double gamma = 0.1;
  double learning_rate = 0.05;
  std::size_t epochs = 200;
  std::uint64_t seed = 0;
  SoftConfig soft;
  VcsConfig vcs_eval;
};

/// Weights over the features followed by a bias term.
struct ToyModel {
  std::vector<double> weights;

  static ToyModel zeros(std::size_t feature_dim) {
    return ToyModel{std::vector<double>(feature_dim + 1, 0.0)};
  }
  std::size_t feature_dim() const noexcept { return weights.size() - 1; }
  double score(std::span<const double> x) const;

  bool operator==(const ToyModel&) const = default;
};

struct LossBreakdown {
  double cross_entropy = 0.0;
  double penalty = 0.0;
  double total = 0.0;
  double t_soft = 0.5;
  std::vector<double> gradient;
  bool penalty_skipped = false;
  bool clamped = false;
};

inline constexpr double kProbabilityClamp = 1e-7;
inline constexpr double kMinPenaltyWeight = 1e-6;

/// Cross-entropy plus VCA penalty at `model`, with the random reference
/// times drawn from substream (config.seed, step). Throws NonFiniteLoss.
LossBreakdown combined_loss(const ToyModel& model, const FeatureStream& batch,
                            const TrainConfig& config, std::size_t step);

struct TrainResult {
  ToyModel model;
  std::vector<LossBreakdown> history;  // one entry per epoch, pre-update
};

/// Full-batch gradient descent from zero weights. Deterministic given the
/// config. Throws NonFiniteLoss carrying the epoch index.
TrainResult train(const FeatureStream& dataset, const TrainConfig& config);

/// Writes `epoch,cross_entropy,penalty,total` rows.
void write_history_csv(std::ostream& out,
                       const std::vector<LossBreakdown>& history);

struct ModelReport {
  std::optional<double> ap;
  std::optional<double> auroc;
  std::size_t n_errors = 0;
  std::optional<VcsResult> vcs;  // empty when K < 2
};

/// Scores `test`, then delegates to the instance metrics and the VCS.
ModelReport evaluate_model(const ToyModel& model, const FeatureStream& test,
                           const VcsConfig& vcs_config,
                           double threshold = 0.5);

/// Builds the EvalStream the model's scores induce on `data`.
EvalStream score_stream(const ToyModel& model, const FeatureStream& data);

/// Train and test streams are independent realizations of the same drifting
/// process, so errors the drift plants in training recur in the test period.
struct DriftBenchmark {
  FeatureStream train;
  FeatureStream test;
};

DriftBenchmark make_drift_benchmark(const DriftSpec& base, std::uint64_t seed);

}  // namespace volclust
