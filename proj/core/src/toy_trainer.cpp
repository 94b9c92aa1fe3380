#include "volclust/toy_trainer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "volclust/error.hpp"
#include "volclust/instance_metrics.hpp"
#include "volclust/rng.hpp"

namespace volclust {
namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void validate_batch(const ToyModel& model, const FeatureStream& batch) {
  if (batch.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty batch");
  if (batch.features.size() != batch.size() || batch.t.size() != batch.size()) {
    throw Error(ErrorCode::LengthMismatch, "feature stream columns differ in length");
  }
  for (const auto& x : batch.features) {
    if (x.size() != model.feature_dim()) {
      throw Error(ErrorCode::LengthMismatch, "feature dimension does not match model");
    }
  }
}

}  // namespace

double ToyModel::score(std::span<const double> x) const {
  double z = weights.back();
  for (std::size_t d = 0; d < x.size(); ++d) z += weights[d] * x[d];
  return sigmoid(z);
}

LossBreakdown combined_loss(const ToyModel& model, const FeatureStream& batch,
                            const TrainConfig& config, std::size_t step) {
  validate_batch(model, batch);
  const std::size_t n = batch.size();
  const std::size_t dim = model.feature_dim();
  const double inv_n = 1.0 / static_cast<double>(n);

  LossBreakdown out;
  out.gradient.assign(dim + 1, 0.0);
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = model.score(batch.features[i]);
    const double pc = std::clamp(p[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
    const bool inside = pc == p[i];
    out.clamped = out.clamped || !inside;
    const double y = batch.y[i];
    out.cross_entropy -= (y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc)) * inv_n;
    // d CE_i / d z_i; the clamp is flat outside its range.
    const double dz = inside ? (p[i] - y) * inv_n : 0.0;
    for (std::size_t d = 0; d < dim; ++d) out.gradient[d] += dz * batch.features[i][d];
    out.gradient[dim] += dz;
  }

  // Non-finite scores would otherwise surface as a weight error below.
  if (!std::isfinite(out.cross_entropy)) throw NonFiniteLoss(step);

  if (config.gamma > 0.0) {
    std::vector<double> w(n);
    std::size_t carrying = 0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = std::abs(p[i] - batch.y[i]);
      carrying += w[i] > kMinPenaltyWeight ? 1 : 0;
    }
    if (carrying < 2) {
      out.penalty_skipped = true;
    } else {
      const double beta = config.soft.effective_beta(batch.t);
      const double start = batch.t.front();
      const double length = batch.t.back() - start;
      Rng rng(config.seed, StreamDomain::TrainReference, step);
      std::vector<double> reference(n);
      for (auto& r : reference) r = start + rng.uniform01() * length;

      const auto trial = weighted_soft_t(batch.t, w, reference, beta);
      const auto penalty = vca_penalty(trial.t_soft, config.gamma);
      out.t_soft = trial.t_soft;
      out.penalty = penalty.value;
      for (std::size_t i = 0; i < n; ++i) {
        const double dw_dp = batch.y[i] == 0 ? 1.0 : -1.0;
        const double dz =
            penalty.derivative * trial.grad_weights[i] * dw_dp * p[i] * (1.0 - p[i]);
        for (std::size_t d = 0; d < dim; ++d) out.gradient[d] += dz * batch.features[i][d];
        out.gradient[dim] += dz;
      }
    }
  } else if (config.gamma < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "gamma must be >= 0");
  }

  out.total = out.cross_entropy + out.penalty;
  const bool finite =
      std::isfinite(out.total) &&
      std::all_of(out.gradient.begin(), out.gradient.end(),
                  [](double g) { return std::isfinite(g); });
  if (!finite) throw NonFiniteLoss(step);
  return out;
}

TrainResult train(const FeatureStream& dataset, const TrainConfig& config) {
  if (!(config.learning_rate >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "learning rate must be >= 0");
  }
  if (config.epochs == 0) throw Error(ErrorCode::InvalidArgument, "epochs must be >= 1");
  if (!std::is_sorted(dataset.t.begin(), dataset.t.end())) {
    throw Error(ErrorCode::InvalidArgument, "dataset must be sorted by t");
  }
  TrainResult result;
  result.model = ToyModel::zeros(dataset.dim());
  result.history.reserve(config.epochs);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    auto loss = combined_loss(result.model, dataset, config, epoch);
    for (std::size_t d = 0; d < loss.gradient.size(); ++d) {
      result.model.weights[d] -= config.learning_rate * loss.gradient[d];
    }
    result.history.push_back(std::move(loss));
  }
  return result;
}

void write_history_csv(std::ostream& out, const std::vector<LossBreakdown>& history) {
  out << "epoch,cross_entropy,penalty,total\n";
  for (std::size_t e = 0; e < history.size(); ++e) {
    out << e << ',' << format_double(history[e].cross_entropy) << ','
        << format_double(history[e].penalty) << ',' << format_double(history[e].total)
        << '\n';
  }
}

EvalStream score_stream(const ToyModel& model, const FeatureStream& data) {
  validate_batch(model, data);
  std::vector<PredictionRecord> records(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    records[i].t = data.t[i];
    records[i].y = data.y[i];
    records[i].p = model.score(data.features[i]);
  }
  return EvalStream::from_records(std::move(records));
}

DriftBenchmark make_drift_benchmark(const DriftSpec& base, std::uint64_t seed) {
  DriftSpec spec = base;
  DriftBenchmark out;
  spec.seed = substream_key(seed, StreamDomain::Drift, 0);
  out.train = generate_drift_dataset(spec);
  spec.seed = substream_key(seed, StreamDomain::Drift, 1);
  out.test = generate_drift_dataset(spec);
  return out;
}

ModelReport evaluate_model(const ToyModel& model, const FeatureStream& test,
                           const VcsConfig& vcs_config, double threshold) {
  const auto stream = score_stream(model, test);
  ModelReport report;
  try {
    report.ap = average_precision(stream);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoPositives) throw;
  }
  try {
    report.auroc = auroc(stream);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::OneClassOnly) throw;
  }
  const auto set = disagreement_set(stream, threshold);
  report.n_errors = set.size();
  if (set.size() >= 2) report.vcs = vcs(set, period_of(stream), vcs_config);
  return report;
}

}  // namespace volclust
