#include "volclust/pattern_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "volclust/error.hpp"
#include "volclust/rng.hpp"

namespace volclust {
namespace {

constexpr double kErrorScore = 0.1;
constexpr double kCorrectMargin = 0.4;

void validate(const PatternSpec& spec) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::SpecViolation, why); };
  if (spec.n_errors < 2) fail("pattern needs at least 2 errors");
  if (spec.n_errors > spec.n_events) fail("more errors than events");
  if (!std::isfinite(spec.period.start) || !std::isfinite(spec.period.end) ||
      spec.period.start < 0.0 || !(spec.period.start < spec.period.end)) {
    fail("period must satisfy 0 <= start < end");
  }
  if (!(spec.cluster_center >= 0.0 && spec.cluster_center <= 1.0)) {
    fail("cluster center must lie in [0, 1]");
  }
  if (!(spec.cluster_width > 0.0 && spec.cluster_width <= 1.0)) {
    fail("cluster width must lie in (0, 1]");
  }
}

struct Slot {
  double t;
  bool error;
};

}  // namespace

PatternKind parse_pattern_kind(std::string_view name) {
  if (name == "random") return PatternKind::Random;
  if (name == "clustered") return PatternKind::Clustered;
  if (name == "regular") return PatternKind::Regular;
  throw Error(ErrorCode::SpecViolation, "unknown pattern: " + std::string(name));
}

std::string_view to_string(PatternKind kind) noexcept {
  switch (kind) {
    case PatternKind::Random: return "random";
    case PatternKind::Clustered: return "clustered";
    case PatternKind::Regular: return "regular";
  }
  return "unknown";
}

EvalStream generate_pattern(const PatternSpec& spec) {
  validate(spec);
  Rng rng(spec.seed, StreamDomain::Pattern, 0);
  const double start = spec.period.start;
  const double length = spec.period.length();
  const std::size_t m = spec.n_events;
  const std::size_t k = spec.n_errors;
  auto uniform_time = [&] { return start + rng.uniform01() * length; };

  std::vector<Slot> slots;
  slots.reserve(m);
  switch (spec.kind) {
    case PatternKind::Random: {
      for (std::size_t i = 0; i < m; ++i) slots.push_back({uniform_time(), false});
      std::stable_sort(slots.begin(), slots.end(),
                       [](const Slot& a, const Slot& b) { return a.t < b.t; });
      std::vector<std::size_t> positions(m);
      std::iota(positions.begin(), positions.end(), std::size_t{0});
      for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_index(m - i));
        std::swap(positions[i], positions[j]);
        slots[positions[i]].error = true;
      }
      break;
    }
    case PatternKind::Clustered: {
      for (std::size_t i = 0; i < m - k; ++i) slots.push_back({uniform_time(), false});
      const double lo = std::max(0.0, spec.cluster_center - 0.5 * spec.cluster_width);
      const double hi = std::min(1.0, spec.cluster_center + 0.5 * spec.cluster_width);
      for (std::size_t i = 0; i < k; ++i) {
        const double frac = lo + rng.uniform01() * (hi - lo);
        slots.push_back({start + frac * length, true});
      }
      break;
    }
    case PatternKind::Regular: {
      for (std::size_t i = 0; i < m - k; ++i) slots.push_back({uniform_time(), false});
      const double spacing = length / static_cast<double>(k);
      for (std::size_t i = 0; i < k; ++i) {
        slots.push_back({start + (static_cast<double>(i) + 0.5) * spacing, true});
      }
      break;
    }
  }
  std::stable_sort(slots.begin(), slots.end(),
                   [](const Slot& a, const Slot& b) { return a.t < b.t; });

  std::vector<PredictionRecord> records;
  records.reserve(m);
  for (const auto& slot : slots) {
    PredictionRecord r;
    r.t = slot.t;
    if (slot.error) {
      r.y = 1;
      r.p = kErrorScore;
    } else {
      r.y = rng.uniform01() < 0.5 ? 1 : 0;
      r.p = r.y == 1 ? 0.5 + kCorrectMargin : 0.5 - kCorrectMargin;
    }
    records.push_back(std::move(r));
  }
  return EvalStream::from_records(std::move(records));
}

FeatureStream generate_drift_dataset(const DriftSpec& spec) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::SpecViolation, why); };
  if (spec.n_events < 2) fail("drift dataset needs at least 2 events");
  if (!(spec.drift_onset > 0.0 && spec.drift_onset < 1.0)) fail("onset must lie in (0, 1)");
  if (spec.feature_dim < 1) fail("feature_dim must be >= 1");
  if (!(spec.period.start < spec.period.end) || spec.period.start < 0.0) {
    fail("period must satisfy 0 <= start < end");
  }
  if (!std::isfinite(spec.drift_shift) || !std::isfinite(spec.separation) ||
      !std::isfinite(spec.secondary_separation) || !(spec.drift_feature_noise > 0.0)) {
    fail("drift means must be finite and feature noise positive");
  }

  Rng rng(spec.seed, StreamDomain::Drift, 0);
  const double length = spec.period.length();
  FeatureStream out;
  out.t.resize(spec.n_events);
  for (auto& t : out.t) t = spec.period.start + rng.uniform01() * length;
  std::sort(out.t.begin(), out.t.end());

  const double onset_time = spec.period.start + spec.drift_onset * length;
  out.y.resize(spec.n_events);
  out.features.resize(spec.n_events);
  for (std::size_t i = 0; i < spec.n_events; ++i) {
    const int y = rng.uniform01() < 0.5 ? 1 : 0;
    const double sgn = y == 1 ? 1.0 : -1.0;
    std::vector<double> x(spec.feature_dim);
    x[0] = sgn * spec.separation + rng.normal();
    if (spec.feature_dim >= 2) x[1] = sgn * spec.secondary_separation + spec.drift_feature_noise * rng.normal();
    for (std::size_t d = 2; d < spec.feature_dim; ++d) x[d] = rng.normal();
    if (y == 1 && out.t[i] >= onset_time) x[0] -= spec.drift_shift;
    out.y[i] = y;
    out.features[i] = std::move(x);
  }
  return out;
}

}  // namespace volclust
