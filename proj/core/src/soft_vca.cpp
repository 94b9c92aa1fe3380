#include "volclust/soft_vca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "volclust/error.hpp"

namespace volclust {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(-std::abs(a - b)));
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "beta must be positive and finite");
  }
}

// Log of sum_{j != self} exp(-beta |t_self - t_j|), shifted by the largest
// exponent.
double log_sum_others(std::span<const double> times, std::size_t self, double beta) {
  double hi = kNegInf;
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (j != self) hi = std::max(hi, -beta * std::abs(times[self] - times[j]));
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (j != self) sum += std::exp(-beta * std::abs(times[self] - times[j]) - hi);
  }
  return hi + std::log(sum);
}

double log_sum_all(std::span<const double> times, double x, double beta) {
  double hi = kNegInf;
  for (double t : times) hi = std::max(hi, -beta * std::abs(x - t));
  double sum = 0.0;
  for (double t : times) sum += std::exp(-beta * std::abs(x - t) - hi);
  return hi + std::log(sum);
}

void require_other(std::span<const double> times, std::size_t self) {
  if (self >= times.size()) {
    throw Error(ErrorCode::InvalidArgument, "self index outside the set");
  }
  if (times.size() < 2) {
    throw Error(ErrorCode::InsufficientSet, "soft distance needs another entry");
  }
}

// Exponential-kernel sums over sorted sources with log-weights:
//   left[i]  = log sum_{j <= i} exp(lw_j - beta (t_i - t_j))
//   right[i] = log sum_{j >= i} exp(lw_j - beta (t_j - t_i))
// Any target's kernel sum then needs only its two bracketing sources.
class KernelSums {
 public:
  KernelSums(std::span<const double> t, std::span<const double> log_w, double beta)
      : t_(t), beta_(beta), left_(t.size()), right_(t.size()) {
    const std::size_t n = t.size();
    left_[0] = log_w[0];
    for (std::size_t i = 1; i < n; ++i) {
      left_[i] = log_add_exp(left_[i - 1] - beta * (t[i] - t[i - 1]), log_w[i]);
    }
    right_[n - 1] = log_w[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
      right_[i] = log_add_exp(right_[i + 1] - beta * (t[i + 1] - t[i]), log_w[i]);
    }
  }

  // Sum over every source except source i itself.
  double excluding(std::size_t i) const {
    double left = kNegInf;
    double right = kNegInf;
    if (i > 0) left = left_[i - 1] - beta_ * (t_[i] - t_[i - 1]);
    if (i + 1 < t_.size()) right = right_[i + 1] - beta_ * (t_[i + 1] - t_[i]);
    return log_add_exp(left, right);
  }

  // Sum over every source, at an arbitrary time x.
  double at(double x) const {
    const auto upper = std::upper_bound(t_.begin(), t_.end(), x);
    const auto b = static_cast<std::size_t>(upper - t_.begin());
    double left = kNegInf;
    double right = kNegInf;
    if (b > 0) left = left_[b - 1] - beta_ * (x - t_[b - 1]);
    if (b < t_.size()) right = right_[b] - beta_ * (t_[b] - x);
    return log_add_exp(left, right);
  }

 private:
  std::span<const double> t_;
  double beta_;
  std::vector<double> left_;
  std::vector<double> right_;
};

}  // namespace

double median_positive_gap(std::span<const double> sorted_times) {
  std::vector<double> gaps;
  for (std::size_t i = 1; i < sorted_times.size(); ++i) {
    const double gap = sorted_times[i] - sorted_times[i - 1];
    if (gap > 0.0) gaps.push_back(gap);
  }
  if (gaps.empty()) return 0.0;
  std::sort(gaps.begin(), gaps.end());
  const std::size_t mid = gaps.size() / 2;
  return gaps.size() % 2 == 1 ? gaps[mid] : 0.5 * (gaps[mid - 1] + gaps[mid]);
}

double SoftConfig::effective_beta(std::span<const double> sorted_times) const {
  if (!scale_adaptive_beta) return beta;
  const double gap = median_positive_gap(sorted_times);
  return gap > 0.0 ? target_sharpness / gap : beta;
}

double soft_nn_distance(std::span<const double> times, std::size_t self, double beta) {
  require_beta(beta);
  require_other(times, self);
  return -log_sum_others(times, self, beta) / beta;
}

std::vector<double> soft_nn_gradient(std::span<const double> times, std::size_t self,
                                     double beta) {
  require_beta(beta);
  require_other(times, self);
  const double log_s = log_sum_others(times, self, beta);
  std::vector<double> grad(times.size(), 0.0);
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (j == self) continue;
    const double delta = times[self] - times[j];
    const double w = std::exp(-beta * std::abs(delta) - log_s);
    grad[self] += w * sign(delta);
    grad[j] = -w * sign(delta);
  }
  return grad;
}

double soft_t(std::span<const double> times, std::span<const double> random_times,
              double beta) {
  require_beta(beta);
  if (times.size() < 2) {
    throw Error(ErrorCode::InsufficientSet, "soft T needs at least two entries");
  }
  if (random_times.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no random reference times");
  }
  double d_disg = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    d_disg += -log_sum_others(times, i, beta) / beta;
  }
  d_disg /= static_cast<double>(times.size());
  double d_r = 0.0;
  for (double r : random_times) d_r += -log_sum_all(times, r, beta) / beta;
  d_r /= static_cast<double>(random_times.size());
  const double denom = d_r + d_disg;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::DegenerateDistances, "soft distances sum to <= 0");
  }
  return d_r / denom;
}

SoftTrial weighted_soft_t(std::span<const double> times, std::span<const double> weights,
                          std::span<const double> random_times, double beta) {
  require_beta(beta);
  const std::size_t n = times.size();
  if (weights.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "one weight per timestamp required");
  }
  if (random_times.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no random reference times");
  }
  if (!std::is_sorted(times.begin(), times.end())) {
    throw Error(ErrorCode::InvalidArgument, "timestamps must be sorted");
  }
  std::size_t positive = 0;
  double total_weight = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::InvalidArgument, "weights must be finite and >= 0");
    }
    positive += w > 0.0 ? 1 : 0;
    total_weight += w;
  }
  if (positive == 0) throw Error(ErrorCode::AllZeroWeights, "all weights are zero");
  if (positive < 2) {
    throw Error(ErrorCode::InsufficientSet, "need two events with positive weight");
  }

  std::vector<double> log_w(n);
  for (std::size_t i = 0; i < n; ++i) log_w[i] = std::log(weights[i]);

  // Soft distances of events (self excluded) and of random times.
  const KernelSums event_sums(times, log_w, beta);
  std::vector<double> log_s(n);
  double weighted_distance = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    log_s[i] = event_sums.excluding(i);
    if (weights[i] > 0.0) weighted_distance += weights[i] * (-log_s[i] / beta);
  }
  const std::size_t r = random_times.size();
  std::vector<double> log_s_random(r);
  double random_distance = 0.0;
  for (std::size_t q = 0; q < r; ++q) {
    log_s_random[q] = event_sums.at(random_times[q]);
    random_distance += -log_s_random[q] / beta;
  }

  SoftTrial trial;
  trial.d_disg_soft = weighted_distance / total_weight;
  trial.d_r_soft = random_distance / static_cast<double>(r);
  const double denom = trial.d_r_soft + trial.d_disg_soft;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::DegenerateDistances, "soft distances sum to <= 0");
  }
  trial.t_soft = trial.d_r_soft / denom;

  // d(sum_e w_e d_w(e))/dw_j = d_w(j) - (1/beta) sum_{e != j} (w_e / S_e) k(e, j)
  std::vector<double> log_share(n);
  for (std::size_t i = 0; i < n; ++i) log_share[i] = log_w[i] - log_s[i];
  const KernelSums share_sums(times, log_share, beta);

  // d D_r / dw_j = -(1 / (beta R)) sum_r k(r, j) / S_r, sources = sorted r.
  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return random_times[a] < random_times[b]; });
  std::vector<double> sorted_random(r);
  std::vector<double> log_inv_s(r);
  for (std::size_t q = 0; q < r; ++q) {
    sorted_random[q] = random_times[order[q]];
    log_inv_s[q] = -log_s_random[order[q]];
  }
  const KernelSums random_sums(sorted_random, log_inv_s, beta);

  const double inv_denom_sq = 1.0 / (denom * denom);
  trial.grad_weights.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double d_own = -log_s[j] / beta;
    const double d_numerator = d_own - std::exp(share_sums.excluding(j)) / beta;
    const double d_disg = (d_numerator - trial.d_disg_soft) / total_weight;
    const double d_r =
        -std::exp(random_sums.at(times[j])) / (beta * static_cast<double>(r));
    trial.grad_weights[j] =
        (trial.d_disg_soft * d_r - trial.d_r_soft * d_disg) * inv_denom_sq;
  }
  return trial;
}

PenaltyValue vca_penalty(double t_soft, double gamma) {
  if (!(gamma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be >= 0");
  const double gap = 0.5 - t_soft;
  return {gamma * gap * gap, -2.0 * gamma * gap};
}

GradCheckResult finite_difference_check(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> point, std::span<const double> analytic, double step) {
  if (analytic.size() != point.size()) {
    throw Error(ErrorCode::LengthMismatch, "gradient and point differ in length");
  }
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  GradCheckResult result;
  std::vector<double> x(point.begin(), point.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + step;
    const double up = f(x);
    x[i] = saved - step;
    const double down = f(x);
    x[i] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double scale = std::max({1.0, std::abs(analytic[i]), std::abs(numeric)});
    const double err = std::abs(analytic[i] - numeric) / scale;
    if (err > result.max_rel_error || !std::isfinite(err)) {
      result.max_rel_error = std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
      result.worst_coordinate = i;
      result.worst_analytic = analytic[i];
      result.worst_numeric = numeric;
    }
  }
  return result;
}

}  // namespace volclust
