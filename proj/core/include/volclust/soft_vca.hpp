#pragma once

// Differentiable relaxation of the volatility-cluster statistic.
//
// The hard nearest-neighbour distance is replaced by the log-sum-exp soft
// minimum
//
//   d_soft(e, E) = -log( sum_{e' != e} exp(-beta |t_e - t_e'|) ) / beta,
//
// which satisfies d_min - log(n - 1) / beta <= d_soft <= d_min and tends to
// d_min as beta grows. The weighted form scales each neighbour term by a
// membership weight w_e' in [0, 1]; binary weights recover d_soft on the
// weight-1 subset, which is how the penalty becomes differentiable with
// respect to model scores.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace volclust {

struct SoftConfig {
  double beta = 1.0;
  double gamma = 0.1;
  bool scale_adaptive_beta = true;
  double target_sharpness = 5.0;

  /// target_sharpness / median positive gap of `sorted_times` when adaptive,
  /// falling back to `beta` when no positive gap exists.
  double effective_beta(std::span<const double> sorted_times) const;
};

/// Median of the strictly positive consecutive gaps; 0 if there are none.
double median_positive_gap(std::span<const double> sorted_times);

/// Soft nearest-neighbour distance of times[self] to the other entries.
/// Throws InsufficientSet if there is no other entry.
double soft_nn_distance(std::span<const double> times, std::size_t self,
                        double beta);

/// Gradient of soft_nn_distance with respect to every entry of `times`;
/// element `self` is the derivative with respect to t_e. sign(0) = 0.
std::vector<double> soft_nn_gradient(std::span<const double> times,
                                     std::size_t self, double beta);

/// Soft T with unit weights: mean soft distance of random times to the set
/// over mean soft nearest-other distance within the set. Order-independent.
double soft_t(std::span<const double> times,
              std::span<const double> random_times, double beta);

struct SoftTrial {
  double d_r_soft = 0.0;
  double d_disg_soft = 0.0;
  double t_soft = 0.0;
  std::vector<double> grad_weights;  // d t_soft / d w_i
};

/// Weighted soft T over `times` (sorted ascending) with weights in [0, 1].
///
///   d_w(x)  = -log( sum_{e' != x} w_e' exp(-beta |t_x - t_e'|) ) / beta
///   D_disg  = sum_e w_e d_w(e) / sum_e w_e
///   D_r     = mean over random times r of d_w(r)
///   t_soft  = D_r / (D_r + D_disg)
///
/// Runs in O((n + r) log r) via exponential-kernel recurrences evaluated in
/// the log domain. Throws AllZeroWeights, InsufficientSet (fewer than two
/// positive weights), or DegenerateDistances (D_r + D_disg <= 0).
SoftTrial weighted_soft_t(std::span<const double> times,
                          std::span<const double> weights,
                          std::span<const double> random_times, double beta);

struct PenaltyValue {
  double value = 0.0;
  double derivative = 0.0;  // with respect to t_soft
};

/// gamma * (1/2 - t_soft)^2 and its derivative.
PenaltyValue vca_penalty(double t_soft, double gamma);

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_coordinate = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

/// Compares `analytic` against central differences of `f` at `point`.
/// Per-coordinate error is |a - n| / max(1, |a|, |n|), relative for
/// gradients of magnitude above one and absolute below.
GradCheckResult finite_difference_check(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> point, std::span<const double> analytic,
    double step);

}  // namespace volclust
