#pragma once

// Pairwise definitions of AP and AU-ROC, quadratic on purpose.

#include <cstddef>
#include <vector>

namespace oracle {

/// Rank of i: events scored higher, plus equal-scored events earlier in the
/// stream, plus one.
inline double brute_ap(const std::vector<int>& y, const std::vector<double>& p) {
  const std::size_t n = y.size();
  double total = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] != 1) continue;
    ++positives;
    std::size_t rank = 1, hits = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (p[j] > p[i] || (p[j] == p[i] && j < i)) {
        ++rank;
        hits += y[j] == 1 ? 1 : 0;
      }
    }
    total += static_cast<double>(hits) / static_cast<double>(rank);
  }
  return total / static_cast<double>(positives);
}

inline double brute_auroc(const std::vector<int>& y, const std::vector<double>& p) {
  double credit = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1.0;
      credit += p[i] > p[j] ? 1.0 : (p[i] == p[j] ? 0.5 : 0.0);
    }
  }
  return credit / pairs;
}

}  // namespace oracle
