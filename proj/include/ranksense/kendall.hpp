#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "ranksense/error.hpp"
#include "ranksense/ranking.hpp"

namespace ranksense {

/// Kendall's tau-b: (C - D) / sqrt((n0 - n1)(n0 - n2)) with n0 the number of
/// pairs and n1, n2 the pairs tied in x and in y. Equals tau-a without ties.
inline double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("kendall tau: rank vectors differ in length");
  const std::size_t n = x.size();
  std::int64_t concordant = 0, discordant = 0, tied_x = 0, tied_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int sx = (x[i] > x[j]) - (x[i] < x[j]);
      const int sy = (y[i] > y[j]) - (y[i] < y[j]);
      concordant += sx * sy > 0;
      discordant += sx * sy < 0;
      tied_x += sx == 0;
      tied_y += sy == 0;
    }
  }
  const auto pairs = static_cast<std::int64_t>(n * (n - 1) / 2);
  if (tied_x == pairs || tied_y == pairs) {
    throw TauUndefined("kendall tau undefined: one ranking has no untied pairs");
  }
  const double denom = std::sqrt(static_cast<double>((pairs - tied_x) * (pairs - tied_y)));
  return std::clamp(static_cast<double>(concordant - discordant) / denom, -1.0, 1.0);
}

/// Tau-b between two rankings of the same algorithm set, paired by name.
inline double kendall_tau(const Ranking& a, const Ranking& b) {
  if (a.entries.size() != b.entries.size()) {
    throw InputError("kendall tau: rankings cover different algorithm sets");
  }
  std::vector<double> x, y;
  for (const auto& e : a.entries) {
    const auto other = b.rank_of(e.algorithm);
    if (!other) throw InputError("kendall tau: algorithm '" + e.algorithm + "' missing from one ranking");
    x.push_back(e.rank);
    y.push_back(*other);
  }
  return kendall_tau_b(x, y);
}

}  // namespace ranksense
