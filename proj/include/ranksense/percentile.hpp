#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "ranksense/error.hpp"

namespace ranksense {

/// Quantile of an ascending-sorted sample: h = (n - 1) * q, linear
/// interpolation between the order statistics at floor(h) and ceil(h).
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InputError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("quantile level must lie in [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = static_cast<std::size_t>(std::ceil(h));
  if (lo == hi) return sorted[lo];
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, q);
}

}  // namespace ranksense
