#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ranksense/error.hpp"
#include "ranksense/ranking.hpp"

namespace ranksense {

/// Samples up to this size get the exact null distribution.
inline constexpr std::size_t kWilcoxonExactLimit = 25;

struct WilcoxonResult {
  /// Sum of ranks of positive differences (first minus second).
  double statistic = 0.0;
  double w_minus = 0.0;
  std::size_t n_used = 0;
  std::size_t zeros_dropped = 0;
  double p_value = 1.0;
  bool exact = true;
  /// Every difference was zero; p is reported as 1.
  bool degenerate = false;
};

/// Two-sided Wilcoxon signed-rank test. Zero differences are dropped, tied
/// |differences| get fractional ranks. For n <= 25 the p-value counts sign
/// assignments whose W+ is at least as far from n(n+1)/4 as the observed
/// one; larger samples use the tie-corrected normal approximation with
/// continuity correction.
inline WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs) {
  if (pairs.empty()) throw InputError("wilcoxon: at least one pair is required");
  std::vector<double> diffs;
  WilcoxonResult r;
  for (const auto& [a, b] : pairs) {
    const double d = a - b;
    if (!std::isfinite(d)) throw InputError("wilcoxon: non-finite difference");
    if (d == 0.0) {
      ++r.zeros_dropped;
    } else {
      diffs.push_back(d);
    }
  }
  r.n_used = diffs.size();
  if (diffs.empty()) {
    r.degenerate = true;
    return r;
  }

  std::vector<double> magnitude(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) magnitude[i] = std::abs(diffs[i]);
  const auto ranks = assign_ranks(magnitude, Orientation::lower_better, TieMethod::fractional);
  for (std::size_t i = 0; i < diffs.size(); ++i) (diffs[i] > 0 ? r.statistic : r.w_minus) += ranks[i];

  const std::size_t n = diffs.size();
  const double nd = static_cast<double>(n);
  if (n <= kWilcoxonExactLimit) {
    // Fractional ranks are multiples of 1/2; count subset sums of doubled ranks.
    const auto total2 = static_cast<std::size_t>(n * (n + 1));
    std::vector<std::uint64_t> ways(total2 + 1, 0);
    ways[0] = 1;
    std::size_t reach = 0;
    for (double rk : ranks) {
      const auto r2 = static_cast<std::size_t>(std::lround(2.0 * rk));
      for (std::size_t s = reach + 1; s-- > 0;)
        if (ways[s] != 0) ways[s + r2] += ways[s];
      reach += r2;
    }
    const auto observed2 = static_cast<std::int64_t>(std::lround(2.0 * r.statistic));
    // |2 W+ - E[2 W+]| scaled by 2 to stay integral.
    const auto deviation = [&](std::int64_t s2) {
      return std::llabs(2 * s2 - static_cast<std::int64_t>(total2));
    };
    const auto threshold = deviation(observed2);
    std::uint64_t extreme = 0;
    for (std::size_t s = 0; s <= total2; ++s)
      if (ways[s] != 0 && deviation(static_cast<std::int64_t>(s)) >= threshold) extreme += ways[s];
    r.p_value = static_cast<double>(extreme) / std::ldexp(1.0, static_cast<int>(n));
    r.exact = true;
  } else {
    double tie_term = 0.0;
    std::vector<double> sorted(magnitude);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i + 1;
      while (j < n && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      i = j;
    }
    const double mean = nd * (nd + 1.0) / 4.0;
    const double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0;
    const double dev = std::max(0.0, std::abs(r.statistic - mean) - 0.5);
    r.p_value = var > 0.0 ? std::erfc(dev / std::sqrt(var) / std::sqrt(2.0)) : 1.0;
    r.exact = false;
  }
  r.p_value = std::min(1.0, r.p_value);
  return r;
}

}  // namespace ranksense
