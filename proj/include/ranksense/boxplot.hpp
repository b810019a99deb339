#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "ranksense/error.hpp"
#include "ranksense/percentile.hpp"

namespace ranksense {

/// Whisker anchors. `median`: largest observation <= median + 1.5 IQR and
/// smallest >= median - 1.5 IQR. `quartile`: the same fences around q3 / q1.
enum class WhiskerRule { median, quartile };

struct BoxplotSummary {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double lower_whisker = 0.0;
  double upper_whisker = 0.0;
  double mean = 0.0;
  std::vector<double> outliers;
};

/// Quartiles use the sorted linear-interpolation quantile rule. With the
/// median rule on skewed data a whisker may end inside the box.
inline BoxplotSummary boxplot_summary(std::span<const double> values,
                                      WhiskerRule rule = WhiskerRule::median) {
  if (values.empty()) throw InputError("boxplot of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  BoxplotSummary b;
  b.q1 = quantile_sorted(v, 0.25);
  b.median = quantile_sorted(v, 0.5);
  b.q3 = quantile_sorted(v, 0.75);
  b.iqr = b.q3 - b.q1;
  double sum = 0.0;
  for (double x : v) sum += x;
  b.mean = sum / static_cast<double>(v.size());

  const double upper_fence = (rule == WhiskerRule::median ? b.median : b.q3) + 1.5 * b.iqr;
  const double lower_fence = (rule == WhiskerRule::median ? b.median : b.q1) - 1.5 * b.iqr;
  // min <= upper fence and max >= lower fence, so both searches succeed.
  b.upper_whisker = *std::prev(std::upper_bound(v.begin(), v.end(), upper_fence));
  b.lower_whisker = *std::lower_bound(v.begin(), v.end(), lower_fence);
  for (double x : v)
    if (x < b.lower_whisker || x > b.upper_whisker) b.outliers.push_back(x);
  return b;
}

}  // namespace ranksense
