#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ranksense/error.hpp"
#include "ranksense/ranking.hpp"
#include "ranksense/result_table.hpp"

namespace ranksense {

struct AuditFinding {
  std::string algorithm;
  std::optional<double> original_rank;
  /// nullopt when the algorithm has no values left after the removal.
  std::optional<double> audited_rank;
  std::size_t dropped_cases = 0;
  bool reached_rank_1 = false;
  bool fully_degenerate = false;
};

/// What-if audit of ignore-missing aggregation: for each algorithm alone,
/// withhold its results below `threshold` and re-rank. The input table is
/// not modified.
inline std::vector<AuditFinding> missing_data_audit(const ResultTable& table, const RankingScheme& scheme,
                                                    double threshold = 0.5) {
  if (scheme.is_composite() || scheme.family != Family::metric_based ||
      scheme.missing != MissingPolicy::ignore) {
    throw PreconditionError(
        "missing-data audit requires a single-metric, metric-based scheme that ignores missing values");
  }
  const auto metric = table.require_metric(scheme.metric_id);
  if (table.metrics()[metric].orientation != Orientation::higher_better) {
    throw PreconditionError("missing-data audit requires a higher-better metric");
  }

  const auto original = rank(table, scheme);
  std::vector<AuditFinding> findings;
  for (std::size_t a = 0; a < table.algorithms().size(); ++a) {
    AuditFinding f;
    f.algorithm = table.algorithms()[a];
    f.original_rank = original.rank_of(f.algorithm);
    const auto audited = table.without_values([&](std::size_t alg, std::size_t, std::size_t m, double v) {
      return alg == a && m == metric && v < threshold;
    });
    for (std::size_t c = 0; c < table.cases().size(); ++c)
      if (table.value(a, c, metric) && !audited.value(a, c, metric)) ++f.dropped_cases;
    f.audited_rank = rank(audited, scheme).rank_of(f.algorithm);
    f.fully_degenerate = !f.audited_rank.has_value();
    f.reached_rank_1 = f.audited_rank == 1.0;
    findings.push_back(std::move(f));
  }
  return findings;
}

}  // namespace ranksense
