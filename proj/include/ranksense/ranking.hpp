#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ranksense/error.hpp"
#include "ranksense/result_table.hpp"

namespace ranksense {

enum class Family { metric_based, case_based };
enum class Aggregator { mean, median };
enum class TieMethod { min_competition, fractional };
enum class MissingPolicy { ignore, worst_value, last_rank, reject };

/// How a ranking is produced. When `composite_metrics` is non-empty the
/// family selects the composite form: metric-based sums orientation-
/// normalised per-metric aggregates, case-based averages per-metric ranks
/// within each case before ranking.
struct RankingScheme {
  Family family = Family::metric_based;
  Aggregator op = Aggregator::mean;
  std::string metric_id = "DSC";
  std::vector<std::string> composite_metrics;
  /// Ties in the presented (final) ranking.
  TieMethod ties = TieMethod::min_competition;
  /// Ties in per-case intermediate rankings.
  TieMethod case_ties = TieMethod::fractional;
  MissingPolicy missing = MissingPolicy::ignore;

  [[nodiscard]] bool is_composite() const noexcept { return !composite_metrics.empty(); }

  friend bool operator==(const RankingScheme&, const RankingScheme&) = default;
};

struct RankEntry {
  std::string algorithm;
  double score = 0.0;
  double rank = 0.0;
};

struct Exclusion {
  std::string algorithm;
  std::string reason;
};

struct Ranking {
  RankingScheme scheme;
  Orientation score_orientation = Orientation::higher_better;
  /// Table algorithm order; excluded algorithms are listed in `excluded` only.
  std::vector<RankEntry> entries;
  std::vector<Exclusion> excluded;

  [[nodiscard]] const RankEntry* find(std::string_view algorithm) const {
    for (const auto& e : entries)
      if (e.algorithm == algorithm) return &e;
    return nullptr;
  }

  [[nodiscard]] std::optional<double> rank_of(std::string_view algorithm) const {
    if (const auto* e = find(algorithm)) return e->rank;
    return std::nullopt;
  }

  [[nodiscard]] std::vector<std::string> winners() const {
    std::vector<std::string> out;
    for (const auto& e : entries)
      if (e.rank == 1.0) out.push_back(e.algorithm);
    return out;
  }
};

// -- names ------------------------------------------------------------------

inline std::string_view to_string(Family f) {
  return f == Family::metric_based ? "metric-based" : "case-based";
}
inline std::string_view to_string(Aggregator a) { return a == Aggregator::mean ? "mean" : "median"; }
inline std::string_view to_string(TieMethod t) {
  return t == TieMethod::min_competition ? "min-competition" : "fractional";
}
inline std::string_view to_string(Orientation o) {
  return o == Orientation::higher_better ? "higher-better" : "lower-better";
}
inline std::string_view to_string(MissingPolicy m) {
  switch (m) {
    case MissingPolicy::ignore: return "ignore";
    case MissingPolicy::worst_value: return "worst-value";
    case MissingPolicy::last_rank: return "last-rank";
    case MissingPolicy::reject: return "reject";
  }
  return "";
}

template <typename Enum>
Enum parse_enum(std::string_view text);

namespace detail {
template <typename Enum, std::size_t N>
Enum parse_from(std::string_view text, const Enum (&choices)[N], std::string_view what) {
  for (auto c : choices)
    if (to_string(c) == text) return c;
  throw InputError("unknown " + std::string(what) + " '" + std::string(text) + "'");
}
}  // namespace detail

template <>
inline Family parse_enum<Family>(std::string_view t) {
  return detail::parse_from(t, {Family::metric_based, Family::case_based}, "aggregation family");
}
template <>
inline Aggregator parse_enum<Aggregator>(std::string_view t) {
  return detail::parse_from(t, {Aggregator::mean, Aggregator::median}, "aggregation operator");
}
template <>
inline TieMethod parse_enum<TieMethod>(std::string_view t) {
  return detail::parse_from(t, {TieMethod::min_competition, TieMethod::fractional}, "tie method");
}
template <>
inline Orientation parse_enum<Orientation>(std::string_view t) {
  return detail::parse_from(t, {Orientation::higher_better, Orientation::lower_better}, "orientation");
}
template <>
inline MissingPolicy parse_enum<MissingPolicy>(std::string_view t) {
  return detail::parse_from(t,
                            {MissingPolicy::ignore, MissingPolicy::worst_value,
                             MissingPolicy::last_rank, MissingPolicy::reject},
                            "missing-data policy");
}

// -- primitives ---------------------------------------------------------------

/// Mean, or median (mean of the two middle elements for even length).
inline double aggregate(std::span<const double> values, Aggregator op) {
  if (values.empty()) throw AggregationUndefined("aggregation over an empty list of values");
  if (op == Aggregator::mean) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  return n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

/// Better score → smaller rank. Tied scores share min-competition rank
/// (1,2,2,4) or the mean of the positions they occupy (1,2.5,2.5,4).
inline std::vector<double> assign_ranks(std::span<const double> scores, Orientation orientation,
                                        TieMethod ties) {
  for (double s : scores)
    if (!std::isfinite(s)) throw InputError("cannot rank a non-finite score");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  const bool higher = orientation == Orientation::higher_better;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return higher ? scores[i] > scores[j] : scores[i] < scores[j];
  });
  std::vector<double> ranks(scores.size());
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start + 1;
    while (end < order.size() && scores[order[end]] == scores[order[start]]) ++end;
    const double rank = ties == TieMethod::min_competition
                            ? static_cast<double>(start + 1)
                            : (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t k = start; k < end; ++k) ranks[order[k]] = rank;
    start = end;
  }
  return ranks;
}

inline std::vector<std::size_t> all_cases(const ResultTable& table) {
  std::vector<std::size_t> cases(table.cases().size());
  std::iota(cases.begin(), cases.end(), 0);
  return cases;
}

// -- ranking ------------------------------------------------------------------

namespace detail {

inline void validate_scheme(const ResultTable& table, const RankingScheme& scheme) {
  const std::vector<std::string> ids =
      scheme.is_composite() ? scheme.composite_metrics : std::vector{scheme.metric_id};
  for (const auto& id : ids) {
    const auto& spec = table.metrics()[table.require_metric(id)];
    if (scheme.missing == MissingPolicy::worst_value && !spec.worst_value) {
      throw InputError("worst-value policy requires a worst value for metric '" + id + "'");
    }
  }
  if (scheme.missing == MissingPolicy::last_rank && scheme.family != Family::case_based) {
    throw InputError("last-rank policy is only valid for case-based aggregation");
  }
}

struct PerAlgorithm {
  std::vector<std::optional<double>> score;  // nullopt = excluded
  std::vector<std::string> reason;
};

/// Algorithms with any missing value of `metric` over the selected cases.
inline std::vector<bool> has_missing(const ResultTable& table, std::size_t metric,
                                     std::span<const std::size_t> cases) {
  std::vector<bool> out(table.algorithms().size(), false);
  for (std::size_t a = 0; a < out.size(); ++a)
    for (auto c : cases)
      if (!table.value(a, c, metric)) out[a] = true;
  return out;
}

/// Per-algorithm aggregate of one metric under the scheme's missing policy.
inline PerAlgorithm aggregate_metric(const ResultTable& table, std::size_t metric,
                                     const RankingScheme& scheme, std::span<const std::size_t> cases) {
  const auto& spec = table.metrics()[metric];
  const std::size_t n = table.algorithms().size();
  PerAlgorithm out{std::vector<std::optional<double>>(n), std::vector<std::string>(n)};
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<double> values;
    bool missing = false;
    for (auto c : cases) {
      if (const auto& v = table.value(a, c, metric)) {
        values.push_back(*v);
      } else {
        missing = true;
        if (scheme.missing == MissingPolicy::worst_value) values.push_back(*spec.worst_value);
      }
    }
    if (missing && scheme.missing == MissingPolicy::reject) {
      out.reason[a] = "rejected: missing value(s) for metric " + spec.id;
    } else if (values.empty()) {
      out.reason[a] = "AggregationUndefined: no usable values for metric " + spec.id;
    } else {
      out.score[a] = aggregate(values, scheme.op);
    }
  }
  return out;
}

/// Ranks of the participating algorithms on one case for one metric.
/// Missing values: ignore → unranked; worst-value → substituted;
/// last-rank → tied below every present algorithm.
inline std::vector<std::optional<double>> case_ranks(const ResultTable& table, std::size_t metric,
                                                     std::size_t kase, const std::vector<bool>& active,
                                                     const RankingScheme& scheme) {
  const auto& spec = table.metrics()[metric];
  std::vector<std::size_t> present, absent;
  std::vector<double> values;
  for (std::size_t a = 0; a < active.size(); ++a) {
    if (!active[a]) continue;
    if (const auto& v = table.value(a, kase, metric)) {
      present.push_back(a);
      values.push_back(*v);
    } else if (scheme.missing == MissingPolicy::worst_value) {
      present.push_back(a);
      values.push_back(*spec.worst_value);
    } else {
      absent.push_back(a);
    }
  }
  std::vector<std::optional<double>> out(active.size());
  const auto ranks = assign_ranks(values, spec.orientation, scheme.case_ties);
  for (std::size_t i = 0; i < present.size(); ++i) out[present[i]] = ranks[i];
  if (scheme.missing == MissingPolicy::last_rank && !absent.empty()) {
    const double first = static_cast<double>(present.size() + 1);
    const double rank = scheme.case_ties == TieMethod::min_competition
                            ? first
                            : first + static_cast<double>(absent.size() - 1) / 2.0;
    for (auto a : absent) out[a] = rank;
  }
  return out;
}

/// Aggregates accumulated per-case ranks and applies the final ranking.
inline Ranking finish(const ResultTable& table, const RankingScheme& scheme, Orientation orientation,
                      const PerAlgorithm& per) {
  Ranking r;
  r.scheme = scheme;
  r.score_orientation = orientation;
  std::vector<double> scores;
  for (std::size_t a = 0; a < per.score.size(); ++a) {
    if (per.score[a]) {
      r.entries.push_back({table.algorithms()[a], *per.score[a], 0.0});
      scores.push_back(*per.score[a]);
    } else {
      r.excluded.push_back({table.algorithms()[a], per.reason[a]});
    }
  }
  const auto ranks = assign_ranks(scores, orientation, scheme.ties);
  for (std::size_t i = 0; i < ranks.size(); ++i) r.entries[i].rank = ranks[i];
  return r;
}

inline PerAlgorithm aggregate_case_ranks(const std::vector<std::vector<double>>& ranks,
                                         const std::vector<std::string>& rejected_reason,
                                         Aggregator op) {
  PerAlgorithm out{std::vector<std::optional<double>>(ranks.size()), rejected_reason};
  for (std::size_t a = 0; a < ranks.size(); ++a) {
    if (!out.reason[a].empty()) continue;
    if (ranks[a].empty()) {
      out.reason[a] = "AggregationUndefined: no ranked cases";
    } else {
      out.score[a] = aggregate(ranks[a], op);
    }
  }
  return out;
}

}  // namespace detail

/// Aggregate per algorithm over cases, then rank the aggregates.
inline Ranking rank_metric_based(const ResultTable& table, const RankingScheme& scheme,
                                 std::span<const std::size_t> cases) {
  if (scheme.family != Family::metric_based || scheme.is_composite()) {
    throw InputError("rank_metric_based requires a single-metric metric-based scheme");
  }
  detail::validate_scheme(table, scheme);
  const auto m = table.require_metric(scheme.metric_id);
  return detail::finish(table, scheme, table.metrics()[m].orientation,
                        detail::aggregate_metric(table, m, scheme, cases));
}

/// Rank per case, aggregate the case ranks, then rank the aggregates.
inline Ranking rank_case_based(const ResultTable& table, const RankingScheme& scheme,
                               std::span<const std::size_t> cases) {
  if (scheme.family != Family::case_based || scheme.is_composite()) {
    throw InputError("rank_case_based requires a single-metric case-based scheme");
  }
  detail::validate_scheme(table, scheme);
  const auto m = table.require_metric(scheme.metric_id);
  const std::size_t n = table.algorithms().size();

  std::vector<bool> active(n, true);
  std::vector<std::string> reason(n);
  if (scheme.missing == MissingPolicy::reject) {
    const auto missing = detail::has_missing(table, m, cases);
    for (std::size_t a = 0; a < n; ++a)
      if (missing[a]) {
        active[a] = false;
        reason[a] = "rejected: missing value(s) for metric " + scheme.metric_id;
      }
  }
  std::vector<std::vector<double>> ranks(n);
  for (auto c : cases) {
    const auto per_case = detail::case_ranks(table, m, c, active, scheme);
    for (std::size_t a = 0; a < n; ++a)
      if (per_case[a]) ranks[a].push_back(*per_case[a]);
  }
  return detail::finish(table, scheme, Orientation::lower_better,
                        detail::aggregate_case_ranks(ranks, reason, scheme.op));
}

/// Composite rankings over several metrics (a single listed metric is the
/// degenerate composite).
///  metric-based: aggregate each metric per algorithm, negate lower-better
///    aggregates, sum, rank (higher sum is better).
///  case-based: within each case, average each algorithm's per-metric ranks
///    into a score, rank the scores, aggregate the case ranks, rank.
inline Ranking rank_multi_metric(const ResultTable& table, const RankingScheme& scheme,
                                 std::span<const std::size_t> cases) {
  if (!scheme.is_composite()) throw InputError("rank_multi_metric requires composite metrics");
  detail::validate_scheme(table, scheme);
  const std::size_t n = table.algorithms().size();
  std::vector<std::size_t> metrics;
  for (const auto& id : scheme.composite_metrics) metrics.push_back(table.require_metric(id));

  if (scheme.family == Family::metric_based) {
    detail::PerAlgorithm sum{std::vector<std::optional<double>>(n, 0.0), std::vector<std::string>(n)};
    for (auto m : metrics) {
      const auto per = detail::aggregate_metric(table, m, scheme, cases);
      const bool negate = table.metrics()[m].orientation == Orientation::lower_better;
      for (std::size_t a = 0; a < n; ++a) {
        if (!sum.score[a]) continue;
        if (!per.score[a]) {
          sum.score[a].reset();
          sum.reason[a] = per.reason[a];
        } else {
          *sum.score[a] += negate ? -*per.score[a] : *per.score[a];
        }
      }
    }
    return detail::finish(table, scheme, Orientation::higher_better, sum);
  }

  std::vector<bool> active(n, true);
  std::vector<std::string> reason(n);
  if (scheme.missing == MissingPolicy::reject) {
    for (std::size_t i = 0; i < metrics.size(); ++i) {
      const auto missing = detail::has_missing(table, metrics[i], cases);
      for (std::size_t a = 0; a < n; ++a)
        if (missing[a] && active[a]) {
          active[a] = false;
          reason[a] = "rejected: missing value(s) for metric " + scheme.composite_metrics[i];
        }
    }
  }
  std::vector<std::vector<double>> ranks(n);
  for (auto c : cases) {
    std::vector<double> total(n, 0.0);
    std::vector<std::size_t> count(n, 0);
    for (auto m : metrics) {
      const auto per_metric = detail::case_ranks(table, m, c, active, scheme);
      for (std::size_t a = 0; a < n; ++a)
        if (per_metric[a]) {
          total[a] += *per_metric[a];
          ++count[a];
        }
    }
    std::vector<std::size_t> present;
    std::vector<double> scores;
    for (std::size_t a = 0; a < n; ++a)
      if (count[a] > 0) {
        present.push_back(a);
        scores.push_back(total[a] / static_cast<double>(count[a]));
      }
    const auto case_rank = assign_ranks(scores, Orientation::lower_better, scheme.case_ties);
    for (std::size_t i = 0; i < present.size(); ++i) ranks[present[i]].push_back(case_rank[i]);
  }
  return detail::finish(table, scheme, Orientation::lower_better,
                        detail::aggregate_case_ranks(ranks, reason, scheme.op));
}

/// Dispatches on the scheme. `cases` may repeat indices (bootstrap draws).
inline Ranking rank(const ResultTable& table, const RankingScheme& scheme,
                    std::span<const std::size_t> cases) {
  if (scheme.is_composite()) return rank_multi_metric(table, scheme, cases);
  return scheme.family == Family::metric_based ? rank_metric_based(table, scheme, cases)
                                               : rank_case_based(table, scheme, cases);
}

inline Ranking rank(const ResultTable& table, const RankingScheme& scheme) {
  return rank(table, scheme, all_cases(table));
}

}  // namespace ranksense
