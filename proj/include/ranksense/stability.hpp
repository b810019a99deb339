#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ranksense/error.hpp"
#include "ranksense/kendall.hpp"
#include "ranksense/ranking.hpp"
#include "ranksense/resampling.hpp"
#include "ranksense/result_table.hpp"
#include "ranksense/wilcoxon.hpp"

namespace ranksense {

// -- task eligibility -------------------------------------------------------

struct InclusionCriterion {
  std::string id;
  std::string description;
  std::size_t observed = 0;
  bool satisfied = false;
};

struct Eligibility {
  bool eligible = false;
  std::vector<InclusionCriterion> criteria;

  [[nodiscard]] std::vector<std::string> violated() const {
    std::vector<std::string> out;
    for (const auto& c : criteria)
      if (!c.satisfied) out.push_back(c.description);
    return out;
  }
};

/// A task qualifies for resampling analyses with at least 3 algorithms and
/// more than one test case.
inline Eligibility inclusion_check(const ResultTable& table) {
  const auto algorithms = table.algorithms().size();
  const auto cases = table.cases().size();
  Eligibility e;
  e.criteria = {{"min-algorithms", "Number of algorithms >= 3", algorithms, algorithms >= 3},
                {"min-test-cases", "Number of test cases > 1", cases, cases > 1}};
  e.eligible = e.criteria[0].satisfied && e.criteria[1].satisfied;
  return e;
}

inline void require_eligible(const ResultTable& table) {
  const auto e = inclusion_check(table);
  if (e.eligible) return;
  std::string msg = "task fails inclusion criteria:";
  for (const auto& c : e.criteria)
    if (!c.satisfied) msg += " [" + c.description + ", observed " + std::to_string(c.observed) + "]";
  throw PreconditionError(msg);
}

// -- winner stability ---------------------------------------------------------

struct BootstrapConfig {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  /// Non-winners at rank 1 in at least this fraction of resamples count as usurpers.
  double usurper_threshold = 0.01;
  /// Worker threads (0 = hardware concurrency). Results do not depend on it.
  unsigned threads = 0;
};

struct AlgorithmFrequency {
  std::string algorithm;
  std::size_t rank1_count = 0;
  double rank1_frequency = 0.0;
  bool usurper = false;
};

struct StabilityReport {
  std::string method;
  Ranking original;
  std::vector<std::string> original_winners;
  bool excluded = false;
  std::string exclusion_reason;
  std::size_t resamples = 0;
  double usurper_threshold = 0.0;
  /// Fraction of resamples in which the original winner holds rank 1.
  double winner_stability = 0.0;
  /// Fraction of originally non-winning algorithms that count as usurpers.
  double usurper_fraction = 0.0;
  std::vector<AlgorithmFrequency> frequencies;
  /// Tau-b of each resample ranking against the original, over the
  /// algorithms ranked in both; nullopt where undefined.
  std::vector<std::optional<double>> tau;
  /// Distinct cases in each resample as a fraction of all cases.
  std::vector<double> distinct_fraction;
  double mean_distinct_fraction = 0.0;
};

namespace detail {

struct ResampleOutcome {
  std::vector<bool> at_rank1;  // indexed like table.algorithms()
  std::optional<double> tau;
  double distinct = 0.0;
};

inline std::optional<double> tau_on_common(const Ranking& original, const Ranking& resample) {
  std::vector<double> x, y;
  for (const auto& e : original.entries)
    if (const auto r = resample.rank_of(e.algorithm)) {
      x.push_back(e.rank);
      y.push_back(*r);
    }
  if (x.size() < 2) return std::nullopt;
  try {
    return kendall_tau_b(x, y);
  } catch (const TauUndefined&) {
    return std::nullopt;
  }
}

/// Original ranking and its single winner, or an excluded report.
inline std::optional<std::size_t> prepare(const ResultTable& table, const RankingScheme& scheme,
                                          StabilityReport& report) {
  report.original = rank(table, scheme);
  report.original_winners = report.original.winners();
  if (report.original_winners.size() != 1) {
    report.excluded = true;
    report.exclusion_reason = report.original_winners.empty()
                                  ? "no algorithm could be ranked"
                                  : "multiple winners in the original ranking";
    return std::nullopt;
  }
  return table.algorithm_index(report.original_winners.front());
}

template <typename Draw>
void run_resamples(const ResultTable& table, const RankingScheme& scheme, std::size_t winner,
                   std::size_t count, unsigned threads, Draw draw, StabilityReport& report) {
  const std::size_t n_alg = table.algorithms().size();
  std::vector<ResampleOutcome> outcomes(count);
  parallel_for(count, threads, [&](std::size_t i) {
    const auto cases = draw(i);
    const auto r = rank(table, scheme, cases);
    ResampleOutcome out;
    out.at_rank1.assign(n_alg, false);
    for (const auto& e : r.entries)
      if (e.rank == 1.0) out.at_rank1[*table.algorithm_index(e.algorithm)] = true;
    out.tau = tau_on_common(report.original, r);
    out.distinct = distinct_fraction(cases, table.cases().size());
    outcomes[i] = std::move(out);
  });

  report.resamples = count;
  std::vector<std::size_t> hits(n_alg, 0);
  double distinct_sum = 0.0;
  for (const auto& o : outcomes) {
    for (std::size_t a = 0; a < n_alg; ++a) hits[a] += o.at_rank1[a];
    report.tau.push_back(o.tau);
    report.distinct_fraction.push_back(o.distinct);
    distinct_sum += o.distinct;
  }
  report.mean_distinct_fraction = count ? distinct_sum / static_cast<double>(count) : 0.0;
  report.winner_stability = count ? static_cast<double>(hits[winner]) / static_cast<double>(count) : 0.0;

  std::size_t usurpers = 0;
  for (std::size_t a = 0; a < n_alg; ++a) {
    AlgorithmFrequency f{table.algorithms()[a], hits[a],
                         count ? static_cast<double>(hits[a]) / static_cast<double>(count) : 0.0, false};
    f.usurper = a != winner && hits[a] > 0 && f.rank1_frequency >= report.usurper_threshold;
    usurpers += f.usurper;
    report.frequencies.push_back(std::move(f));
  }
  report.usurper_fraction =
      n_alg > 1 ? static_cast<double>(usurpers) / static_cast<double>(n_alg - 1) : 0.0;
}

}  // namespace detail

/// Re-ranks `samples` case resamples drawn with replacement. Resample i
/// depends only on (seed, i); the report is identical for any thread count.
inline StabilityReport bootstrap_stability(const ResultTable& table, const RankingScheme& scheme,
                                           const BootstrapConfig& cfg) {
  if (cfg.samples < 1) throw InputError("bootstrap needs at least one sample");
  require_eligible(table);
  StabilityReport report;
  report.method = "bootstrap";
  report.usurper_threshold = cfg.usurper_threshold;
  const auto winner = detail::prepare(table, scheme, report);
  if (!winner) return report;
  const std::size_t n = table.cases().size();
  detail::run_resamples(table, scheme, *winner, cfg.samples, cfg.threads,
                        [&](std::size_t i) { return bootstrap_draw(n, cfg.seed, i); }, report);
  return report;
}

/// One ranking per omitted case. By default any rank-1 appearance makes a
/// non-winner an usurper.
inline StabilityReport leave_one_out_stability(const ResultTable& table, const RankingScheme& scheme,
                                               double usurper_threshold = 0.0, unsigned threads = 1) {
  const std::size_t n = table.cases().size();
  if (n < 2) throw PreconditionError("leave-one-out needs at least 2 test cases");
  StabilityReport report;
  report.method = "leave-one-out";
  report.usurper_threshold = usurper_threshold;
  const auto winner = detail::prepare(table, scheme, report);
  if (!winner) return report;
  detail::run_resamples(table, scheme, *winner, n, threads,
                        [&](std::size_t omitted) {
                          std::vector<std::size_t> cases;
                          for (std::size_t c = 0; c < n; ++c)
                            if (c != omitted) cases.push_back(c);
                          return cases;
                        },
                        report);
  return report;
}

// -- scheme comparison ----------------------------------------------------------

inline constexpr double kSignificanceLevel = 0.05;

struct TaskPair {
  std::size_t task = 0;
  bool eligible = false;
  std::string reason;
  double stability_a = 0.0;
  double stability_b = 0.0;
};

struct SchemeComparison {
  RankingScheme scheme_a;
  RankingScheme scheme_b;
  std::vector<TaskPair> tasks;
  WilcoxonResult test;
  bool significant = false;
  bool degenerate = false;
};

/// Paired winner stability of two schemes over the same bootstrap draws,
/// compared with a two-sided Wilcoxon signed-rank test. Tasks failing the
/// inclusion criteria or with multiple original winners under either
/// scheme are recorded and left out of the test.
inline SchemeComparison compare_scheme_stability(std::span<const ResultTable> tasks,
                                                 const RankingScheme& scheme_a,
                                                 const RankingScheme& scheme_b,
                                                 const BootstrapConfig& cfg) {
  SchemeComparison out{scheme_a, scheme_b, {}, {}, false, false};
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    TaskPair tp;
    tp.task = t;
    const auto e = inclusion_check(tasks[t]);
    if (!e.eligible) {
      tp.reason = "fails inclusion criteria: " + e.violated().front();
    } else {
      const auto a = bootstrap_stability(tasks[t], scheme_a, cfg);
      const auto b = bootstrap_stability(tasks[t], scheme_b, cfg);
      if (a.excluded || b.excluded) {
        tp.reason = "excluded: " + (a.excluded ? a.exclusion_reason : b.exclusion_reason);
      } else {
        tp.eligible = true;
        tp.stability_a = a.winner_stability;
        tp.stability_b = b.winner_stability;
        pairs.emplace_back(tp.stability_a, tp.stability_b);
      }
    }
    out.tasks.push_back(std::move(tp));
  }
  if (pairs.size() < 2) {
    throw PreconditionError("scheme comparison needs at least 2 eligible tasks, found " +
                            std::to_string(pairs.size()));
  }
  out.test = wilcoxon_signed_rank(pairs);
  out.degenerate = out.test.degenerate;
  out.significant = !out.degenerate && out.test.p_value < kSignificanceLevel;
  return out;
}

}  // namespace ranksense
