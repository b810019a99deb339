#pragma once

// JSON report documents and flat plot-data tables. Every real number goes
// through round9 so the JSON value and its CSV rendering (format9) denote
// the same double.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ranksense/audit.hpp"
#include "ranksense/boxplot.hpp"
#include "ranksense/challenge_description.hpp"
#include "ranksense/format.hpp"
#include "ranksense/observers.hpp"
#include "ranksense/ranking.hpp"
#include "ranksense/seg_metrics.hpp"
#include "ranksense/stability.hpp"
#include "ranksense/table_csv.hpp"

namespace ranksense {

inline constexpr const char* kToolName = "ranksense";
inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

inline Json num(double v) { return round9(v); }

inline Json num(const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); }

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
inline std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::uint64_t h = 14695981039346656037ull;
  for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
    h ^= static_cast<unsigned char>(*it);
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Json input_entry(const std::filesystem::path& path) {
  return {{"path", path.generic_string()}, {"fnv1a64", file_digest(path)}};
}

/// Report skeleton: tool identity, inputs, configuration echo, payload.
inline Json make_report(const std::string& command, Json inputs, Json config, Json result) {
  Json r;
  r["tool"] = kToolName;
  r["version"] = kToolVersion;
  r["command"] = command;
  r["inputs"] = std::move(inputs);
  r["config"] = std::move(config);
  r["result"] = std::move(result);
  return r;
}

inline Json to_json(const RankingScheme& s) {
  Json j;
  j["family"] = to_string(s.family);
  j["operator"] = to_string(s.op);
  if (s.is_composite()) {
    j["composite_metrics"] = s.composite_metrics;
    j["composite_rule"] = s.family == Family::metric_based
                              ? "sum of per-metric aggregates, lower-better metrics negated"
                              : "per-case mean of per-metric ranks";
  } else {
    j["metric"] = s.metric_id;
  }
  j["ties"] = to_string(s.ties);
  j["case_ties"] = to_string(s.case_ties);
  j["missing"] = to_string(s.missing);
  return j;
}

inline Json to_json(const Ranking& r) {
  Json j;
  j["scheme"] = to_json(r.scheme);
  j["score_orientation"] = to_string(r.score_orientation);
  j["entries"] = Json::array();
  for (const auto& e : r.entries)
    j["entries"].push_back({{"algorithm", e.algorithm}, {"score", num(e.score)}, {"rank", num(e.rank)}});
  j["excluded"] = Json::array();
  for (const auto& e : r.excluded) j["excluded"].push_back({{"algorithm", e.algorithm}, {"reason", e.reason}});
  j["winners"] = r.winners();
  return j;
}

inline Json to_json(const BoxplotSummary& b) {
  Json outliers = Json::array();
  for (double v : b.outliers) outliers.push_back(num(v));
  return {{"median", num(b.median)},
          {"q1", num(b.q1)},
          {"q3", num(b.q3)},
          {"iqr", num(b.iqr)},
          {"lower_whisker", num(b.lower_whisker)},
          {"upper_whisker", num(b.upper_whisker)},
          {"mean", num(b.mean)},
          {"outliers", outliers}};
}

inline Json to_json(const Eligibility& e) {
  Json criteria = Json::array();
  for (const auto& c : e.criteria)
    criteria.push_back({{"id", c.id}, {"criterion", c.description}, {"observed", c.observed},
                        {"satisfied", c.satisfied}});
  return {{"eligible", e.eligible}, {"criteria", criteria}};
}

inline Json to_json(const StabilityReport& s, WhiskerRule whiskers = WhiskerRule::median) {
  Json j;
  j["method"] = s.method;
  j["original_ranking"] = to_json(s.original);
  j["original_winners"] = s.original_winners;
  j["excluded"] = s.excluded;
  if (s.excluded) {
    j["exclusion_reason"] = s.exclusion_reason;
    return j;
  }
  j["resamples"] = s.resamples;
  j["usurper_threshold"] = num(s.usurper_threshold);
  j["winner_stability"] = num(s.winner_stability);
  j["usurper_fraction"] = num(s.usurper_fraction);
  j["rank1_frequency"] = Json::array();
  for (const auto& f : s.frequencies)
    j["rank1_frequency"].push_back({{"algorithm", f.algorithm}, {"count", f.rank1_count},
                                    {"frequency", num(f.rank1_frequency)}, {"usurper", f.usurper}});
  j["mean_distinct_case_fraction"] = num(s.mean_distinct_fraction);
  Json tau = Json::array();
  std::vector<double> defined;
  for (const auto& t : s.tau) {
    tau.push_back(num(t));
    if (t) defined.push_back(*t);
  }
  j["tau"] = tau;
  j["tau_summary"] = defined.empty() ? Json(nullptr) : to_json(boxplot_summary(defined, whiskers));
  return j;
}

inline Json to_json(const WilcoxonResult& w) {
  return {{"statistic_w_plus", num(w.statistic)},
          {"w_minus", num(w.w_minus)},
          {"n_used", w.n_used},
          {"zeros_dropped", w.zeros_dropped},
          {"p_value", num(w.p_value)},
          {"method", w.exact ? "exact" : "normal-approximation"},
          {"degenerate", w.degenerate},
          {"zero_handling", "dropped"},
          {"exact_limit", kWilcoxonExactLimit},
          {"alternative", "two-sided"}};
}

inline Json to_json(const SchemeComparison& c) {
  Json tasks = Json::array();
  for (const auto& t : c.tasks) {
    Json e{{"task", t.task}, {"eligible", t.eligible}};
    if (t.eligible) {
      e["winner_stability_a"] = num(t.stability_a);
      e["winner_stability_b"] = num(t.stability_b);
    } else {
      e["reason"] = t.reason;
    }
    tasks.push_back(e);
  }
  return {{"scheme_a", to_json(c.scheme_a)},
          {"scheme_b", to_json(c.scheme_b)},
          {"tasks", tasks},
          {"wilcoxon", to_json(c.test)},
          {"alpha", num(kSignificanceLevel)},
          {"significant", c.significant},
          {"degenerate", c.degenerate}};
}

inline Json to_json(const std::vector<AuditFinding>& findings) {
  Json out = Json::array();
  for (const auto& f : findings)
    out.push_back({{"algorithm", f.algorithm},
                   {"original_rank", num(f.original_rank)},
                   {"audited_rank", num(f.audited_rank)},
                   {"dropped_cases", f.dropped_cases},
                   {"reached_rank_1", f.reached_rank_1},
                   {"fully_degenerate", f.fully_degenerate}});
  return out;
}

inline Json to_json(const ObserverComparison& c) {
  Json rankings = Json::object();
  for (std::size_t i = 0; i < c.observers.size(); ++i) rankings[c.observers[i]] = to_json(c.rankings[i]);
  Json tau = Json::array(), differs = Json::array();
  for (std::size_t i = 0; i < c.observers.size(); ++i) {
    Json row = Json::array(), drow = Json::array();
    for (std::size_t j = 0; j < c.observers.size(); ++j) {
      row.push_back(num(c.tau[i][j]));
      drow.push_back(static_cast<bool>(c.differs[i][j]));
    }
    tau.push_back(row);
    differs.push_back(drow);
  }
  return {{"observers", c.observers}, {"rankings", rankings}, {"tau", tau}, {"differs", differs}};
}

inline Json to_json(const schema::CompletenessReport& r) {
  Json cats = Json::array();
  for (const auto& c : r.categories)
    cats.push_back({{"category", c.category}, {"instantiated", c.instantiated}, {"total", c.total},
                    {"pct", num(c.pct)}});
  return {{"overall_pct", num(r.overall_pct)},
          {"essential_pct", num(r.essential_pct)},
          {"essential_gate_threshold_pct", num(schema::kEssentialGatePct)},
          {"essential_gate_passed", r.essential_gate_passed},
          {"instantiated", r.instantiated},
          {"essential_instantiated", r.essential_instantiated},
          {"categories", cats},
          {"missing", r.missing}};
}

inline Json to_json(const std::vector<schema::ParameterCoverage>& cov) {
  Json out = Json::array();
  for (const auto& c : cov)
    out.push_back({{"parameter", c.parameter}, {"instantiated", c.instantiated}, {"total", c.total},
                   {"pct", num(c.pct)}, {"band", schema::to_string(c.band)}});
  return out;
}

inline Json registry_json() {
  Json j;
  j["registry"] = "challenge-reporting-parameters";
  j["version"] = schema::kRegistryVersion;
  j["categories"] = Json::array();
  for (const auto& c : schema::kCategories) j["categories"].push_back({{"id", c.id}, {"name", c.name}});
  j["parameters"] = Json::array();
  for (const auto& p : schema::kParameters)
    j["parameters"].push_back({{"number", p.number}, {"id", p.id}, {"name", p.name},
                               {"category", p.category}, {"essential", p.essential},
                               {"description", p.description}});
  return j;
}

// -- plot data ------------------------------------------------------------------

/// Long-format table `series,label,value`; values at 9 significant digits.
class PlotData {
 public:
  void add(std::string series, std::string label, double value) {
    rows_.push_back({std::move(series), std::move(label), value});
  }

  void write(std::ostream& out) const {
    out << "series,label,value\n";
    for (const auto& r : rows_)
      out << r.series << ',' << detail::csv_field(r.label) << ',' << format9(r.value) << '\n';
  }

 private:
  struct Row {
    std::string series, label;
    double value;
  };
  std::vector<Row> rows_;
};

inline void add_plot_data(PlotData& plot, const Ranking& r) {
  for (const auto& e : r.entries) {
    plot.add("score", e.algorithm, e.score);
    plot.add("rank", e.algorithm, e.rank);
  }
}

inline void add_plot_data(PlotData& plot, const StabilityReport& s,
                          WhiskerRule whiskers = WhiskerRule::median) {
  if (s.excluded) return;
  plot.add("winner_stability", s.original_winners.front(), s.winner_stability);
  plot.add("usurper_fraction", "all", s.usurper_fraction);
  for (const auto& f : s.frequencies) plot.add("rank1_frequency", f.algorithm, f.rank1_frequency);
  std::vector<double> defined;
  for (std::size_t i = 0; i < s.tau.size(); ++i)
    if (s.tau[i]) {
      plot.add("tau", std::to_string(i), *s.tau[i]);
      defined.push_back(*s.tau[i]);
    }
  if (defined.empty()) return;
  const auto b = boxplot_summary(defined, whiskers);
  plot.add("tau_boxplot", "median", b.median);
  plot.add("tau_boxplot", "q1", b.q1);
  plot.add("tau_boxplot", "q3", b.q3);
  plot.add("tau_boxplot", "lower_whisker", b.lower_whisker);
  plot.add("tau_boxplot", "upper_whisker", b.upper_whisker);
  plot.add("tau_boxplot", "mean", b.mean);
}

}  // namespace ranksense
