#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ranksense/error.hpp"

namespace ranksense {

enum class Orientation { higher_better, lower_better };

struct MetricSpec {
  std::string id;
  Orientation orientation = Orientation::higher_better;
  /// Closed interval; an infinite upper bound means unbounded.
  std::optional<std::pair<double, double>> domain;
  std::optional<double> worst_value;

  [[nodiscard]] bool in_domain(double v) const noexcept {
    return !domain || (v >= domain->first && v <= domain->second);
  }

  friend bool operator==(const MetricSpec&, const MetricSpec&) = default;
};

/// Built-in metric registry: DSC higher-better on [0,1] (worst 0), HD and
/// HD95 lower-better on [0,inf) with no defined worst value.
inline std::optional<MetricSpec> builtin_metric(const std::string& id) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (id == "DSC") return MetricSpec{"DSC", Orientation::higher_better, {{0.0, 1.0}}, 0.0};
  if (id == "HD") return MetricSpec{"HD", Orientation::lower_better, {{0.0, inf}}, std::nullopt};
  if (id == "HD95") return MetricSpec{"HD95", Orientation::lower_better, {{0.0, inf}}, std::nullopt};
  return std::nullopt;
}

/// Algorithm × case × metric matrix of optional values. Immutable once built.
class ResultTable {
 public:
  class Builder;

  [[nodiscard]] const std::vector<std::string>& algorithms() const noexcept { return algorithms_; }
  [[nodiscard]] const std::vector<std::string>& cases() const noexcept { return cases_; }
  [[nodiscard]] const std::vector<MetricSpec>& metrics() const noexcept { return metrics_; }

  [[nodiscard]] std::optional<std::size_t> algorithm_index(const std::string& id) const {
    return find(algorithms_, id);
  }
  [[nodiscard]] std::optional<std::size_t> case_index(const std::string& id) const {
    return find(cases_, id);
  }
  [[nodiscard]] std::optional<std::size_t> metric_index(const std::string& id) const {
    for (std::size_t i = 0; i < metrics_.size(); ++i)
      if (metrics_[i].id == id) return i;
    return std::nullopt;
  }

  [[nodiscard]] std::size_t require_metric(const std::string& id) const {
    if (auto m = metric_index(id)) return *m;
    throw InputError("metric '" + id + "' is not present in the results table");
  }

  [[nodiscard]] const std::optional<double>& value(std::size_t algorithm, std::size_t kase,
                                                   std::size_t metric) const {
    return values_[(metric * algorithms_.size() + algorithm) * cases_.size() + kase];
  }

  /// Copy with every cell for which `drop(algorithm, case, metric, value)`
  /// holds turned into a missing value.
  [[nodiscard]] ResultTable without_values(
      const std::function<bool(std::size_t, std::size_t, std::size_t, double)>& drop) const {
    ResultTable copy = *this;
    for (std::size_t m = 0; m < metrics_.size(); ++m)
      for (std::size_t a = 0; a < algorithms_.size(); ++a)
        for (std::size_t c = 0; c < cases_.size(); ++c) {
          auto& cell = copy.values_[(m * algorithms_.size() + a) * cases_.size() + c];
          if (cell && drop(a, c, m, *cell)) cell.reset();
        }
    return copy;
  }

  friend bool operator==(const ResultTable&, const ResultTable&) = default;

 private:
  static std::optional<std::size_t> find(const std::vector<std::string>& ids, const std::string& id) {
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == id) return i;
    return std::nullopt;
  }

  std::vector<std::string> algorithms_;
  std::vector<std::string> cases_;
  std::vector<MetricSpec> metrics_;
  std::vector<std::optional<double>> values_;
};

/// Collects rows in any order; algorithm and case order is first appearance.
/// Unregistered metric ids fall back to the built-in registry.
class ResultTable::Builder {
 public:
  Builder& add_metric(MetricSpec spec) {
    if (spec.worst_value && !spec.in_domain(*spec.worst_value)) {
      throw InputError("worst value of metric '" + spec.id + "' lies outside its domain");
    }
    for (const auto& m : metrics_)
      if (m.id == spec.id) throw InputError("metric '" + spec.id + "' registered twice");
    metrics_.push_back(std::move(spec));
    return *this;
  }

  Builder& add_algorithm(const std::string& id) {
    intern(algorithms_, algorithm_ids_, id);
    return *this;
  }

  Builder& add_case(const std::string& id) {
    intern(cases_, case_ids_, id);
    return *this;
  }

  Builder& add(const std::string& algorithm, const std::string& kase, const std::string& metric,
               std::optional<double> value) {
    if (algorithm.empty() || kase.empty() || metric.empty()) {
      throw InputError("algorithm, case and metric identifiers must be non-empty");
    }
    const auto a = intern(algorithms_, algorithm_ids_, algorithm);
    const auto c = intern(cases_, case_ids_, kase);
    const auto m = metric_slot(metric);
    if (value) {
      const auto& spec = metrics_[m];
      if (!std::isfinite(*value)) {
        throw InputError("non-finite value for (" + algorithm + ", " + kase + ", " + spec.id + ")");
      }
      if (!spec.in_domain(*value)) {
        throw InputError("value " + std::to_string(*value) + " for (" + algorithm + ", " + kase + ", " +
                         spec.id + ") lies outside the metric's domain");
      }
    }
    if (!cells_.emplace(std::tuple{a, c, m}, value).second) {
      throw InputError("duplicate entry for (" + algorithm + ", " + kase + ", " + metric + ")");
    }
    return *this;
  }

  [[nodiscard]] ResultTable build() const {
    if (metrics_.empty()) throw InputError("a results table needs at least one metric");
    ResultTable t;
    t.algorithms_ = algorithms_;
    t.cases_ = cases_;
    t.metrics_ = metrics_;
    t.values_.assign(metrics_.size() * algorithms_.size() * cases_.size(), std::nullopt);
    for (const auto& [key, value] : cells_) {
      const auto [a, c, m] = key;
      if (!value) continue;
      t.values_[(m * algorithms_.size() + a) * cases_.size() + c] = value;
    }
    return t;
  }

 private:
  static std::size_t intern(std::vector<std::string>& ids, std::map<std::string, std::size_t>& lookup,
                            const std::string& id) {
    auto [it, inserted] = lookup.emplace(id, ids.size());
    if (inserted) ids.push_back(id);
    return it->second;
  }

  std::size_t metric_slot(const std::string& id) {
    for (std::size_t i = 0; i < metrics_.size(); ++i)
      if (metrics_[i].id == id) return i;
    auto spec = builtin_metric(id);
    if (!spec) {
      throw InputError("metric '" + id + "' has no registered orientation; declare it explicitly");
    }
    metrics_.push_back(*spec);
    return metrics_.size() - 1;
  }

  std::vector<std::string> algorithms_, cases_;
  std::map<std::string, std::size_t> algorithm_ids_, case_ids_;
  std::vector<MetricSpec> metrics_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::optional<double>> cells_;
};

}  // namespace ranksense
