#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ranksense/error.hpp"
#include "ranksense/kendall.hpp"
#include "ranksense/ranking.hpp"
#include "ranksense/result_table.hpp"

namespace ranksense {

struct ObserverTable {
  std::string observer;
  ResultTable table;
};

struct ObserverComparison {
  std::vector<std::string> observers;
  std::vector<Ranking> rankings;
  /// Symmetric, unit diagonal; nullopt where tau is undefined.
  std::vector<std::vector<std::optional<double>>> tau;
  std::vector<std::vector<bool>> differs;
};

namespace detail {

inline std::vector<std::string> sorted_ids(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

inline bool same_ranks(const Ranking& a, const Ranking& b) {
  if (a.entries.size() != b.entries.size()) return false;
  for (const auto& e : a.entries)
    if (b.rank_of(e.algorithm) != e.rank) return false;
  return true;
}

}  // namespace detail

/// Ranks each observer's table with one scheme and compares all pairs.
inline ObserverComparison observer_ranking_comparison(std::span<const ObserverTable> tables,
                                                      const RankingScheme& scheme) {
  if (tables.size() < 2) throw InputError("observer comparison needs at least 2 observers");
  const auto algorithms = detail::sorted_ids(tables[0].table.algorithms());
  const auto cases = detail::sorted_ids(tables[0].table.cases());
  for (const auto& t : tables) {
    if (detail::sorted_ids(t.table.algorithms()) != algorithms) {
      throw InputError("observer '" + t.observer + "' has a different algorithm set");
    }
    if (detail::sorted_ids(t.table.cases()) != cases) {
      throw InputError("observer '" + t.observer + "' has a different case set");
    }
  }

  ObserverComparison out;
  for (const auto& t : tables) {
    out.observers.push_back(t.observer);
    out.rankings.push_back(rank(t.table, scheme));
  }
  const std::size_t k = tables.size();
  out.tau.assign(k, std::vector<std::optional<double>>(k));
  out.differs.assign(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < k; ++i) {
    out.tau[i][i] = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) {
      std::optional<double> tau;
      try {
        tau = kendall_tau(out.rankings[i], out.rankings[j]);
      } catch (const TauUndefined&) {
      } catch (const InputError&) {
        // Exclusions left the two rankings with different algorithm sets.
      }
      out.tau[i][j] = out.tau[j][i] = tau;
      out.differs[i][j] = out.differs[j][i] = !detail::same_ranks(out.rankings[i], out.rankings[j]);
    }
  }
  return out;
}

}  // namespace ranksense
