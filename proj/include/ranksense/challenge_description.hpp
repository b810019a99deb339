#pragma once

// Challenge-description document:
//
//   {
//     "metadata": {"document_id": "...", "version": "..."},     (optional)
//     "<category id>": {
//       "<parameter id>": null | {"value": <any>, "notes": "..."},
//       ...
//     },
//     ...
//   }
//
// Absent categories and parameters are missing. A parameter counts as
// instantiated when its value is non-empty: not null, not "", not [] or {}.

#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ranksense/challenge_registry.hpp"
#include "ranksense/error.hpp"

namespace ranksense::schema {

struct ParameterValue {
  nlohmann::json value;
  std::optional<std::string> notes;

  friend bool operator==(const ParameterValue&, const ParameterValue&) = default;
};

struct ChallengeDescription {
  std::string document_id;
  std::string version;
  /// Indexed like kParameters; nullopt = missing.
  std::vector<std::optional<ParameterValue>> parameters =
      std::vector<std::optional<ParameterValue>>(kParameters.size());

  [[nodiscard]] bool instantiated(std::size_t i) const { return parameters[i].has_value(); }

  [[nodiscard]] const std::optional<ParameterValue>& get(std::string_view id) const {
    const auto i = parameter_index(id);
    if (!i) throw ValidationError("unknown parameter id '" + std::string(id) + "'");
    return parameters[*i];
  }

  void set(std::string_view id, ParameterValue v) {
    const auto i = parameter_index(id);
    if (!i) throw ValidationError("unknown parameter id '" + std::string(id) + "'");
    parameters[*i] = std::move(v);
  }

  friend bool operator==(const ChallengeDescription&, const ChallengeDescription&) = default;
};

namespace detail {

inline bool is_empty_value(const nlohmann::json& v) {
  return v.is_null() || (v.is_string() && v.get_ref<const std::string&>().empty()) ||
         ((v.is_array() || v.is_object()) && v.empty());
}

}  // namespace detail

inline ChallengeDescription from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("challenge description must be a JSON object");
  ChallengeDescription desc;
  for (const auto& [key, body] : doc.items()) {
    if (key == "metadata") {
      if (!body.is_object()) throw ValidationError("/metadata must be an object");
      for (const auto& [mkey, mval] : body.items()) {
        if (mkey != "document_id" && mkey != "version") {
          throw ValidationError("/metadata: unknown key '" + mkey + "'");
        }
        if (!mval.is_string()) throw ValidationError("/metadata/" + mkey + " must be a string");
        (mkey == "document_id" ? desc.document_id : desc.version) = mval.get<std::string>();
      }
      continue;
    }
    const auto cat = category_index(key);
    if (!cat) throw ValidationError("unknown category id '" + key + "'");
    if (body.is_null()) continue;
    if (!body.is_object()) throw ValidationError("/" + key + " must be an object");
    for (const auto& [pkey, entry] : body.items()) {
      const auto p = parameter_index(pkey);
      const std::string path = "/" + key + "/" + pkey;
      if (!p) throw ValidationError("unknown parameter id '" + pkey + "' at " + path);
      if (kParameters[*p].category != key) {
        throw ValidationError("parameter '" + pkey + "' belongs to category '" +
                              std::string(kParameters[*p].category) + "', found at " + path);
      }
      if (entry.is_null()) continue;
      if (!entry.is_object() || !entry.contains("value")) {
        throw ValidationError(path + " must be null or an object with a 'value' field");
      }
      ParameterValue pv;
      for (const auto& [fkey, fval] : entry.items()) {
        if (fkey == "value") {
          pv.value = fval;
        } else if (fkey == "notes") {
          if (!fval.is_string()) throw ValidationError(path + "/notes must be a string");
          pv.notes = fval.get<std::string>();
        } else {
          throw ValidationError(path + ": unknown field '" + fkey + "'");
        }
      }
      if (!detail::is_empty_value(pv.value)) desc.parameters[*p] = std::move(pv);
    }
  }
  return desc;
}

/// Parses and validates a document. Syntax errors carry line and column.
inline ChallengeDescription load_description(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  return from_json(doc);
}

inline ChallengeDescription load_description_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  try {
    return load_description(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

/// Full document in registry order; missing parameters are written as null.
inline nlohmann::ordered_json to_json(const ChallengeDescription& desc) {
  nlohmann::ordered_json doc;
  if (!desc.document_id.empty() || !desc.version.empty()) {
    doc["metadata"] = {{"document_id", desc.document_id}, {"version", desc.version}};
  }
  for (const auto& c : kCategories) doc[std::string(c.id)] = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < kParameters.size(); ++i) {
    const auto& p = kParameters[i];
    auto& slot = doc[std::string(p.category)][std::string(p.id)];
    if (const auto& v = desc.parameters[i]) {
      slot = {{"value", nlohmann::ordered_json::parse(v->value.dump())}};
      if (v->notes) slot["notes"] = *v->notes;
    } else {
      slot = nullptr;
    }
  }
  return doc;
}

inline std::string serialize(const ChallengeDescription& desc) { return to_json(desc).dump(2) + "\n"; }

// -- completeness -------------------------------------------------------------

struct CategoryCompleteness {
  std::string category;
  std::size_t instantiated = 0;
  std::size_t total = 0;
  double pct = 0.0;
};

struct CompletenessReport {
  double overall_pct = 0.0;
  double essential_pct = 0.0;
  bool essential_gate_passed = false;
  std::size_t instantiated = 0;
  std::size_t essential_instantiated = 0;
  std::vector<CategoryCompleteness> categories;
  std::vector<std::string> missing;
};

inline CompletenessReport completeness(const ChallengeDescription& desc) {
  CompletenessReport r;
  for (const auto& c : kCategories) r.categories.push_back({std::string(c.id), 0, 0, 0.0});
  for (std::size_t i = 0; i < kParameters.size(); ++i) {
    const auto& p = kParameters[i];
    auto& cat = r.categories[*category_index(p.category)];
    ++cat.total;
    if (desc.instantiated(i)) {
      ++cat.instantiated;
      ++r.instantiated;
      r.essential_instantiated += p.essential;
    } else {
      r.missing.emplace_back(p.id);
    }
  }
  for (auto& c : r.categories)
    c.pct = 100.0 * static_cast<double>(c.instantiated) / static_cast<double>(c.total);
  r.overall_pct = 100.0 * static_cast<double>(r.instantiated) / static_cast<double>(kParameters.size());
  r.essential_pct =
      100.0 * static_cast<double>(r.essential_instantiated) / static_cast<double>(kEssentialCount);
  r.essential_gate_passed = r.essential_pct >= kEssentialGatePct;
  return r;
}

// -- corpus coverage ------------------------------------------------------------

/// red < 50 <= orange <= 90 < green
enum class CoverageBand { red, orange, green };

inline std::string_view to_string(CoverageBand b) {
  switch (b) {
    case CoverageBand::red: return "red";
    case CoverageBand::orange: return "orange";
    case CoverageBand::green: return "green";
  }
  return "";
}

inline CoverageBand coverage_band(double pct) {
  if (pct < 50.0) return CoverageBand::red;
  if (pct <= 90.0) return CoverageBand::orange;
  return CoverageBand::green;
}

struct ParameterCoverage {
  std::string parameter;
  std::size_t instantiated = 0;
  std::size_t total = 0;
  double pct = 0.0;
  CoverageBand band = CoverageBand::red;
};

inline std::vector<ParameterCoverage> coverage_stats(std::span<const ChallengeDescription> descs) {
  if (descs.empty()) throw InputError("coverage statistics need at least one description");
  std::vector<ParameterCoverage> out;
  for (std::size_t i = 0; i < kParameters.size(); ++i) {
    ParameterCoverage c{std::string(kParameters[i].id), 0, descs.size(), 0.0, CoverageBand::red};
    for (const auto& d : descs) c.instantiated += d.instantiated(i);
    c.pct = 100.0 * static_cast<double>(c.instantiated) / static_cast<double>(c.total);
    c.band = coverage_band(c.pct);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace ranksense::schema
