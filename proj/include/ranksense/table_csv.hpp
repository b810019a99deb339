#pragma once

// Results table file: UTF-8 CSV with header `algorithm,case,metric,value`,
// one row per (algorithm, case, metric); an empty value field is missing.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ranksense/error.hpp"
#include "ranksense/format.hpp"
#include "ranksense/result_table.hpp"

namespace ranksense {

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(c);
    }
  }
  if (quoted) throw ParseError("line " + std::to_string(line_no) + ": unterminated quoted field");
  return fields;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace detail

/// `metrics` declares specs for ids outside the built-in registry (and may
/// override built-ins).
inline ResultTable read_results_csv(std::istream& in, const std::vector<MetricSpec>& metrics = {}) {
  ResultTable::Builder builder;
  for (const auto& m : metrics) builder.add_metric(m);

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!header_seen) {
      if (line != "algorithm,case,metric,value") {
        throw ParseError("line 1: expected header 'algorithm,case,metric,value'");
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line, line_no);
    if (f.size() != 4) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 4 fields, found " +
                       std::to_string(f.size()));
    }
    std::optional<double> value;
    if (!f[3].empty()) {
      double v = 0.0;
      const auto* end = f[3].data() + f[3].size();
      const auto [ptr, ec] = std::from_chars(f[3].data(), end, v);
      if (ec != std::errc{} || ptr != end) {
        throw ParseError("line " + std::to_string(line_no) + ": '" + f[3] + "' is not a number");
      }
      value = v;
    }
    try {
      builder.add(f[0], f[1], f[2], value);
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw ParseError("empty results file");
  return builder.build();
}

inline ResultTable read_results_csv(const std::filesystem::path& path,
                                    const std::vector<MetricSpec>& metrics = {}) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_results_csv(in, metrics);
}

/// Rows in metric, algorithm, case order; values at 17 significant digits
/// so a written table reads back bit-identical.
inline void write_results_csv(std::ostream& out, const ResultTable& table) {
  out << "algorithm,case,metric,value\n";
  for (std::size_t m = 0; m < table.metrics().size(); ++m)
    for (std::size_t a = 0; a < table.algorithms().size(); ++a)
      for (std::size_t c = 0; c < table.cases().size(); ++c) {
        out << detail::csv_field(table.algorithms()[a]) << ',' << detail::csv_field(table.cases()[c])
            << ',' << detail::csv_field(table.metrics()[m].id) << ',';
        if (const auto& v = table.value(a, c, m)) out << format_exact(*v);
        out << '\n';
      }
}

}  // namespace ranksense
