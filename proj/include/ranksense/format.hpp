#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace ranksense {

/// Fixed report precision: 9 significant digits.
inline std::string format9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

/// The double that `format9(v)` denotes. Reports store this value so the
/// JSON and CSV renderings carry the same number.
inline double round9(double v) { return std::strtod(format9(v).c_str(), nullptr); }

/// Round-trip precision.
inline std::string format_exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace ranksense
