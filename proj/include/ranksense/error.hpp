#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ranksense {

/// Base of every error raised by the library. `kind()` is the stable,
/// machine-readable class name surfaced by the command-line tool.
class Error : public std::runtime_error {
 public:
  Error(std::string_view kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  [[nodiscard]] const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define RANKSENSE_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  };

RANKSENSE_DEFINE_ERROR(InputError)
RANKSENSE_DEFINE_ERROR(ParseError)
RANKSENSE_DEFINE_ERROR(ValidationError)
RANKSENSE_DEFINE_ERROR(PreconditionError)
RANKSENSE_DEFINE_ERROR(MetricUndefined)
RANKSENSE_DEFINE_ERROR(AggregationUndefined)
RANKSENSE_DEFINE_ERROR(TauUndefined)

#undef RANKSENSE_DEFINE_ERROR

}  // namespace ranksense
