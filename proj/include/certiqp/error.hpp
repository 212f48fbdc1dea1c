#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace certiqp {

enum class ErrorKind {
  kDimensionMismatch,
  kNotPositiveDefinite,
  kInvalidParameter,
  kAsymmetricH,
  kNotPsd,
  kSingularUpdate,
  kRankDeficient,
  kInvalidLabels,
  kInvalidBounds,
  kIntractable,
  kParse,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can tell bad input from numerical breakdown.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures caused by arithmetic rather than malformed input.
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::kNotPositiveDefinite || kind_ == ErrorKind::kSingularUpdate ||
           kind_ == ErrorKind::kRankDeficient;
  }

 private:
  ErrorKind kind_;
};

}  // namespace certiqp
