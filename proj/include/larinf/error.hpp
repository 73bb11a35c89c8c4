#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace larinf {

enum class ErrorKind {
  NotPositiveDefinite,
  DimensionMismatch,
  RankDeficient,
  ZeroColumn,
  DegenerateResponse,
  NonPositiveScale,
  NoPositiveCandidate,
  InvalidTail,
  NotPrototypical,
  RejectionBudgetExceeded,
  InvalidArgument,
  Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All library failures are reported through this type; `kind()` lets callers
// (the CLI in particular) map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace larinf
