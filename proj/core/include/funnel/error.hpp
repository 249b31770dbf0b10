#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace funnel {

enum class ErrorKind {
  Domain,
  Range,
  Config,
  GridTooFine,
  InternalConsistency,
  SubadditivityViolation,
  DegenerateModulus,
  FlatEnvelope,
  SamplerContract,
  DomainTruncation,
  Infeasible,
  UnsupportedDimension,
  ReductionNotApplicable,
  ProjectionInvalid,
  ExtractionFailed,
  HypothesisViolated,
};

std::string_view to_string(ErrorKind kind);

/// Every library failure is reported through this type; `kind()` is stable
/// and is what the CLI maps onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace funnel
