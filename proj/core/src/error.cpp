#include "funnel/error.hpp"

namespace funnel {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Range: return "RangeError";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::GridTooFine: return "GridTooFine";
    case ErrorKind::InternalConsistency: return "InternalConsistency";
    case ErrorKind::SubadditivityViolation: return "SubadditivityViolation";
    case ErrorKind::DegenerateModulus: return "DegenerateModulus";
    case ErrorKind::FlatEnvelope: return "FlatEnvelope";
    case ErrorKind::SamplerContract: return "SamplerContract";
    case ErrorKind::DomainTruncation: return "DomainTruncation";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::ReductionNotApplicable: return "ReductionNotApplicable";
    case ErrorKind::ProjectionInvalid: return "ProjectionInvalid";
    case ErrorKind::ExtractionFailed: return "ExtractionFailed";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
  }
  return "UnknownError";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace funnel
