#include "ngd/error.hpp"

namespace ngd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::OutOfSpan: return "OutOfSpan";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::NonPositiveStep: return "NonPositiveStep";
    case ErrorCode::DegeneratePair: return "DegeneratePair";
    case ErrorCode::BracketViolation: return "BracketViolation";
    case ErrorCode::BracketUnavailable: return "BracketUnavailable";
    case ErrorCode::NotJensenConvex: return "NotJensenConvex";
    case ErrorCode::ResolutionExceeded: return "ResolutionExceeded";
    case ErrorCode::InconsistentEnclosure: return "InconsistentEnclosure";
    case ErrorCode::Overflow: return "Overflow";
  }
  return "Unknown";
}

}  // namespace ngd
