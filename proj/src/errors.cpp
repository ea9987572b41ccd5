#include "pgfcheck/errors.hpp"

namespace pgfcheck {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZeroFPS: return "DivisionByZeroFPS";
    case ErrorKind::NonInvertibleDenominator: return "NonInvertibleDenominator";
    case ErrorKind::IllDefinedProjection: return "IllDefinedProjection";
    case ErrorKind::ShiftPrecondition: return "ShiftPrecondition";
    case ErrorKind::NonPolynomialCoefficient: return "NonPolynomialCoefficient";
    case ErrorKind::NegativeExponent: return "NegativeExponent";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UndeclaredVariable: return "UndeclaredVariable";
    case ErrorKind::NonRectangularGuard: return "NonRectangularGuard";
    case ErrorKind::AlgebraicPGFUnsupported: return "AlgebraicPGFUnsupported";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::FreshVariableClash: return "FreshVariableClash";
    case ErrorKind::UnsupportedAffine: return "UnsupportedAffine";
    case ErrorKind::SameVariableIid: return "SameVariableIid";
    case ErrorKind::NotLoopFree: return "NotLoopFree";
    case ErrorKind::MissingAnnotation: return "MissingAnnotation";
    case ErrorKind::IndeterminateForm: return "IndeterminateForm";
    case ErrorKind::QuerySyntax: return "QuerySyntax";
    case ErrorKind::TimeoutFractionExceeded: return "TimeoutFractionExceeded";
    case ErrorKind::NegativeValue: return "NegativeValue";
    case ErrorKind::UnboundParameter: return "UnboundParameter";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorKind kind, const std::string& message, SourceLoc loc) {
  std::string out(to_string(kind));
  if (loc.line != 0) {
    out += " at " + std::to_string(loc.line) + ":" + std::to_string(loc.column);
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message)
    : Error(kind, message, SourceLoc{}) {}

Error::Error(ErrorKind kind, const std::string& message, SourceLoc loc)
    : std::runtime_error(format_message(kind, message, loc)),
      kind_(kind),
      detail_(message),
      loc_(loc) {}

}  // namespace pgfcheck
