#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pgfcheck {

enum class ErrorKind {
  // cas
  DivisionByZeroFPS,
  NonInvertibleDenominator,
  IllDefinedProjection,
  ShiftPrecondition,
  NonPolynomialCoefficient,
  NegativeExponent,
  // syntax
  ParseError,
  UndeclaredVariable,
  NonRectangularGuard,
  AlgebraicPGFUnsupported,
  InvalidParameter,
  DuplicateName,
  FreshVariableClash,
  UnsupportedAffine,
  // semantics
  SameVariableIid,
  NotLoopFree,
  // equivalence
  MissingAnnotation,
  // queries
  IndeterminateForm,
  QuerySyntax,
  // sampler
  TimeoutFractionExceeded,
  NegativeValue,
  UnboundParameter,
  // cli
  Usage,
};

std::string_view to_string(ErrorKind kind);

/// Source position, 1-based.
struct SourceLoc {
  std::size_t line = 0;
  std::size_t column = 0;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  Error(ErrorKind kind, const std::string& message, SourceLoc loc);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  bool has_location() const noexcept { return loc_.line != 0; }
  SourceLoc location() const noexcept { return loc_; }

 private:
  ErrorKind kind_;
  std::string detail_;
  SourceLoc loc_;
};

}  // namespace pgfcheck
