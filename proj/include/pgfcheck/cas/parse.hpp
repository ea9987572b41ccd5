#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "pgfcheck/cas/closed_form.hpp"

namespace pgfcheck::cas {

/// Maps an identifier in the input text to an indeterminate.
using IndetResolver = std::function<std::optional<Indet>(std::string_view)>;

/// Parses a rational expression over integers, decimals and identifiers
/// with + - * / ^ and parentheses, e.g. "(1/2)/(1 - 1/2*N)". Throws
/// ParseError (with column) or UndeclaredVariable.
ClosedForm parse_closed_form(std::string_view text, const IndetResolver& resolve);

/// Parses a decimal or fraction literal such as "0.25", "3/4" or "7".
std::optional<Coeff> parse_rational(std::string_view text);

}  // namespace pgfcheck::cas
