#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace pac {

/// Exact probability / valuation type. All model arithmetic stays in Q.
using Rational = mpq_class;

/// Parses `a/b`, an integer, or a finite decimal (`0.345`, `-1.5`, `2e-3`).
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical form: `a/b` in lowest terms, plain `a` for integers.
std::string to_string(const Rational& r);

/// Decimal rendering when the value has a finite expansion, else `a/b`.
std::string to_display(const Rational& r);

/// Nearest double, for display and timing ratios only.
double to_double(const Rational& r);

} // namespace pac
