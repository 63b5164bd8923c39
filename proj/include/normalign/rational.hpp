#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace normalign
{

// Exact arithmetic for state variables, gains, preference scores and
// alignment sums. Nothing is rounded until a value is printed.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

Rational make_rational( long long numerator, long long denominator = 1 );

/// Parses a decimal literal such as "12", "-0.25" or "3.". Returns nullopt on
/// anything else (no exponents, no fractions).
std::optional<Rational> parse_decimal( std::string_view text );

/// Rounds half-to-even at `places` fractional digits and prints with exactly
/// that many digits, e.g. format_fixed(-1/8, 2) == "-0.12".
std::string format_fixed( const Rational& value, int places = 6 );

/// Exact decimal expansion when the denominator only has factors 2 and 5;
/// otherwise "n/d".
std::string format_exact( const Rational& value );

double to_double( const Rational& value );

/// Exact rational value of a finite double.
Rational from_double( double value );

} // namespace normalign
