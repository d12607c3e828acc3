#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace divstab {

/// Exact scalar used by every exact solver. Always canonical (lowest terms,
/// positive denominator) after construction through the helpers below.
using Rational = mpq_class;

/// Parses "p/q", an integer, or a decimal literal ("2.5", "-1e-3") exactly.
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// True iff value * denominator is an integer.
bool on_grid(const Rational& value, long denominator);

}  // namespace divstab
