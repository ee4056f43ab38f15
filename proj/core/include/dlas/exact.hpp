#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "dlas/common.hpp"

namespace dlas {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parse a decimal literal ("0.25", "-1", "3.5e-2" is not accepted) into an
/// exact rational. Throws ConfigError on malformed input.
Rational rational_from_decimal(const std::string& text);

/// Exact rational from a double, using its binary representation.
/// Dyadic config values like 0.5 or 0.25 round-trip exactly.
Rational rational_from_double(double x);

std::string rational_to_string(const Rational& r);

} // namespace dlas
