#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace siframes {

namespace mp = boost::multiprecision;

// Expression templates are disabled so that std::min, auto and ternaries see plain values.
using Integer = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;

/// Working precision for every inexact path: 50 decimal digits (166-bit mantissa).
using Real = mp::number<mp::cpp_bin_float<50>, mp::et_off>;

/// Relative rounding unit used when propagating error bounds.
const Real& unit_roundoff();

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

/// base^exponent for any integer exponent (base must be nonzero when exponent < 0).
Rational pow(const Rational& base, std::int64_t exponent);

Real to_real(const Rational& q);
const Real& pi();

/// Decimal rendering with a fixed number of significant digits; stable across runs.
std::string to_decimal(const Real& x, int digits = 40);

std::int64_t to_int64(const Integer& z);

}  // namespace siframes
