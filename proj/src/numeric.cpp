#include "siframes/numeric.hpp"

#include <cctype>
#include <limits>
#include <sstream>

#include "siframes/errors.hpp"

namespace siframes {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OverlapConflict: return "OverlapConflict";
    case ErrorKind::DegenerateInterval: return "DegenerateInterval";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::InexactOperand: return "InexactOperand";
    case ErrorKind::NonpositiveScale: return "NonpositiveScale";
    case ErrorKind::LatticeMismatch: return "LatticeMismatch";
    case ErrorKind::MissingGenerators: return "MissingGenerators";
    case ErrorKind::UnsupportedSupport: return "UnsupportedSupport";
    case ErrorKind::UnsupportedGenerator: return "UnsupportedGenerator";
    case ErrorKind::DuplicateElements: return "DuplicateElements";
    case ErrorKind::DegenerateCoefficients: return "DegenerateCoefficients";
    case ErrorKind::WindowTooLarge: return "WindowTooLarge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::UnknownCommand: return "UnknownCommand";
  }
  return "Unknown";
}

const Real& unit_roundoff() {
  static const Real eps = Real(std::numeric_limits<Real>::epsilon()) * 4;
  return eps;
}

namespace {

Integer parse_integer(std::string_view text, std::string_view whole) {
  std::size_t start = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) start = 1;
  if (start == text.size()) {
    throw Error(ErrorKind::ParseError, "malformed rational '" + std::string(whole) + "'");
  }
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw Error(ErrorKind::ParseError, "malformed rational '" + std::string(whole) + "'");
    }
  }
  std::string digits(text[0] == '+' ? text.substr(1) : text);
  return Integer(digits);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  const Integer num = parse_integer(text.substr(0, slash), text);
  const auto den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) {
    throw Error(ErrorKind::ParseError, "malformed rational '" + std::string(text) + "'");
  }
  const Integer den = parse_integer(den_text, text);
  if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string to_string(const Rational& q) {
  const Integer num = boost::multiprecision::numerator(q);
  const Integer den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Integer floor(const Rational& q) {
  const Integer num = boost::multiprecision::numerator(q);
  const Integer den = boost::multiprecision::denominator(q);
  Integer quot = num / den;  // truncates toward zero
  if (num < 0 && quot * den != num) quot -= 1;
  return quot;
}

Integer ceil(const Rational& q) { return -floor(-q); }

Rational pow(const Rational& base, std::int64_t exponent) {
  if (exponent < 0) {
    if (base == 0) throw Error(ErrorKind::InvalidArgument, "zero to a negative power");
    return pow(Rational(1) / base, -exponent);
  }
  Rational result = 1;
  Rational factor = base;
  auto e = static_cast<std::uint64_t>(exponent);
  while (e != 0) {
    if (e & 1U) result *= factor;
    factor *= factor;
    e >>= 1U;
  }
  return result;
}

Real to_real(const Rational& q) {
  return Real(boost::multiprecision::numerator(q)) / Real(boost::multiprecision::denominator(q));
}

const Real& pi() {
  static const Real value = boost::math::constants::pi<Real>();
  return value;
}

std::string to_decimal(const Real& x, int digits) {
  std::ostringstream out;
  out << std::scientific << std::setprecision(digits - 1) << x;
  return out.str();
}

std::int64_t to_int64(const Integer& z) {
  if (z > std::numeric_limits<std::int64_t>::max() || z < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorKind::InvalidArgument, "integer out of 64-bit range: " + z.str());
  }
  return z.convert_to<std::int64_t>();
}

}  // namespace siframes
