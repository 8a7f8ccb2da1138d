#include "siframes/scalar.hpp"

#include <sstream>

#include "siframes/errors.hpp"

namespace siframes {

namespace {

// Reduce q modulo 1 into [0, 1/24) and return how many 24th turns were removed.
std::pair<Rational, int> split_phase(const Rational& q) {
  const Rational scaled = q * 24;
  const Integer turns = floor(scaled);
  const Rational rest = (scaled - Rational(turns)) / 24;
  const Integer k = ((turns % 24) + 24) % 24;
  return {rest, k.convert_to<int>()};
}

Real conversion_error(const HpComplex& v) { return unit_roundoff() * (abs(v) + 1) * 8; }

}  // namespace

Scalar Scalar::exact(Surd value, const Rational& phase) {
  Scalar out;
  if (value.is_zero()) return out;
  auto [rest, turns] = split_phase(phase);
  out.surd_ = turns == 0 ? std::move(value) : value * Surd::root_of_unity_24(turns);
  out.phase_ = rest;
  return out;
}

Scalar Scalar::from_parts(const Rational& re, const Rational& im, const Rational& root,
                          const Rational& phase) {
  if (root <= 0) throw Error(ErrorKind::InvalidArgument, "root factor must be positive");
  return exact(Surd(Gaussian{re, im}) * Surd::sqrt(root), phase);
}

Scalar Scalar::approx(HpComplex value, Real error) {
  Scalar out;
  out.approx_ = Approx{std::move(value), std::move(error)};
  return out;
}

Scalar Scalar::i() { return Scalar(Surd(Gaussian{0, 1})); }

bool Scalar::is_zero() const {
  if (approx_) return approx_->value.re == 0 && approx_->value.im == 0 && approx_->error == 0;
  return surd_.is_zero();
}

std::optional<Rational> Scalar::as_rational() const {
  if (approx_ || phase_ != 0) return std::nullopt;
  if (surd_.is_zero()) return Rational(0);
  if (!surd_.is_gaussian() || surd_.terms().front().second.im != 0) return std::nullopt;
  return surd_.terms().front().second.re;
}

HpComplex Scalar::value() const {
  if (approx_) return approx_->value;
  HpComplex v = surd_.approx();
  if (phase_ != 0) v = v * unit_phase(phase_);
  return v;
}

Real Scalar::error_bound() const {
  if (approx_) return approx_->error;
  if (surd_.is_zero()) return 0;
  return conversion_error(value());
}

Scalar Scalar::conj() const {
  if (approx_) return approx(approx_->value.conj(), approx_->error);
  return exact(surd_.conj(), -phase_);
}

Scalar operator-(const Scalar& a) {
  if (a.approx_) return Scalar::approx(-a.approx_->value, a.approx_->error);
  Scalar out = a;
  out.surd_ = -a.surd_;
  return out;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) {
    if (a.surd_.is_zero()) return b;
    if (b.surd_.is_zero()) return a;
    if (a.phase_ == b.phase_) return Scalar::exact(a.surd_ + b.surd_, a.phase_);
  }
  const HpComplex v = a.value() + b.value();
  return Scalar::approx(v, a.error_bound() + b.error_bound() + unit_roundoff() * abs(v));
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar::exact(a.surd_ * b.surd_, a.phase_ + b.phase_);
  if (a.is_zero() || b.is_zero()) return Scalar();
  const HpComplex va = a.value();
  const HpComplex vb = b.value();
  const Real ea = a.error_bound();
  const Real eb = b.error_bound();
  const HpComplex v = va * vb;
  return Scalar::approx(v, abs(va) * eb + abs(vb) * ea + ea * eb + unit_roundoff() * abs(v));
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero");
  if (a.is_exact() && b.is_exact()) return Scalar::exact(a.surd_ / b.surd_, a.phase_ - b.phase_);
  const HpComplex va = a.value();
  const HpComplex vb = b.value();
  const Real ea = a.error_bound();
  const Real eb = b.error_bound();
  const Real mb = abs(vb);
  if (mb <= eb) throw Error(ErrorKind::InvalidArgument, "division by a value indistinguishable from zero");
  const HpComplex v = va / vb;
  return Scalar::approx(v, (ea + abs(v) * eb) / (mb - eb) + unit_roundoff() * abs(v));
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.is_exact() != b.is_exact()) return false;
  if (a.is_exact()) return a.phase_ == b.phase_ && a.surd_ == b.surd_;
  return a.approx_->value.re == b.approx_->value.re && a.approx_->value.im == b.approx_->value.im &&
         a.approx_->error == b.approx_->error;
}

std::string Scalar::debug_string() const {
  std::ostringstream out;
  if (approx_) {
    out << "~(" << to_decimal(approx_->value.re, 20) << ", " << to_decimal(approx_->value.im, 20)
        << " +- " << to_decimal(approx_->error, 3) << ")";
    return out.str();
  }
  if (surd_.is_zero()) return "0";
  out << "(";
  bool first = true;
  for (const auto& [r, g] : surd_.terms()) {
    if (!first) out << " + ";
    first = false;
    out << "(" << to_string(g.re) << (g.im >= 0 ? "+" : "-") << to_string(abs(g.im)) << "i)";
    if (r != 1) out << "*sqrt(" << r << ")";
  }
  out << ")";
  if (phase_ != 0) out << "*e^(2pi i " << to_string(phase_) << ")";
  return out.str();
}

Real magnitude(const Scalar& s) { return abs(s.value()); }

}  // namespace siframes
