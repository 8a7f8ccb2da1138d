#pragma once

#include <cmath>

#include "siframes/numeric.hpp"

namespace siframes {

/// Minimal complex number over an arbitrary real type. std::complex is only
/// specified for the built-in floating types, so multiprecision paths use this.
template <class R>
struct Cx {
  R re{0};
  R im{0};

  Cx() = default;
  Cx(R r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Cx(R r, R i) : re(std::move(r)), im(std::move(i)) {}

  Cx conj() const { return {re, -im}; }
  R norm() const { return re * re + im * im; }  // |z|^2

  Cx& operator+=(const Cx& o) { re += o.re; im += o.im; return *this; }
  Cx& operator-=(const Cx& o) { re -= o.re; im -= o.im; return *this; }
  Cx& operator*=(const Cx& o) { *this = *this * o; return *this; }

  friend Cx operator+(Cx a, const Cx& b) { return a += b; }
  friend Cx operator-(Cx a, const Cx& b) { return a -= b; }
  friend Cx operator-(const Cx& a) { return {-a.re, -a.im}; }
  friend Cx operator*(const Cx& a, const Cx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cx operator*(const Cx& a, const R& s) { return {a.re * s, a.im * s}; }
  friend Cx operator/(const Cx& a, const R& s) { return {a.re / s, a.im / s}; }
  friend Cx operator/(const Cx& a, const Cx& b) {
    const R d = b.norm();
    return Cx{a.re * b.re + a.im * b.im, a.im * b.re - a.re * b.im} / d;
  }
};

template <class R>
R abs(const Cx<R>& z) {
  using std::sqrt;
  return sqrt(z.norm());
}

using HpComplex = Cx<Real>;

/// e^{2 pi i q} at working precision.
inline HpComplex unit_phase(const Rational& q) {
  const Real angle = 2 * pi() * to_real(q);
  return {boost::multiprecision::cos(angle), boost::multiprecision::sin(angle)};
}

}  // namespace siframes
