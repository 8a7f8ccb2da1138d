#pragma once

#include <optional>
#include <string>

#include "siframes/complex.hpp"
#include "siframes/surd.hpp"

namespace siframes {

/// Complex amplitude. Either exact, value = surd * e^{2 pi i phase} with the
/// phase reduced to [0, 1/24) (whole 24th turns are folded into the surd), or
/// approximate, a working-precision complex with an absolute error bound.
///
/// Exact addition is possible only between equal phases; otherwise the sum
/// degrades to an approximation. Products, conjugates and quotients of exact
/// scalars are always exact.
class Scalar {
 public:
  Scalar() = default;
  Scalar(const Rational& q) : surd_(q) {}  // NOLINT(google-explicit-constructor)
  Scalar(int q) : surd_(q) {}              // NOLINT(google-explicit-constructor)
  Scalar(const Surd& s) : surd_(s) {}      // NOLINT(google-explicit-constructor)

  /// (re + i im) * sqrt(root) * e^{2 pi i phase}
  static Scalar from_parts(const Rational& re, const Rational& im, const Rational& root,
                           const Rational& phase);
  static Scalar exact(Surd value, const Rational& phase);
  static Scalar unit(const Rational& phase) { return exact(Surd(1), phase); }
  static Scalar sqrt(const Rational& q) { return Scalar(Surd::sqrt(q)); }
  static Scalar approx(HpComplex value, Real error);
  static Scalar i();

  bool is_exact() const { return !approx_.has_value(); }
  /// Exactly zero (approximations are never reported as zero unless they are 0 +- 0).
  bool is_zero() const;
  const Surd& surd() const { return surd_; }
  const Rational& phase() const { return phase_; }
  /// Exact rational value, if this scalar is one.
  std::optional<Rational> as_rational() const;

  HpComplex value() const;
  Real error_bound() const;

  Scalar conj() const;

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
  friend Scalar operator-(const Scalar& a);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);

  /// Structural equality: exact scalars compare by value, approximations by
  /// their stored representation.
  friend bool operator==(const Scalar& a, const Scalar& b);

  std::string debug_string() const;

 private:
  struct Approx {
    HpComplex value;
    Real error;
  };

  Surd surd_;
  Rational phase_{0};
  std::optional<Approx> approx_;
};

/// |value| upper and lower bounds helpers for tolerance decisions.
Real magnitude(const Scalar& s);

}  // namespace siframes
