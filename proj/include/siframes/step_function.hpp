#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "siframes/scalar.hpp"

namespace siframes {

/// amp * e^{-2 pi i mod * xi} for lo <= xi < hi.
struct Piece {
  Rational lo;
  Rational hi;
  Scalar amp;
  Rational mod{0};

  friend bool operator==(const Piece&, const Piece&) = default;
};

/// How two values are compared: exactly, or within an absolute tolerance.
struct Tolerance {
  bool exact = true;
  Real eps = Real("1e-9");

  static Tolerance exactly() { return {}; }
  static Tolerance within(Real eps = Real("1e-9")) { return {false, std::move(eps)}; }
};

/// Value of an integral of a modulated step function: rational_part + over_two_pi / (2 pi).
/// Unmodulated pieces contribute to the first term; every modulated piece
/// integrates to a combination of unit phases divided by 2 pi tau.
struct IntegralValue {
  Scalar rational_part;
  Scalar over_two_pi;

  /// True when the value is known exactly (the transcendental part vanishes).
  bool is_exact() const { return rational_part.is_exact() && over_two_pi.is_zero(); }
  /// The exact value; throws InexactOperand unless is_exact().
  const Scalar& exact_value() const;
  HpComplex value() const;
  Real error_bound() const;
  IntegralValue conj() const { return {rational_part.conj(), over_two_pi.conj()}; }

  friend IntegralValue operator+(const IntegralValue& a, const IntegralValue& b) {
    return {a.rational_part + b.rational_part, a.over_two_pi + b.over_two_pi};
  }
  friend IntegralValue operator*(const IntegralValue& a, const Scalar& s) {
    return {a.rational_part * s, a.over_two_pi * s};
  }
};

/// Finitely piecewise function of a real frequency with rational breakpoints,
/// complex amplitudes and rational modulation frequencies. Canonical form:
/// pieces sorted by (lo, mod); pieces sharing a modulation frequency are
/// disjoint and maximal (adjacent equal amplitudes merged); zero amplitudes are
/// dropped. Pieces with different modulation frequencies may overlap, in which
/// case the function is their sum.
class ModStepFn {
 public:
  ModStepFn() = default;

  /// Validating constructor. Overlapping pieces with the same modulation must
  /// carry identical amplitudes (they are merged); otherwise OverlapConflict.
  static ModStepFn make(std::vector<Piece> pieces);
  /// Sums all pieces; overlapping contributions add.
  static ModStepFn sum(std::vector<Piece> pieces);
  static ModStepFn indicator(const Rational& lo, const Rational& hi, const Scalar& amp = Scalar(1));

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_zero() const { return pieces_.empty(); }
  bool is_exact() const;
  /// Sorted, de-duplicated piece endpoints.
  std::vector<Rational> breakpoints() const;
  /// Smallest interval containing the support.
  std::optional<std::pair<Rational, Rational>> support_hull() const;
  /// Pointwise value at working precision.
  HpComplex evaluate(const Rational& xi) const;

  friend bool operator==(const ModStepFn&, const ModStepFn&) = default;

 private:
  explicit ModStepFn(std::vector<Piece> canonical) : pieces_(std::move(canonical)) {}
  std::vector<Piece> pieces_;
};

ModStepFn linear_combine(std::span<const Scalar> coeffs, std::span<const ModStepFn> fns);
ModStepFn scale(const ModStepFn& f, const Scalar& c);
ModStepFn operator+(const ModStepFn& f, const ModStepFn& g);
ModStepFn operator-(const ModStepFn& f, const ModStepFn& g);

/// Pointwise f * conj(g).
ModStepFn mul_conj(const ModStepFn& f, const ModStepFn& g);
/// xi -> f((xi - t) / s), s > 0.
ModStepFn affine_reparam(const ModStepFn& f, const Rational& s, const Rational& t);
/// xi -> e^{-2 pi i tau xi} f(xi).
ModStepFn modulate(const ModStepFn& f, const Rational& tau);
/// f restricted to [lo, hi).
ModStepFn restrict(const ModStepFn& f, const Rational& lo, const Rational& hi);
IntegralValue integrate(const ModStepFn& f);
/// xi -> sum_m f(xi + m p) on [0, p).
ModStepFn periodize(const ModStepFn& f, const Rational& p);
/// Squared L2 norm.
IntegralValue norm2(const ModStepFn& f);

/// Exact mode compares canonical forms and raises InexactOperand on inexact
/// pieces; tolerance mode compares amplitudes on the common refinement.
bool equals(const ModStepFn& f, const ModStepFn& g, const Tolerance& mode = Tolerance::exactly());

}  // namespace siframes
