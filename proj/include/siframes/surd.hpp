#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "siframes/complex.hpp"
#include "siframes/numeric.hpp"

namespace siframes {

/// Gaussian rational re + i*im.
struct Gaussian {
  Rational re;
  Rational im;

  bool is_zero() const { return re == 0 && im == 0; }
  Gaussian conj() const { return {re, -im}; }
  Rational norm() const { return re * re + im * im; }
  Gaussian inverse() const;

  friend Gaussian operator+(const Gaussian& a, const Gaussian& b) { return {a.re + b.re, a.im + b.im}; }
  friend Gaussian operator-(const Gaussian& a, const Gaussian& b) { return {a.re - b.re, a.im - b.im}; }
  friend Gaussian operator-(const Gaussian& a) { return {-a.re, -a.im}; }
  friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Gaussian operator*(const Gaussian& a, const Rational& s) { return {a.re * s, a.im * s}; }
  friend bool operator==(const Gaussian&, const Gaussian&) = default;
};

/// Exact element of Q(i, sqrt 2, sqrt 3, sqrt 5, ...): a finite sum of Gaussian
/// rationals times square roots of square-free positive integers. The square
/// roots of distinct square-free integers are linearly independent over Q(i),
/// so the sorted term list is a canonical form and structural equality is value
/// equality. The field contains every 24th root of unity.
class Surd {
 public:
  using Radicand = std::uint64_t;
  using Term = std::pair<Radicand, Gaussian>;

  Surd() = default;
  Surd(const Rational& q);   // NOLINT(google-explicit-constructor)
  Surd(const Gaussian& g);   // NOLINT(google-explicit-constructor)
  Surd(int q) : Surd(Rational(q)) {}  // NOLINT(google-explicit-constructor)

  /// sqrt(q) for q > 0.
  static Surd sqrt(const Rational& q);
  /// e^{2 pi i k / 24}.
  static const Surd& root_of_unity_24(int k);

  bool is_zero() const { return terms_.empty(); }
  bool is_gaussian() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 1); }
  const std::vector<Term>& terms() const { return terms_; }

  Surd conj() const;
  Surd inverse() const;
  HpComplex approx() const;

  Surd& operator+=(const Surd& o);
  Surd& operator-=(const Surd& o);
  friend Surd operator+(Surd a, const Surd& b) { return a += b; }
  friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
  friend Surd operator-(const Surd& a);
  friend Surd operator*(const Surd& a, const Surd& b);
  friend Surd operator/(const Surd& a, const Surd& b) { return a * b.inverse(); }
  friend bool operator==(const Surd&, const Surd&) = default;

 private:
  static Surd from_terms(std::vector<Term> terms);
  std::vector<Term> terms_;  // sorted by radicand, no zero coefficients
};

/// Largest prime factor allowed in a radicand; keeps factorization trivial.
inline constexpr std::uint64_t kMaxRadicandPrime = 1U << 20;

}  // namespace siframes
