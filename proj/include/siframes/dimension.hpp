#pragma once

#include <vector>

#include "siframes/numeric.hpp"

namespace siframes {

struct DimSegment {
  Rational lo;
  Rational hi;
  int dim = 0;

  friend bool operator==(const DimSegment&, const DimSegment&) = default;
};

/// Integer step function on [lo, hi) with rational breakpoints. Segments cover
/// the domain exactly and adjacent segments always differ, so equality of two
/// functions is structural equality.
class DimensionFunction {
 public:
  DimensionFunction() = default;
  DimensionFunction(Rational lo, Rational hi, int value = 0);
  static DimensionFunction from_segments(Rational lo, Rational hi, std::vector<DimSegment> segments);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  const std::vector<DimSegment>& segments() const { return segments_; }

  int at(const Rational& x) const;
  int max() const;
  int min() const;
  /// Integral over the domain.
  Rational integral() const;

  /// x -> this(s * x + t) on [lo, hi); the image must stay inside the domain.
  DimensionFunction pullback(const Rational& s, const Rational& t, const Rational& lo, const Rational& hi) const;

  friend DimensionFunction operator+(const DimensionFunction& a, const DimensionFunction& b);
  friend bool operator==(const DimensionFunction&, const DimensionFunction&) = default;

 private:
  Rational lo_{0};
  Rational hi_{1};
  std::vector<DimSegment> segments_;
};

/// a <= b everywhere on the common domain.
bool pointwise_le(const DimensionFunction& a, const DimensionFunction& b);

}  // namespace siframes
