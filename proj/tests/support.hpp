#pragma once

#include <string>

#include "siframes/affine.hpp"
#include "siframes/numeric.hpp"
#include "siframes/step_function.hpp"

namespace testing {

using namespace siframes;

inline Rational Q(const char* text) { return parse_rational(text); }
inline Rational Q(int n) { return Rational(n); }

inline ModStepFn ind(const char* lo, const char* hi, const Scalar& amp = Scalar(1)) {
  return ModStepFn::indicator(Q(lo), Q(hi), amp);
}

inline ModStepFn psi0() { return ind("-1/4", "-1/8") + ind("1/8", "1/4"); }
inline ModStepFn psi1() { return ind("-1/2", "-1/4") + ind("1/4", "3/4"); }

inline AffineConfig heil() { return {2, Rational(1), ind("1", "2"), SupportMode::H2plus}; }

/// |psi_hat|^2 = 1/2 on [3/4,7/8) u [3/2,7/4), 1 on [7/8,3/2).
inline AffineConfig tapered() {
  const Scalar half = Scalar::sqrt(Q("1/2"));
  return {2, Rational(1), ind("3/4", "7/8", half) + ind("7/8", "3/2") + ind("3/2", "7/4", half), SupportMode::H2plus};
}

/// The same profile with the first plateau on [3/4,1): not Parseval.
inline AffineConfig tapered_literal() {
  const Scalar half = Scalar::sqrt(Q("1/2"));
  return {2, Rational(1), ind("3/4", "1", half) + ind("1", "3/2") + ind("3/2", "7/4", half), SupportMode::H2plus};
}

inline double to_double(const Real& x) { return x.convert_to<double>(); }

}  // namespace testing
