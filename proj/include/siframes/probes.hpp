#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "siframes/step_function.hpp"

namespace siframes {

/// Deterministic generator of rational test data. Only raw engine output is
/// used, so sequences are identical on every platform.
class ProbeSource {
 public:
  explicit ProbeSource(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi);
  /// Random multiple of 1/denominator in [lo, hi).
  Rational grid_point(const Rational& lo, const Rational& hi, std::int64_t denominator);

  /// 1 to max_pieces pieces with breakpoints on a 1/denominator grid inside
  /// [lo, hi) and small Gaussian-rational amplitudes.
  ModStepFn step_function(const Rational& lo, const Rational& hi, int max_pieces = 4, std::int64_t denominator = 12);
  /// Same support pattern with every amplitude 1.
  ModStepFn indicator(const Rational& lo, const Rational& hi, int max_pieces = 3, std::int64_t denominator = 8);

 private:
  std::mt19937_64 engine_;
};

std::vector<ModStepFn> random_probes(std::size_t count, std::uint64_t seed, const Rational& lo, const Rational& hi);

}  // namespace siframes
