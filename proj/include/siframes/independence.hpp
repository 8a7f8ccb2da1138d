#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "siframes/affine.hpp"
#include "siframes/hermitian_eigen.hpp"

namespace siframes {

/// Entry (p, q) = <f_p, f_q>. Entries below the diagonal are conjugates of the
/// computed upper entries, so the matrix is Hermitian by construction.
struct GramMatrix {
  std::vector<Element> elements;
  std::vector<ModStepFn> functions;
  Matrix<IntegralValue> entries;

  std::size_t size() const { return entries.size(); }
  bool exact() const;
  /// Principal submatrix on the given (sorted, distinct) positions.
  GramMatrix sub(const std::vector<std::size_t>& positions) const;
};

GramMatrix gram(const AffineConfig& cfg, const std::vector<Element>& elements);
GramMatrix gram_from_functions(std::vector<ModStepFn> functions);

enum class IndependenceStatus { Independent, Dependent, Inconclusive };

struct IndependenceVerdict {
  IndependenceStatus status = IndependenceStatus::Inconclusive;
  /// Null-vector candidate and the norm of the combination it reconstructs.
  std::optional<std::vector<Scalar>> witness;
  std::optional<Real> residual_norm;
  bool witness_exact = false;
  Real lambda_min = 0;
  Real lambda_max = 0;
  Real min_singular_value = 0;
  /// min_singular_value / max singular value (0 for the zero matrix).
  Real relative_singular_value = 0;
  Real tolerance;
};

inline const Real& default_independence_tolerance() {
  static const Real tol("1e-8");
  return tol;
}

/// Independent iff lambda_min > tol * lambda_max (after error bounds); a small
/// eigenvalue is reported as dependent only once the combination it describes
/// has been rebuilt and found to vanish.
IndependenceVerdict independence_test(const GramMatrix& g, const Real& tol = default_independence_tolerance());

std::string_view to_string(IndependenceStatus s);

struct TranslatesVerdict {
  IndependenceStatus status = IndependenceStatus::Independent;
  /// Sample point where the trigonometric polynomial is nonzero.
  Rational witness_xi;
  Real witness_modulus = 0;
};

/// Translates {T_{bk} f} combined with coefficients c_k: the combination
/// vanishes only if sum_k c_k e^{2 pi i b k xi} vanishes a.e., which for a
/// nonzero coefficient vector it never does.
TranslatesVerdict translates_criterion(const std::map<std::int64_t, Scalar>& coeffs, const Rational& b = Rational(1));

struct SweepWindow {
  std::int64_t j_min = 0;
  std::int64_t j_max = 0;
  std::int64_t k_min = 0;
  std::int64_t k_max = 0;

  std::vector<Element> elements() const;
};

struct SweepOptions {
  int max_subset_size = 4;
  Real tolerance = default_independence_tolerance();
  std::uint64_t max_subsets = 10'000'000;
  /// 0 means SIFRAMES_THREADS or 1.
  int threads = 0;
  /// Keep the relative singular value of every subset (in enumeration order).
  bool record_subsets = false;
  /// Also run the Parseval and V_0 invariance checks recorded in the report.
  bool context_checks = true;
};

struct SweepFailure {
  std::vector<Element> subset;
  IndependenceVerdict verdict;
};

struct SweepReport {
  SweepWindow window;
  int max_subset_size = 0;
  std::uint64_t subset_count = 0;
  std::uint64_t independent = 0;
  std::uint64_t dependent = 0;
  std::uint64_t inconclusive = 0;
  std::uint64_t escalations = 0;
  double min_relative_singular_value = 0;
  double min_singular_value = 0;
  std::optional<SweepFailure> first_failure;
  std::optional<bool> parseval_verified;
  std::optional<bool> v0_invariant;
  std::vector<float> subset_relative_singular_values;

  bool pass() const { return dependent == 0 && inconclusive == 0; }
};

/// Number of nonempty subsets of n elements with at most k members.
std::uint64_t subset_count(std::uint64_t n, int k);

/// All subsets of the window up to the maximum size, by size and then
/// lexicographically; the first failure is the earliest in that order.
SweepReport independence_sweep(const AffineConfig& cfg, const SweepWindow& window, const SweepOptions& options = {});

}  // namespace siframes
