#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "siframes/dimension.hpp"
#include "siframes/step_function.hpp"

namespace siframes {

/// Translation lattice b*Z; its dual fundamental domain is [0, 1/b).
struct LatticeConfig {
  Rational b{1};

  Rational period() const { return 1 / b; }
  friend bool operator==(const LatticeConfig&, const LatticeConfig&) = default;
};

/// Component m is xi -> f_hat(xi + m/b) on [0, 1/b); only nonzero components are stored.
struct FiberMap {
  LatticeConfig lattice;
  std::map<std::int64_t, ModStepFn> components;

  IntegralValue norm2() const;
  /// Inverse of fiberize.
  ModStepFn to_function() const;
};

FiberMap fiberize(const ModStepFn& f, const LatticeConfig& lattice);

/// One cell of the dual domain on which the range function is constant. The
/// basis vectors are indexed like `indices`; when `exact` they are orthogonal
/// with squared lengths `norms2`, otherwise orthonormal.
struct FiberCell {
  Rational lo;
  Rational hi;
  std::vector<std::int64_t> indices;
  std::vector<std::vector<Scalar>> basis;
  std::vector<Scalar> norms2;
  bool exact = true;

  int dim() const { return static_cast<int>(basis.size()); }
};

struct SISpace {
  LatticeConfig lattice;
  std::vector<FiberCell> cells;
  std::optional<std::vector<ModStepFn>> generators;

  bool exact() const;
  const std::vector<ModStepFn>& require_generators() const;
};

/// Span of the generator fibers, cell by cell. Each generator may carry a global
/// e^{-2 pi i t xi} factor on a cell; it is split off before spans are taken.
SISpace range_function(const std::vector<FiberMap>& generators);
/// The shift-invariant space over `lattice` generated by the given Fourier transforms.
SISpace si_space(const LatticeConfig& lattice, const std::vector<ModStepFn>& generators);

DimensionFunction dimension_function(const SISpace& v);

/// Orthogonal projection, applied fiberwise.
ModStepFn project(const SISpace& v, const ModStepFn& f);

struct Membership {
  bool member = false;
  Real residual_norm = 0;
  bool exact = true;
};

/// f lies in V when the projection residual vanishes (exact mode) or when its
/// norm is below eps * ||f|| (tolerance mode, or whenever data are inexact).
Membership membership(const SISpace& v, const ModStepFn& f, const Tolerance& mode = Tolerance::exactly());

struct InvarianceResult {
  bool invariant = true;
  std::optional<std::size_t> failing_generator;
  bool exact = true;
};

/// Invariance under translation by t: every stored generator translated by t stays in V.
InvarianceResult invariance_test(const SISpace& v, const Rational& t, const Tolerance& mode = Tolerance::exactly());

/// D_a V as a b*Z-invariant space, generated by T_{b d / a} D_a g for 0 <= d < a.
SISpace dilate_space(const SISpace& v, std::int64_t a);

struct DilationCheck {
  bool pass = false;
  DimensionFunction lhs;
  DimensionFunction rhs;
};

/// dim of the dilated space against sum_d dim_V((chi + d/b) / a).
DilationCheck dilation_dim_check(const SISpace& v, std::int64_t a);

struct FiberWitness {
  Rational lo;
  Rational hi;
  int dim_first = 0;
  int dim_second = 0;
};

/// A cell where the fiber spans of the two spaces differ, if any.
std::optional<FiberWitness> first_fiber_difference(const SISpace& v, const SISpace& w,
                                                   const Tolerance& mode = Tolerance::exactly());

/// Dimension function of V intersected with the functions whose Fourier
/// transform vanishes off `band` (a finite union of intervals).
DimensionFunction dimension_function_within(const SISpace& v,
                                            const std::vector<std::pair<Rational, Rational>>& band);

}  // namespace siframes
