#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "siframes/fiber.hpp"

namespace siframes {

enum class SupportMode { Full, H2plus };

/// Affine system {a^{j/2} psi(a^j x - b k)} given by a, b and psi_hat.
struct AffineConfig {
  std::int64_t a = 2;
  Rational b{1};
  ModStepFn psi_hat;
  SupportMode mode = SupportMode::Full;

  /// Throws InvalidArgument / NonpositiveScale / UnsupportedSupport.
  void validate() const;
  LatticeConfig lattice() const { return {b}; }
};

/// Element (j, k) is D_a^j T_{bk} psi.
struct Element {
  std::int64_t j = 0;
  std::int64_t k = 0;

  friend auto operator<=>(const Element&, const Element&) = default;
};

/// a^{-j/2} e^{-2 pi i b k a^{-j} xi} psi_hat(a^{-j} xi)
ModStepFn element_ft(const AffineConfig& cfg, const Element& e);

/// Truncated space of negative dilates: generated by scales -J..-1, realized
/// over the lattice b a^L Z (L = lattice_depth >= J). At scale j the generators
/// are the elements (j, r) for 0 <= r < a^{L - |j|}.
struct NegativeDilatesSpace {
  AffineConfig cfg;
  int depth = 1;
  int lattice_depth = 1;
  SISpace space;
};

NegativeDilatesSpace negative_dilates_space(const AffineConfig& cfg, int depth, std::optional<int> lattice_depth = {});

/// Span of the scales j_lo..j_hi (all <= 0) over the lattice b a^L Z.
SISpace scale_band_space(const AffineConfig& cfg, int j_lo, int j_hi, int lattice_depth);

/// Truncation depth J counts as stable when the next scale adds nothing away
/// from the low band: on the common lattice b a^{J+1} Z, the dimension
/// functions of V_J and V_{J+1} restricted to {|xi| >= a^{-J} rho} agree, where
/// rho = inf |supp psi_hat|.
struct Stabilization {
  bool stabilized = false;
  int depth = 0;
  Rational band_edge;
  DimensionFunction previous;
  DimensionFunction current;
};

Stabilization stabilization_check(const AffineConfig& cfg, int max_depth);

struct VkInvariance {
  int depth = 1;
  Rational shift;
  InvarianceResult invariance;
  /// psi itself, i.e. the scale-0 generator, lies in the truncated V_0.
  bool psi_in_v0 = false;
  /// A cell where V_0 and V_1 = D V_0 (both truncated at the same depth) differ.
  std::optional<FiberWitness> v0_v1_witness;
  /// (M, invariant under b a^M Z) for M = 0..max_alpha_power.
  std::vector<std::pair<int, bool>> alpha_lattices;
};

VkInvariance vk_invariance_check(const AffineConfig& cfg, int depth, const Rational& shift, int max_alpha_power = 0);

struct CalderonSum {
  /// Multiplicative fundamental domains: [l, a l), plus [-a l, -l) in full mode.
  std::vector<std::pair<Rational, Rational>> domain;
  ModStepFn sum;
};

CalderonSum calderon_sum(const AffineConfig& cfg);

/// sum over j in the window and all k of |<f, D^j T_{bk} psi>|^2. Without a
/// window every scale whose support meets supp f_hat is included.
IntegralValue frame_sum(const AffineConfig& cfg, const ModStepFn& f_hat,
                        std::optional<std::pair<std::int64_t, std::int64_t>> j_window = {});

/// Scales j with supp f_hat meeting a^j supp psi_hat.
std::pair<std::int64_t, std::int64_t> frame_scale_range(const AffineConfig& cfg, const ModStepFn& f_hat);

struct ProbeResult {
  IntegralValue frame_sum;
  IntegralValue norm2;
  bool pass = false;
};

struct ParsevalReport {
  CalderonSum calderon;
  bool calderon_pass = false;
  /// Shift-orthogonality t_q == 0 for 0 < |q| <= q_max, a not dividing q.
  /// This sufficient condition is a standard external characterization.
  std::int64_t q_max = 0;
  std::optional<std::int64_t> failing_q;
  bool shift_orthogonality_pass = false;
  std::vector<ProbeResult> probes;
  bool probes_pass = true;

  bool pass() const { return calderon_pass && shift_orthogonality_pass && probes_pass; }
};

ParsevalReport parseval_verify(const AffineConfig& cfg, const std::vector<ModStepFn>& probes);

}  // namespace siframes
