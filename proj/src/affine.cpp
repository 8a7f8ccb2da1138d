#include "siframes/affine.hpp"

#include <algorithm>

#include "siframes/errors.hpp"

namespace siframes {

namespace {

Rational power(std::int64_t a, std::int64_t n) { return pow(Rational(a), n); }

/// inf |xi| over the support; 0 if the support touches the origin.
Rational inf_abs_support(const ModStepFn& f) {
  std::optional<Rational> best;
  for (const auto& p : f.pieces()) {
    Rational d = p.lo >= 0 ? p.lo : (p.hi <= 0 ? Rational(-p.hi) : Rational(0));
    if (!best || d < *best) best = d;
  }
  return best.value_or(Rational(0));
}

Rational sup_abs_support(const ModStepFn& f) {
  Rational best = 0;
  for (const auto& p : f.pieces()) best = std::max({best, abs(p.lo), abs(p.hi)});
  return best;
}

bool negligible(const ModStepFn& f) {
  if (f.is_exact()) return f.is_zero();
  return equals(f, ModStepFn{}, Tolerance::within());
}

bool same_value(const IntegralValue& x, const IntegralValue& y) {
  if (x.is_exact() && y.is_exact()) return x.exact_value() == y.exact_value();
  const HpComplex d = x.value() - y.value();
  return abs(d) <= Real("1e-9") * (1 + abs(y.value())) + x.error_bound() + y.error_bound();
}

/// Positive-frequency intervals of the support and mirrored negative ones.
struct SidedIntervals {
  std::vector<std::pair<Rational, Rational>> pos;
  std::vector<std::pair<Rational, Rational>> neg;  // as [-hi, -lo)
};

SidedIntervals sided(const ModStepFn& f) {
  SidedIntervals out;
  for (const auto& p : f.pieces()) {
    if (p.hi > 0) out.pos.emplace_back(std::max(p.lo, Rational(0)), p.hi);
    if (p.lo < 0) out.neg.emplace_back(-std::min(p.hi, Rational(0)), -p.lo);
  }
  return out;
}

/// Update [lo, hi] with the scales j for which a^j [u, v) meets [x, y).
void scales_meeting(std::int64_t a, const std::pair<Rational, Rational>& psi, const std::pair<Rational, Rational>& f,
                    std::optional<std::int64_t>& lo, std::optional<std::int64_t>& hi) {
  const auto& [u, v] = psi;
  const auto& [x, y] = f;
  if (u == 0 || x == 0) {
    throw Error(ErrorKind::UnsupportedSupport, "support touches the origin, infinitely many scales contribute");
  }
  // smallest j with a^j v > x
  std::int64_t j_min = 0;
  if (v > x) {
    while (power(a, j_min - 1) * v > x) --j_min;
  } else {
    while (!(power(a, j_min) * v > x)) ++j_min;
  }
  // largest j with a^j u < y
  std::int64_t j_max = 0;
  if (u < y) {
    while (power(a, j_max + 1) * u < y) ++j_max;
  } else {
    while (!(power(a, j_max) * u < y)) --j_max;
  }
  if (j_min > j_max) return;
  lo = lo ? std::min(*lo, j_min) : j_min;
  hi = hi ? std::max(*hi, j_max) : j_max;
}

void require_h2plus(const AffineConfig& cfg, const ModStepFn& f, const char* what) {
  if (cfg.mode != SupportMode::H2plus) return;
  for (const auto& p : f.pieces()) {
    if (p.lo < 0) {
      throw Error(ErrorKind::UnsupportedSupport, std::string(what) + " has negative frequencies in H2plus mode");
    }
  }
}

}  // namespace

void AffineConfig::validate() const {
  if (a < 2) throw Error(ErrorKind::InvalidArgument, "dilation a must be an integer >= 2");
  if (b <= 0) throw Error(ErrorKind::NonpositiveScale, "lattice spacing b must be positive");
  require_h2plus(*this, psi_hat, "psi_hat");
}

ModStepFn element_ft(const AffineConfig& cfg, const Element& e) {
  const ModStepFn shifted = modulate(cfg.psi_hat, cfg.b * e.k);
  const ModStepFn dilated = affine_reparam(shifted, power(cfg.a, e.j), 0);
  if (e.j == 0) return dilated;
  return scale(dilated, Scalar::sqrt(power(cfg.a, -e.j)));
}

SISpace scale_band_space(const AffineConfig& cfg, int j_lo, int j_hi, int lattice_depth) {
  if (j_hi > 0 || j_lo > j_hi || -j_lo > lattice_depth) {
    throw Error(ErrorKind::InvalidArgument, "scale band must satisfy -L <= j_lo <= j_hi <= 0");
  }
  std::vector<ModStepFn> gens;
  if (!cfg.psi_hat.is_zero()) {
    for (int j = j_hi; j >= j_lo; --j) {
      const std::int64_t count = to_int64(numerator(power(cfg.a, lattice_depth + j)));
      for (std::int64_t r = 0; r < count; ++r) gens.push_back(element_ft(cfg, {j, r}));
    }
  }
  return si_space(LatticeConfig{cfg.b * power(cfg.a, lattice_depth)}, gens);
}

NegativeDilatesSpace negative_dilates_space(const AffineConfig& cfg, int depth, std::optional<int> lattice_depth) {
  cfg.validate();
  if (depth < 1) throw Error(ErrorKind::InvalidArgument, "truncation depth must be >= 1");
  const int l = lattice_depth.value_or(depth);
  if (l < depth) throw Error(ErrorKind::InvalidArgument, "lattice depth must be >= truncation depth");
  return {cfg, depth, l, scale_band_space(cfg, -depth, -1, l)};
}

Stabilization stabilization_check(const AffineConfig& cfg, int max_depth) {
  cfg.validate();
  if (max_depth < 2) throw Error(ErrorKind::InvalidArgument, "maximum depth must be >= 2");
  const Rational rho = inf_abs_support(cfg.psi_hat);
  if (!cfg.psi_hat.is_zero() && rho == 0) {
    throw Error(ErrorKind::UnsupportedSupport, "psi_hat support touches the origin");
  }
  const Rational reach = sup_abs_support(cfg.psi_hat) + 1;
  Stabilization out;
  for (int depth = 1; depth < max_depth; ++depth) {
    const Rational edge = rho * power(cfg.a, -depth);
    const std::vector<std::pair<Rational, Rational>> band{{-reach, -edge}, {edge, reach}};
    const SISpace v = scale_band_space(cfg, -depth, -1, depth + 1);
    const SISpace w = scale_band_space(cfg, -depth - 1, -1, depth + 1);
    out.depth = depth;
    out.band_edge = edge;
    out.previous = dimension_function_within(v, band);
    out.current = dimension_function_within(w, band);
    if (out.previous == out.current) {
      out.stabilized = true;
      return out;
    }
  }
  return out;
}

VkInvariance vk_invariance_check(const AffineConfig& cfg, int depth, const Rational& shift, int max_alpha_power) {
  const NegativeDilatesSpace v0 = negative_dilates_space(cfg, depth);
  VkInvariance out;
  out.depth = depth;
  out.shift = shift;
  out.invariance = invariance_test(v0.space, shift);
  out.psi_in_v0 = membership(v0.space, cfg.psi_hat).member;
  const SISpace v1 = scale_band_space(cfg, -depth, 0, depth);
  out.v0_v1_witness = first_fiber_difference(v0.space, v1);
  for (int m = 0; m <= max_alpha_power; ++m) {
    out.alpha_lattices.emplace_back(m, invariance_test(v0.space, cfg.b * power(cfg.a, m)).invariant);
  }
  return out;
}

CalderonSum calderon_sum(const AffineConfig& cfg) {
  cfg.validate();
  CalderonSum out;
  if (cfg.psi_hat.is_zero()) {
    out.domain.emplace_back(1, cfg.a);
    if (cfg.mode == SupportMode::Full) out.domain.insert(out.domain.begin(), {Rational(-cfg.a), Rational(-1)});
    return out;
  }
  const Rational rho = inf_abs_support(cfg.psi_hat);
  if (rho == 0) throw Error(ErrorKind::UnsupportedSupport, "psi_hat support touches the origin");
  const Rational reach = sup_abs_support(cfg.psi_hat);

  std::int64_t n = 0;
  while (power(cfg.a, n) < rho) ++n;
  while (power(cfg.a, n - 1) >= rho) --n;
  const Rational ell = power(cfg.a, n);
  const Rational top = ell * cfg.a;
  if (cfg.mode == SupportMode::Full) out.domain.emplace_back(-top, -ell);
  out.domain.emplace_back(ell, top);

  // Scales with a^s [ell, a ell) inside [rho, reach] up to endpoints.
  std::int64_t s_lo = 0;
  while (power(cfg.a, s_lo) * top > rho) --s_lo;
  std::int64_t s_hi = 0;
  while (power(cfg.a, s_hi) * ell < reach) ++s_hi;

  const ModStepFn density = mul_conj(cfg.psi_hat, cfg.psi_hat);
  ModStepFn total;
  for (std::int64_t s = s_lo; s <= s_hi; ++s) total = total + affine_reparam(density, power(cfg.a, -s), 0);
  for (const auto& [lo, hi] : out.domain) out.sum = out.sum + restrict(total, lo, hi);
  return out;
}

std::pair<std::int64_t, std::int64_t> frame_scale_range(const AffineConfig& cfg, const ModStepFn& f_hat) {
  cfg.validate();
  const SidedIntervals psi = sided(cfg.psi_hat);
  const SidedIntervals f = sided(f_hat);
  std::optional<std::int64_t> lo;
  std::optional<std::int64_t> hi;
  for (const auto& pi : psi.pos)
    for (const auto& fi : f.pos) scales_meeting(cfg.a, pi, fi, lo, hi);
  for (const auto& pi : psi.neg)
    for (const auto& fi : f.neg) scales_meeting(cfg.a, pi, fi, lo, hi);
  if (!lo) return {0, -1};
  return {*lo, *hi};
}

IntegralValue frame_sum(const AffineConfig& cfg, const ModStepFn& f_hat,
                        std::optional<std::pair<std::int64_t, std::int64_t>> j_window) {
  const auto [j_lo, j_hi] = j_window ? *j_window : frame_scale_range(cfg, f_hat);
  const Rational period = 1 / cfg.b;
  IntegralValue total;
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    ModStepFn g = mul_conj(affine_reparam(f_hat, power(cfg.a, -j), 0), cfg.psi_hat);
    if (g.is_zero()) continue;
    if (j != 0) g = scale(g, Scalar::sqrt(power(cfg.a, j)));
    const ModStepFn folded = periodize(g, period);
    total = total + integrate(mul_conj(folded, folded));
  }
  return total * Scalar(period);
}

ParsevalReport parseval_verify(const AffineConfig& cfg, const std::vector<ModStepFn>& probes) {
  ParsevalReport out;
  out.calderon = calderon_sum(cfg);
  ModStepFn target;
  for (const auto& [lo, hi] : out.calderon.domain) target = target + ModStepFn::indicator(lo, hi, Scalar(cfg.b));
  out.calderon_pass = negligible(out.calderon.sum - target);

  out.shift_orthogonality_pass = true;
  if (const auto hull = cfg.psi_hat.support_hull()) {
    const Rational diam = hull->second - hull->first;
    out.q_max = to_int64(ceil(cfg.b * diam));
    for (std::int64_t q = -out.q_max; q <= out.q_max && !out.failing_q; ++q) {
      if (q % cfg.a == 0) continue;
      const Rational offset = Rational(q) / cfg.b;
      ModStepFn t;
      for (std::int64_t j = 0; power(cfg.a, j) * abs(offset) < diam; ++j) {
        const Rational s = power(cfg.a, -j);
        t = t + mul_conj(affine_reparam(cfg.psi_hat, s, 0), affine_reparam(cfg.psi_hat, s, -offset));
      }
      if (!negligible(t)) out.failing_q = q;
    }
    out.shift_orthogonality_pass = !out.failing_q;
  }

  for (const auto& probe : probes) {
    require_h2plus(cfg, probe, "probe");
    ProbeResult r{frame_sum(cfg, probe), norm2(probe), false};
    r.pass = same_value(r.frame_sum, r.norm2);
    out.probes_pass = out.probes_pass && r.pass;
    out.probes.push_back(std::move(r));
  }
  return out;
}

}  // namespace siframes
