#include "doctest.h"
#include "siframes/errors.hpp"
#include "siframes/fiber.hpp"
#include "siframes/probes.hpp"
#include "support.hpp"

using namespace testing;

namespace {

AffineConfig section3() { return {2, 1, psi0() + scale(psi1(), Scalar(Q("1/4"))), SupportMode::Full}; }

Rational pow_rational(std::int64_t a, std::int64_t j) {
  Rational r = 1;
  for (std::int64_t i = 0; i < (j < 0 ? -j : j); ++i) r *= a;
  return j < 0 ? 1 / r : r;
}

}  // namespace

TEST_CASE("element_ft") {
  const AffineConfig cfg = heil();
  CHECK(element_ft(cfg, {0, 0}) == cfg.psi_hat);
  CHECK(element_ft(cfg, {1, 0}) == ind("2", "4", Scalar::sqrt(Q("1/2"))));
  CHECK(element_ft(cfg, {0, 1}) == modulate(cfg.psi_hat, 1));
}

TEST_CASE("element_ft: composition law and norm preservation") {
  for (const AffineConfig& cfg : {heil(), tapered(), section3()}) {
    const Scalar n2 = norm2(cfg.psi_hat).exact_value();
    for (int j = -4; j <= 4; ++j) {
      const Rational s = pow_rational(cfg.a, j);
      const Scalar c = Scalar::sqrt(1 / s);
      for (int k = -4; k <= 4; ++k) {
        const ModStepFn e = element_ft(cfg, {j, k});
        // D^j T_{bk} = T_{b a^{-j} k} D^j
        const ModStepFn reparam_first = modulate(scale(affine_reparam(cfg.psi_hat, s, 0), c), cfg.b * k / s);
        const ModStepFn modulate_first = scale(affine_reparam(modulate(cfg.psi_hat, cfg.b * k), s, 0), c);
        CHECK(e == reparam_first);
        CHECK(e == modulate_first);
        CHECK(norm2(e).exact_value() == n2);
      }
    }
  }
}

TEST_CASE("negative dilates") {
  const AffineConfig zero{2, 1, ModStepFn(), SupportMode::Full};
  CHECK(dimension_function(negative_dilates_space(zero, 2).space).max() == 0);

  const AffineConfig cfg = section3();
  const auto v1 = dimension_function(negative_dilates_space(cfg, 1, 3).space);
  const auto v2 = dimension_function(negative_dilates_space(cfg, 2, 3).space);
  const auto v3 = dimension_function(negative_dilates_space(cfg, 3, 3).space);
  CHECK(pointwise_le(v1, v2));
  CHECK(pointwise_le(v2, v3));

  // {supp f_hat in [-1/4, 3/8], f_hat(xi - 1/2) = f_hat(xi) on [1/4, 3/8]}, away
  // from the neighbourhood of 0 that three scales cannot reach
  const SISpace v0 = negative_dilates_space(cfg, 3).space;
  CHECK(membership(v0, ind("1/8", "1/4")).member);
  CHECK(membership(v0, ind("-1/4", "-1/8") + ind("1/4", "3/8")).member);
  CHECK(membership(v0, ind("-1/5", "-1/8") + ind("3/10", "3/8") + ind("1/16", "1/9", 3)).member);
  CHECK_FALSE(membership(v0, ind("-1/8", "1/8")).member);
  CHECK(membership(negative_dilates_space(cfg, 5).space, ind("-1/8", "-1/32") + ind("1/32", "1/8")).member);
  CHECK_FALSE(membership(v0, ind("1/4", "3/8")).member);
  CHECK_FALSE(membership(v0, ind("3/8", "1/2")).member);
  CHECK_FALSE(membership(v0, ind("-1/2", "-1/4")).member);
}

TEST_CASE("stabilization") {
  const Stabilization s3 = stabilization_check(section3(), 4);
  CHECK(s3.stabilized);
  CHECK(s3.depth <= 3);
  const AffineConfig zero{2, 1, ModStepFn(), SupportMode::Full};
  const Stabilization z = stabilization_check(zero, 2);
  CHECK(z.stabilized);
  CHECK(z.depth == 1);
  const Stabilization h = stabilization_check(heil(), 4);
  CHECK(h.stabilized);
  CHECK_THROWS_AS(stabilization_check(heil(), 1), Error);
}

TEST_CASE("vk invariance") {
  const VkInvariance h = vk_invariance_check(heil(), 3, 1, 2);
  CHECK(h.invariance.invariant);
  CHECK_FALSE(h.psi_in_v0);
  CHECK(h.v0_v1_witness.has_value());
  for (const auto& [m, ok] : h.alpha_lattices) CHECK(ok);
  CHECK_FALSE(vk_invariance_check(section3(), 3, 1).invariance.invariant);
  CHECK(vk_invariance_check(section3(), 3, 2).invariance.invariant);
  CHECK(vk_invariance_check(tapered(), 3, 1).invariance.invariant);
}

TEST_CASE("calderon sum") {
  const CalderonSum h = calderon_sum(heil());
  REQUIRE(h.domain.size() == 1);
  CHECK(h.domain[0] == std::pair<Rational, Rational>(1, 2));
  CHECK(h.sum == ind("1", "2"));
  CHECK(calderon_sum(tapered()).sum == ind("1", "2"));
  CHECK(calderon_sum(tapered_literal()).sum == ind("1", "7/4") + ind("7/4", "2", Q("1/2")));
  const AffineConfig zero{2, 1, ModStepFn(), SupportMode::H2plus};
  CHECK(calderon_sum(zero).sum.is_zero());
  const AffineConfig touching{2, 1, ind("0", "1"), SupportMode::H2plus};
  CHECK_THROWS_AS(calderon_sum(touching), Error);
  const AffineConfig wide{2, 1, ind("1", "3"), SupportMode::H2plus};
  CHECK(calderon_sum(wide).sum == ind("1", "3/2", 2) + ind("3/2", "2"));
}

TEST_CASE("frame sums") {
  const AffineConfig cfg = heil();
  CHECK(frame_sum(cfg, ind("1", "2")).exact_value() == Scalar(1));
  CHECK(frame_sum(cfg, ModStepFn()).exact_value() == Scalar(0));
  CHECK(frame_sum(cfg, ind("1", "3")).exact_value() == Scalar(2));
  for (const ModStepFn& f : random_probes(10, 99, 0, 8)) {
    CHECK(frame_sum(cfg, f).exact_value() == norm2(f).exact_value());
    CHECK(frame_sum(tapered(), f).exact_value() == norm2(f).exact_value());
  }
}

TEST_CASE("parseval_verify") {
  const auto probes = random_probes(10, 1, 0, 8);
  CHECK(parseval_verify(heil(), probes).pass());
  CHECK(parseval_verify(tapered(), probes).pass());
  const ParsevalReport wide = parseval_verify({2, 1, ind("1", "3"), SupportMode::H2plus}, probes);
  CHECK_FALSE(wide.calderon_pass);
  CHECK_FALSE(wide.pass());
  const ParsevalReport zero = parseval_verify({2, 1, ModStepFn(), SupportMode::H2plus}, {});
  CHECK_FALSE(zero.calderon_pass);
  CHECK_FALSE(parseval_verify(tapered_literal(), probes).calderon_pass);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS((AffineConfig{1, 1, ind("1", "2"), SupportMode::Full}.validate()), Error);
  CHECK_THROWS_AS((AffineConfig{2, 0, ind("1", "2"), SupportMode::Full}.validate()), Error);
  CHECK_THROWS_AS((AffineConfig{2, 1, ind("-1", "2"), SupportMode::H2plus}.validate()), Error);
}
