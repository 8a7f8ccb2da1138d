#include "doctest.h"
#include "siframes/dimension.hpp"
#include "siframes/errors.hpp"
#include "siframes/fiber.hpp"
#include "siframes/probes.hpp"
#include "support.hpp"

using namespace testing;

namespace {

const LatticeConfig Z{1};

DimensionFunction dims(std::vector<DimSegment> segs, const Rational& hi = 1) {
  return DimensionFunction::from_segments(0, hi, std::move(segs));
}

}  // namespace

TEST_CASE("fiberize") {
  const FiberMap f = fiberize(psi0(), Z);
  REQUIRE(f.components.size() == 2);
  CHECK(f.components.at(0) == ind("1/8", "1/4"));
  CHECK(f.components.at(-1) == ind("3/4", "7/8"));
  CHECK(f.to_function() == psi0());
  CHECK(fiberize(ModStepFn(), {Q(3)}).components.empty());
}

TEST_CASE("fiberize: unitarity and intertwining") {
  ProbeSource src(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ModStepFn f = src.step_function(-4, 4);
    const LatticeConfig lat{src.grid_point(Q("1/2"), 3, 2)};
    if (lat.b <= 0) continue;
    CHECK(fiberize(f, lat).norm2().exact_value() == norm2(f).exact_value());
    for (int k = -3; k <= 3; ++k) {
      const FiberMap lhs = fiberize(modulate(f, lat.b * k), lat);
      const FiberMap rhs = fiberize(f, lat);
      REQUIRE(lhs.components.size() == rhs.components.size());
      for (const auto& [m, comp] : rhs.components) CHECK(lhs.components.at(m) == modulate(comp, lat.b * k));
    }
  }
}

TEST_CASE("range and dimension functions") {
  const SISpace v = si_space(Z, {psi0()});
  CHECK(dimension_function(v) ==
        dims({{0, Q("1/8"), 0}, {Q("1/8"), Q("1/4"), 1}, {Q("1/4"), Q("3/4"), 0}, {Q("3/4"), Q("7/8"), 1},
              {Q("7/8"), 1, 0}}));
  CHECK(dimension_function(si_space(Z, {})) == DimensionFunction(0, 1, 0));
  const FiberMap F = fiberize(psi0(), Z);
  CHECK(dimension_function(range_function({F, F})) == dimension_function(range_function({F})));
  CHECK(dimension_function(si_space({Q(2)}, {psi0()})).max() <= 1);
  CHECK_THROWS_AS(range_function({F, fiberize(psi0(), {Q(2)})}), Error);
}

TEST_CASE("projection: section 3 residuals") {
  const Rational eps = Q("1/4");
  const ModStepFn psi = psi0() + scale(psi1(), Scalar(eps));
  const AffineConfig cfg{2, 1, psi, SupportMode::Full};
  const SISpace v0 = negative_dilates_space(cfg, 3).space;
  const ModStepFn outer = ind("-1/2", "-1/4") + ind("3/8", "3/4");
  const ModStepFn r1 = scale(outer, Scalar(eps)) + scale(ind("-1/4", "-1/8") - ind("1/4", "3/8"), Scalar((1 - eps) / 2));
  const ModStepFn r2 =
      modulate(scale(outer, Scalar(eps)) + scale(ind("-1/4", "-1/8") + ind("1/4", "3/8"), Scalar((1 + eps) / 2)), 1);
  CHECK(psi - project(v0, psi) == r1);
  CHECK(modulate(psi, 1) - project(v0, modulate(psi, 1)) == r2);
}

TEST_CASE("projection properties") {
  ProbeSource src(5);
  for (int trial = 0; trial < 10; ++trial) {
    const LatticeConfig lat{2};
    const SISpace v = si_space(lat, {src.step_function(-2, 2), modulate(src.step_function(-1, 3), Q("1/3"))});
    const ModStepFn f = src.step_function(-3, 3);
    const ModStepFn g = src.step_function(-3, 3);
    const ModStepFn pf = project(v, f);
    for (const auto& gen : v.require_generators()) CHECK(equals(project(v, gen), gen, Tolerance::within(Real("1e-10"))));
    CHECK(equals(project(v, pf), pf, Tolerance::within(Real("1e-10"))));
    const HpComplex lhs = integrate(mul_conj(pf, g)).value();
    const HpComplex rhs = integrate(mul_conj(f, project(v, g))).value();
    CHECK(to_double(abs(lhs - rhs)) < 1e-10);
    for (int k = -2; k <= 2; ++k) {
      CHECK(equals(project(v, modulate(f, lat.b * k)), modulate(pf, lat.b * k), Tolerance::within(Real("1e-10"))));
    }
    CHECK(to_double(norm2(pf).value().re) <= to_double(norm2(f).value().re) + 1e-12);
  }
}

TEST_CASE("membership") {
  const SISpace v = si_space(Z, {psi0()});
  const Membership gen = membership(v, psi0());
  CHECK(gen.member);
  CHECK(gen.residual_norm == 0);
  const Membership other = membership(v, psi1());
  CHECK_FALSE(other.member);
  CHECK(to_double(other.residual_norm * other.residual_norm) == doctest::Approx(0.75));
  CHECK(membership(si_space(Z, {}), ModStepFn()).member);
}

TEST_CASE("invariance_test") {
  const AffineConfig cfg{2, 1, psi0() + scale(psi1(), Scalar(Q("1/4"))), SupportMode::Full};
  const SISpace v0 = negative_dilates_space(cfg, 3).space;
  CHECK(invariance_test(v0, 2).invariant);
  const InvarianceResult one = invariance_test(v0, 1);
  CHECK_FALSE(one.invariant);
  CHECK(one.failing_generator.has_value());
  CHECK(invariance_test(si_space(Z, {psi0()}), 1).invariant);
  SISpace bare = si_space(Z, {psi0()});
  bare.generators.reset();
  CHECK_THROWS_AS(invariance_test(bare, 1), Error);
}

TEST_CASE("dilation") {
  const SISpace v = si_space(Z, {psi0()});
  const DimensionFunction expected = dims({{0, Q("1/4"), 0}, {Q("1/4"), Q("3/4"), 1}, {Q("3/4"), 1, 0}});
  CHECK(dimension_function(dilate_space(v, 2)) == expected);
  const DilationCheck check = dilation_dim_check(v, 2);
  CHECK(check.pass);
  CHECK(check.lhs == expected);
  CHECK(check.rhs == expected);
  CHECK(dilation_dim_check(si_space(Z, {}), 3).pass);
  CHECK(dimension_function(dilate_space(si_space(Z, {}), 2)) == DimensionFunction(0, 1, 0));

  ProbeSource src(3);
  for (int trial = 0; trial < 10; ++trial) {
    const SISpace w = si_space(Z, {src.indicator(-3, 3)});
    const std::int64_t a = src.integer(2, 4);
    const DimensionFunction d = dimension_function(w);
    const DimensionFunction dd = dimension_function(dilate_space(w, a));
    CHECK(dd.integral() == a * d.integral());
    CHECK(dilation_dim_check(w, a).pass);
    CHECK(first_fiber_difference(w, dilate_space(w, a)).has_value());
  }
}

TEST_CASE("dimension function helpers") {
  const DimensionFunction d = dims({{0, Q("1/2"), 1}, {Q("1/2"), 1, 2}});
  CHECK(d.at(Q("1/4")) == 1);
  CHECK(d.at(Q("1/2")) == 2);
  CHECK(d.integral() == Q("3/2"));
  CHECK((d + d).max() == 4);
  CHECK(pointwise_le(d, d + d));
  CHECK(d.pullback(Q("1/2"), 0, 0, 1) == DimensionFunction(0, 1, 1));
  CHECK_THROWS_AS(dims({{0, Q("1/2"), 1}}), Error);
}
