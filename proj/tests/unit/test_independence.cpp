#include <algorithm>

#include "doctest.h"
#include "siframes/errors.hpp"
#include "siframes/independence.hpp"
#include "siframes/probes.hpp"
#include "support.hpp"

using namespace testing;

namespace {

std::vector<Element> square(int r) {
  std::vector<Element> out;
  for (int j = -r; j <= r; ++j)
    for (int k = -r; k <= r; ++k) out.push_back({j, k});
  return out;
}

std::vector<Element> heil_window() { return SweepWindow{-3, 3, 0, 4}.elements(); }

AffineConfig section3_like() { return {2, 1, psi0() + scale(psi1(), Scalar(Q("1/4"))), SupportMode::Full}; }

SweepOptions quick(int size) {
  SweepOptions o;
  o.max_subset_size = size;
  o.context_checks = false;
  return o;
}

}  // namespace

TEST_CASE("gram") {
  const GramMatrix g = gram(heil(), square(1));
  CHECK(g.exact());
  for (std::size_t p = 0; p < g.size(); ++p)
    for (std::size_t q = 0; q < g.size(); ++q) CHECK(g.entries(p, q).exact_value() == Scalar(p == q ? 1 : 0));

  const GramMatrix one = gram(section3_like(), {{0, 0}});
  REQUIRE(one.size() == 1);
  CHECK(one.entries(0, 0).exact_value() == norm2(one.functions[0]).exact_value());

  CHECK_THROWS_AS(gram(heil(), {{0, 0}, {0, 0}}), Error);

  // Hermitian by construction, including the inexact entries
  const GramMatrix t = gram(tapered(), square(1));
  for (std::size_t p = 0; p < t.size(); ++p)
    for (std::size_t q = 0; q < t.size(); ++q) {
      const IntegralValue& x = t.entries(p, q);
      const IntegralValue y = t.entries(q, p).conj();
      CHECK(x.rational_part == y.rational_part);
      CHECK(x.over_two_pi == y.over_two_pi);
    }
}

TEST_CASE("independence_test") {
  CHECK(independence_test(gram(heil(), square(1))).status == IndependenceStatus::Independent);

  const ModStepFn f = ind("0", "1") + ind("2", "3", 2);
  const IndependenceVerdict dep = independence_test(gram_from_functions({f, scale(f, -1)}));
  CHECK(dep.status == IndependenceStatus::Dependent);
  REQUIRE(dep.witness.has_value());
  CHECK((*dep.witness)[0] == (*dep.witness)[1]);
  CHECK(dep.witness_exact);
  REQUIRE(dep.residual_norm.has_value());
  CHECK(*dep.residual_norm == 0);

  const auto elements = heil_window();
  const GramMatrix g = gram(heil(), elements);
  for (std::size_t p = 0; p < g.size(); ++p)
    for (std::size_t q = p + 1; q < g.size(); ++q) {
      CHECK(independence_test(g.sub({p, q})).status == IndependenceStatus::Independent);
    }

  const IndependenceVerdict zero = independence_test(gram_from_functions({ModStepFn()}));
  CHECK(zero.status == IndependenceStatus::Dependent);
}

TEST_CASE("independence_test invariances") {
  ProbeSource src(21);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<ModStepFn> fs;
    for (int i = 0; i < 4; ++i) fs.push_back(modulate(src.step_function(-2, 2), src.grid_point(-2, 2, 3)));
    if (trial % 2 == 0) fs.push_back(fs[0] + scale(fs[1], Scalar(Q("1/2"))));
    const IndependenceStatus base = independence_test(gram_from_functions(fs)).status;
    CHECK(base != IndependenceStatus::Inconclusive);
    std::vector<ModStepFn> permuted(fs.rbegin(), fs.rend());
    CHECK(independence_test(gram_from_functions(permuted)).status == base);
    std::vector<ModStepFn> rotated = fs;
    rotated[1] = scale(rotated[1], Scalar::unit(Q("1/5")));
    CHECK(independence_test(gram_from_functions(rotated)).status == base);
    CHECK(base == (trial % 2 == 0 ? IndependenceStatus::Dependent : IndependenceStatus::Independent));
  }
}

TEST_CASE("translates_criterion") {
  const TranslatesVerdict v = translates_criterion({{0, 1}, {1, -1}});
  CHECK(v.status == IndependenceStatus::Independent);
  CHECK(v.witness_modulus > 0);
  CHECK_THROWS_AS(translates_criterion({{0, 0}}), Error);
  CHECK_THROWS_AS(translates_criterion({}), Error);
  CHECK(translates_criterion({{0, 1}, {2, 1}, {5, -3}}).status == IndependenceStatus::Independent);

  ProbeSource src(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::map<std::int64_t, Scalar> c;
    for (int i = 0; i < 4; ++i) c[src.integer(-5, 5)] = Scalar(src.grid_point(-3, 3, 7));
    c[0] = 1;
    const Scalar w = Scalar::from_parts(src.grid_point(-2, 2, 3), 1, 1, 0);
    std::map<std::int64_t, Scalar> scaled;
    for (const auto& [k, s] : c) scaled[k] = s * w;
    const Rational b = src.grid_point(Q("1/2"), 3, 2);
    CHECK(translates_criterion(c, b > 0 ? b : 1).status == translates_criterion(scaled, b > 0 ? b : 1).status);
  }
}

TEST_CASE("sweeps") {
  CHECK(subset_count(5, 2) == 15);
  CHECK(subset_count(35, 6) == 2007327);

  const SweepReport h = independence_sweep(heil(), {-2, 2, 0, 3}, quick(4));
  CHECK(h.pass());
  CHECK(h.subset_count == subset_count(20, 4));
  CHECK(h.min_relative_singular_value == doctest::Approx(1.0));

  const SweepReport t = independence_sweep(tapered(), {-2, 2, -2, 2}, quick(4));
  CHECK(t.pass());
  CHECK(t.min_relative_singular_value > 1e-8);

  const AffineConfig zero{2, 1, ModStepFn(), SupportMode::Full};
  const SweepReport z = independence_sweep(zero, {0, 1, 0, 1}, quick(2));
  CHECK_FALSE(z.pass());
  REQUIRE(z.first_failure.has_value());
  CHECK(z.first_failure->subset.size() == 1);
  CHECK(z.first_failure->verdict.status == IndependenceStatus::Dependent);

  CHECK_THROWS_AS(independence_sweep(heil(), {-2, 2, 0, 3}, quick(9)), Error);
  CHECK_THROWS_AS(independence_sweep(heil(), {-20, 20, 0, 20}, quick(6)), Error);

  SweepOptions ctx;
  ctx.max_subset_size = 2;
  const SweepReport c = independence_sweep(heil(), {-1, 1, 0, 1}, ctx);
  CHECK(c.parseval_verified == true);
  CHECK(c.v0_invariant == true);
}
