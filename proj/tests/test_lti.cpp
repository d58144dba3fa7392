#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "relayosc/lti.hpp"

using namespace relayosc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("rational impulse responses", "[lti]") {
  const auto g1 = ImpulseResponse::rational({1, 0}, {1, -0.1});
  const auto g2 = ImpulseResponse::rational({1, 0}, {1, -0.9});
  for (int t = 0; t < 60; ++t) {
    REQUIRE_THAT(g1(t), WithinRel(std::pow(0.1, t), 1e-12));
    REQUIRE_THAT(g2(t), WithinRel(std::pow(0.9, t), 1e-12));
  }
  // Beyond the cached range the recursion keeps going.
  CHECK_THAT(g2(400), WithinRel(std::pow(0.9, 400), 1e-9));
  CHECK_THAT(g2.l1_norm_bound(), WithinRel(10.0, 1e-9));

  const auto pulse = ImpulseResponse::rational({1}, {1});
  CHECK(pulse(0) == 1.0);
  CHECK(pulse(1) == 0.0);
  CHECK(pulse.finite_support());

  // 1/(z - 0.5) has relative degree 1.
  const auto lagged = ImpulseResponse::rational({1}, {1, -0.5});
  CHECK(relative_degree(lagged) == 1);
  CHECK(lagged(0) == 0.0);
  CHECK_THAT(lagged(3), WithinRel(0.25, 1e-12));
}

TEST_CASE("unstable or improper rational plants are rejected", "[lti]") {
  CHECK_THROWS_AS(ImpulseResponse::rational({1, 0}, {1, -1.0}), UnstablePlantError);
  CHECK_THROWS_AS(ImpulseResponse::rational({1, 0}, {1, -1.2}), UnstablePlantError);
  CHECK_THROWS_AS(ImpulseResponse::rational({1, 0, 0}, {1, -0.5}), std::invalid_argument);
  try {
    (void)ImpulseResponse::rational({1, 0, 0}, {1, 0.0, 1.0});
    FAIL("expected rejection");
  } catch (const UnstablePlantError& e) {
    CHECK(e.poles().size() == 2);
  }
}

TEST_CASE("delay factorization", "[lti]") {
  const auto g = ImpulseResponse::geometric(0.1);
  CHECK(factor_delay(g).first == 0);
  CHECK(factor_delay(g.delayed(9)).first == 9);
  const auto shifted_pulse = ImpulseResponse::samples({0, 0, 0, 1});
  const auto [pd, g0] = factor_delay(shifted_pulse);
  CHECK(pd == 3);
  CHECK(g0(0) == 1.0);
  CHECK(g0(1) == 0.0);
  CHECK_THROWS_AS(relative_degree(ImpulseResponse::samples({0, 0})), std::invalid_argument);

  const PlantSpec plant(ImpulseResponse::rational({1}, {1, -0.9}), 2, 0.0);
  CHECK(plant.delay() == 3);
}

TEST_CASE("assumption 1 verdicts", "[lti]") {
  CHECK(verify_assumption1(ImpulseResponse::geometric(0.1)).passed());
  CHECK(verify_assumption1(ImpulseResponse::rational({1, 0}, {1, -0.9})).passed());
  const auto gap = verify_assumption1(ImpulseResponse::samples({1, 0, 0.5}));
  CHECK_FALSE(gap.passed());
  CHECK_FALSE(gap.support_connected);
  const auto flat = verify_assumption1(ImpulseResponse::samples({1, 1, 0.5}));
  CHECK_FALSE(flat.passed());
  CHECK_FALSE(flat.strictly_decreasing);
  CHECK(verify_assumption1(ImpulseResponse::samples({1, 0.5, 0.25})).passed());
  // Two real poles, dominant one positive.
  CHECK(verify_assumption1(ImpulseResponse::rational({1, 0, 0}, {1, -0.9, 0.2})).passed());
  // Oscillating dominant pole.
  const auto osc = verify_assumption1(ImpulseResponse::rational({1, 0}, {1, 0.5}));
  CHECK_FALSE(osc.passed());
}

TEST_CASE("convexity on the support", "[lti]") {
  CHECK(is_convex_on_support(ImpulseResponse::geometric(0.9)));
  CHECK(is_convex_on_support(ImpulseResponse::unit_pulse()));
  CHECK_FALSE(is_convex_on_support(ImpulseResponse::samples({1, 0.9, 0.7, 0.4})));
  CHECK(is_convex_on_support(ImpulseResponse::samples({1, 0.5, 0.25, 0.125})));
}

TEST_CASE("periodic summation", "[lti]") {
  const auto s6 = periodic_summation(ImpulseResponse::geometric(0.1), 6);
  for (int i = 0; i < 6; ++i) REQUIRE_THAT(s6.values[i], WithinRel(std::pow(0.1, i) / (1 - 1e-6), 1e-14));
  const auto direct = oracle::periodic_geometric(0.1, 0, 6);
  for (int i = 0; i < 6; ++i) REQUIRE_THAT(s6.values[i], WithinAbs(direct[i], 1e-12));

  const auto s2 = periodic_summation(ImpulseResponse::geometric(0.9), 2);
  CHECK_THAT(s2.values[0], WithinRel(1 / 0.19, 1e-14));
  CHECK_THAT(s2.values[1], WithinRel(0.9 / 0.19, 1e-14));

  const auto pulse = periodic_summation(ImpulseResponse::unit_pulse(), 5);
  CHECK(pulse.values == RealVector{1, 0, 0, 0, 0});

  // Rational path (numerical summation) against the closed form, with delay.
  const auto rat = ImpulseResponse::rational({1, 0}, {1, -0.9}).delayed(4);
  const auto geo = ImpulseResponse::geometric(0.9).delayed(4);
  for (std::size_t p : {1u, 3u, 7u, 16u}) {
    const auto a = periodic_summation(rat, p);
    const auto b = periodic_summation(geo, p);
    REQUIRE(a.residual < 1e-12);
    for (std::size_t i = 0; i < p; ++i) REQUIRE_THAT(a.values[i], WithinAbs(b.values[i], 1e-11));
    const auto c = oracle::periodic_geometric(0.9, 4, p);
    for (std::size_t i = 0; i < p; ++i) REQUIRE_THAT(b.values[i], WithinAbs(c[i], 1e-11));
  }

  // Strictly positive and decreasing under assumption 1.
  const auto s9 = periodic_summation(ImpulseResponse::geometric(0.7), 9);
  for (int i = 0; i + 1 < 9; ++i) REQUIRE(s9.values[i] > s9.values[i + 1]);
  CHECK(s9.values[8] > 0);
  CHECK_THROWS_AS(periodic_summation(ImpulseResponse::geometric(0.7), 0), std::invalid_argument);
}

TEST_CASE("circulant and shift algebra", "[lti]") {
  CHECK(circulant_apply(RealVector{1, 0, 0}, RealVector{4, 5, 6}) == RealVector{4, 5, 6});
  CHECK(cyclic_shift(RealVector{1, 2, 3}, 1) == RealVector{3, 1, 2});
  CHECK(cyclic_shift(RealVector{1, 2, 3}, -1) == RealVector{2, 3, 1});
  CHECK_THROWS_AS(circulant_apply(RealVector{1, 2}, RealVector{1}), std::invalid_argument);

  const auto gbar = periodic_summation(ImpulseResponse::geometric(0.1), 6);
  const RealVector y = circulant_apply(gbar.values, RealVector{1, 1, 1, -1, -1, -1});
  CHECK_THAT(y[0], WithinAbs(0.88911, 1e-5));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> d;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 1 + rng() % 12;
    RealVector v(n), w(n);
    for (double& x : v) x = d(rng);
    for (double& x : w) x = d(rng);
    const RealVector a = circulant_apply(v, w);
    const RealVector b = circulant_apply(w, v);
    const RealVector c = oracle::product(oracle::circulant(v), w);
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE_THAT(a[i], WithinAbs(b[i], 1e-12 * (1 + std::abs(a[i]))));
      REQUIRE_THAT(a[i], WithinAbs(c[i], 1e-12 * (1 + std::abs(a[i]))));
    }
    const auto kk = static_cast<long long>(rng() % 20);
    REQUIRE(cyclic_shift(v, kk + static_cast<long long>(n)) == cyclic_shift(v, kk));
    REQUIRE(cyclic_shift(v, static_cast<long long>(n)) == v);
  }
}

TEST_CASE("loop gain", "[lti]") {
  const PlantSpec free_plant(ImpulseResponse::geometric(0.1), 0, 0.0);
  const RealVector u = loop_gain(free_plant, SignPattern{1, -1});
  const double diff = (1.0 - 0.1) / 0.99;
  CHECK_THAT(u[0], WithinAbs(-diff, 1e-14));
  CHECK_THAT(u[1], WithinAbs(diff, 1e-14));
  CHECK(loop_gain(free_plant, SignPattern::zeros(5)) == RealVector(5, 0.0));

  const PlantSpec ex1(ImpulseResponse::geometric(0.1), 9, 0.0);
  const SignPattern half = SignPattern::parse("+++++++++---------");
  CHECK(relay_vec(loop_gain(ex1, half), 0.0) == half);

  // Delay in the shift equals delay folded into the kernel.
  std::mt19937_64 rng(9);
  for (int k = 0; k < 100; ++k) {
    const std::size_t p = 2 + rng() % 10;
    const int pd = static_cast<int>(rng() % 7);
    std::vector<int> s(p);
    for (int& x : s) x = static_cast<int>(rng() % 3) - 1;
    const PlantSpec plant(ImpulseResponse::geometric(0.6), pd, 0.0);
    const RealVector a = loop_gain(plant, SignPattern(s));
    RealVector b = circulant_apply(periodic_summation(plant.response(), p).values, SignPattern(s).to_real());
    const RealVector c = oracle::loop(0.6, pd, SignPattern(s).to_real());
    for (std::size_t i = 0; i < p; ++i) {
      REQUIRE_THAT(a[i], WithinAbs(-b[i], 1e-12));
      REQUIRE_THAT(a[i], WithinAbs(c[i], 1e-10));
    }
  }
}
