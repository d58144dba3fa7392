#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "relayosc/analyzer.hpp"
#include "relayosc/certificates.hpp"

using namespace relayosc;

TEST_CASE("vb2 conditions on reference vectors", "[certificates]") {
  const SignPattern a2a = SignPattern::parse("+++0---0");
  CHECK(vb2_conditions(a2a.to_real()).passed());

  for (double a : {0.1, 0.5, 0.9}) {
    for (std::size_t p = 4; p <= 12; ++p) {
      const auto gbar = periodic_summation(ImpulseResponse::geometric(a), p);
      REQUIRE(vb2_conditions(gbar.values).passed());
    }
  }

  const auto alt = vb2_conditions(RealVector{1, -1, 1, -1, 1, -1});
  CHECK_FALSE(alt.condition1);
  CHECK_FALSE(alt.passed());

  const auto small = vb2_conditions(RealVector{5, -3, 2});
  CHECK(small.unconditional);
  CHECK(small.passed());
}

TEST_CASE("vb2 witness points at a failing inequality", "[certificates]") {
  // Delta_c v = [2, 1, 2, -5]; at t = 1, 1 < 2 * 2.
  const Vb2Verdict verdict = vb2_conditions(RealVector{0, 2, 3, 5});
  CHECK_FALSE(verdict.condition2);
  REQUIRE(verdict.witness.has_value());
  CHECK(*verdict.witness == 1);
}

TEST_CASE("vb2 matches the exhaustive check on small integer generators", "[certificates]") {
  std::mt19937_64 rng(17);
  for (std::size_t n : {4u, 5u, 6u, 7u, 8u}) {
    const auto family = oracle::unimodal_family(n);
    for (int k = 0; k < 300; ++k) {
      RealVector v(n);
      for (double& x : v) x = static_cast<double>(static_cast<int>(rng() % 4) - 1);
      REQUIRE(vb2_conditions(v).passed() == oracle::variation_bounding(v, family));
    }
  }
}

TEST_CASE("wider generators need more input levels", "[certificates]") {
  // Failing condition 2, but no {0,1,2} input exposes it.
  const RealVector v = {2, 1, 0, -2};
  CHECK_FALSE(vb2_conditions(v).passed());
  CHECK(oracle::variation_bounding(v, oracle::unimodal_family(4)));
  CHECK_FALSE(oracle::variation_bounding(v, oracle::unimodal_family(4, 5)));

  std::mt19937_64 rng(23);
  for (std::size_t n : {4u, 5u}) {
    const auto family = oracle::unimodal_family(n, 5);
    for (int k = 0; k < 300; ++k) {
      RealVector w(n);
      for (double& x : w) x = static_cast<double>(static_cast<int>(rng() % 5) - 2);
      REQUIRE(vb2_conditions(w).passed() == oracle::variation_bounding(w, family));
    }
  }
}

TEST_CASE("2x2 minors of the canonical differences are nonnegative", "[certificates]") {
  for (std::size_t p = 4; p <= 14; ++p) {
    for (const SignPattern& s : enumerate_unimodal_patterns(p)) {
      const SignCounts c = sign_counts(s);
      if (c.positive == 0 || c.negative == 0) continue;
      const RealVector d = cyclic_diff(s);
      const Eigen::MatrixXd h = oracle::circulant(d);
      for (Eigen::Index i = 0; i < h.rows(); ++i) {
        for (Eigen::Index j = 0; j < h.cols(); ++j) {
          const Eigen::Index i1 = (i + 1) % h.rows();
          const Eigen::Index j1 = (j + 1) % h.cols();
          REQUIRE(h(i, j) * h(i1, j1) - h(i, j1) * h(i1, j) >= 0.0);
        }
      }
      REQUIRE(vb2_conditions(s.to_real()).passed());
    }
  }
}

TEST_CASE("preservation for relay images", "[certificates]") {
  const RealVector v = {0.3, 1.2, 0.9, -0.2, -1.5, -0.4, 0.1};
  REQUIRE(s_cyclic_plus(relay_vec(v, 0.25)) <= 2);
  const auto ok = check_preservation(v, 0.25, 2000, 1);
  CHECK(ok.preserved);
  CHECK(ok.trials_run == 2000);

  const auto bad = check_preservation(RealVector{1, -1, 1, -1, 1, -1}, 0.0, 5000, 1);
  CHECK_FALSE(bad.preserved);
  REQUIRE(bad.counterexample.has_value());
  CHECK(s_cyclic_minus(cyclic_diff(*bad.counterexample)) <= 2);
  CHECK(s_cyclic_minus(cyclic_diff(*bad.image)) > 2);

  CHECK(check_preservation(RealVector{1, -1, 1}, 0.0, 100, 1).preserved);
  CHECK(check_preservation(RealVector{1, -1}, 0.0, 100, 1).preserved);
}

TEST_CASE("random unimodal generator stays in class", "[certificates]") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 5000; ++k) {
    const std::size_t n = 1 + rng() % 20;
    const RealVector w = random_unimodal(n, rng);
    REQUIRE(w.size() == n);
    REQUIRE(s_cyclic_minus(cyclic_diff(w)) <= 2);
  }
}

TEST_CASE("invariance of the variation bound through the plant", "[certificates]") {
  const PlantSpec plant(ImpulseResponse::geometric(0.1), 0, 0.0);
  const RealVector u = {2, 3, 2, 0, -2, -3, -2, 0};
  const auto v = theorem1_invariance(plant, u);
  REQUIRE(v.preconditions_met);
  CHECK(v.holds());

  const RealVector sym = {1, 2, 2, 1, -1, -2, -2, -1};
  const auto vs = theorem1_invariance(plant, sym);
  REQUIRE(vs.sign_symmetric);
  CHECK(vs.plus_variation <= 2);
  CHECK(vs.holds());

  const auto flat = theorem1_invariance(plant, RealVector(6, 1.0));
  CHECK_FALSE(flat.preconditions_met);
  CHECK(flat.diff_variation == -1);
  for (double x : flat.output) CHECK(x < 0);
}
