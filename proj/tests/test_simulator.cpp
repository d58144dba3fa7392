#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "relayosc/analyzer.hpp"
#include "relayosc/simulator.hpp"

using namespace relayosc;

namespace {

SignPattern repeat(const char* period, std::size_t times) {
  const SignPattern p = SignPattern::parse(period);
  std::vector<int> out;
  for (std::size_t k = 0; k < times; ++k) out.insert(out.end(), p.begin(), p.end());
  return SignPattern(std::move(out));
}

}  // namespace

TEST_CASE("fast lag seeds settle on the three periods", "[simulator]") {
  const PlantSpec plant(ImpulseResponse::rational({1, 0}, {1, -0.1}), 9, 0.0);
  const std::vector<std::pair<SignPattern, std::size_t>> cases = {
      {repeat("+++++++++---------", 1), 18}, {repeat("+++---", 3), 6}, {repeat("+-", 9), 2}};
  for (const auto& [seed, period] : cases) {
    const Trajectory traj = simulate(plant, seed, 200);
    const auto st = detect_period(traj);
    REQUIRE(st.has_value());
    CHECK(st->period == period);
    const auto rec = verify_fixed_point(plant, st->pattern);
    REQUIRE(rec.has_value());
    for (std::size_t i = 0; i < period; ++i) CHECK(std::abs(rec->waveform[i] - st->waveform[i]) <= 1e-9);
    const Classification c = classify(st->waveform, 0.0);
    CHECK(c.is_self_oscillation);
    CHECK(c.satisfies_assumption2);
    CHECK(c.sign_symmetric);
  }
}

TEST_CASE("dead zone seeds", "[simulator]") {
  const PlantSpec plant(ImpulseResponse::geometric(0.1), 3, 0.8);
  const std::vector<std::pair<SignPattern, std::size_t>> cases = {
      {repeat("+++---", 2), 6}, {repeat("++0--0", 2), 6}, {repeat("+0+-0-", 2), 6}, {repeat("+-", 6), 2}};
  std::vector<std::size_t> periods;
  for (const auto& [seed, period] : cases) {
    const auto st = detect_period(simulate(plant, seed, 200));
    REQUIRE(st.has_value());
    periods.push_back(st->period);
    CHECK(verify_fixed_point(plant, st->pattern).has_value());
  }
  CHECK(periods == std::vector<std::size_t>{6, 6, 6, 2});

  const auto third = detect_period(simulate(plant, repeat("+0+-0-", 2), 200));
  const Classification c = classify(third->waveform, 0.8);
  CHECK(c.is_self_oscillation);
  CHECK_FALSE(c.satisfies_assumption2);
}

TEST_CASE("zero seed stays at rest", "[simulator]") {
  const PlantSpec plant(ImpulseResponse::samples({0, 1, 0.5}), 0, 0.3);
  const Trajectory traj = simulate(plant, SignPattern::zeros(4), 50);
  for (double u : traj.u) CHECK(u == 0.0);
  const auto st = detect_period(traj);
  REQUIRE(st.has_value());
  CHECK(st->period == 1);
  CHECK(st->phase == 0);
  CHECK_FALSE(classify(st->waveform, 0.3).is_self_oscillation);
}

TEST_CASE("recursion and convolution agree", "[simulator]") {
  std::mt19937_64 rng(77);
  const std::vector<ImpulseResponse> kernels = {ImpulseResponse::geometric(0.9),
                                                ImpulseResponse::rational({1, 0}, {1, -0.5}),
                                                ImpulseResponse::rational({1.5, -0.7, 0}, {1, -0.8, 0.12})};
  for (const auto& g : kernels) {
    for (int k = 0; k < 20; ++k) {
      const int pd = 1 + static_cast<int>(rng() % 6);
      std::vector<int> seed(static_cast<std::size_t>(pd + static_cast<int>(rng() % 10)));
      for (int& x : seed) x = static_cast<int>(rng() % 3) - 1;
      const PlantSpec plant(g, pd, 0.2 * static_cast<double>(rng() % 4));
      const Trajectory a = simulate(plant, SignPattern(seed), 150, {SimulationMethod::recursion});
      const Trajectory b = simulate(plant, SignPattern(seed), 150, {SimulationMethod::convolution});
      for (std::size_t t = 0; t < 150; ++t) REQUIRE(std::abs(a.u[t] - b.u[t]) <= 1e-10);
      REQUIRE(a.r == b.r);
    }
  }
}

TEST_CASE("seeding with a verified pattern reproduces its waveform", "[simulator]") {
  for (double a : {0.1, 0.5, 0.9}) {
    for (int pd = 1; pd <= 5; ++pd) {
      const PlantSpec plant(ImpulseResponse::geometric(a), pd, 0.0);
      for (const auto& rec : find_oscillations(plant).records) {
        const SignPattern seed = periodic_seed(rec.pattern, plant);
        const Trajectory traj = simulate(plant, seed, 4 * rec.period + static_cast<std::size_t>(pd));
        for (std::size_t t = static_cast<std::size_t>(pd); t < traj.horizon(); ++t) {
          REQUIRE(std::abs(traj.u[t] - rec.waveform[t % rec.period]) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("determinism and odd symmetry", "[simulator]") {
  const PlantSpec plant(ImpulseResponse::geometric(0.7), 4, 0.4);
  const SignPattern seed = SignPattern::parse("+0-++-0+-");
  const Trajectory a = simulate(plant, seed, 120);
  const Trajectory b = simulate(plant, seed, 120);
  CHECK(a.r == b.r);
  CHECK(a.u == b.u);
  const Trajectory n = simulate(plant, seed.negated(), 120);
  for (std::size_t t = 0; t < 120; ++t) {
    CHECK(n.u[t] == -a.u[t]);
    CHECK(n.r[t] == -a.r[t]);
  }
}

TEST_CASE("period detection ignores the transient", "[simulator]") {
  Trajectory traj;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise;
  for (int t = 0; t < 37; ++t) {
    traj.u.push_back(noise(rng));
    traj.r.push_back(relay(traj.u.back(), 0.0));
  }
  const RealVector cycle = {0.5, 1.5, 0.5, -0.5, -1.5, -0.5, 0.2};
  for (int t = 0; t < 120; ++t) {
    traj.u.push_back(cycle[t % 7]);
    traj.r.push_back(relay(traj.u.back(), 0.0));
  }
  const auto st = detect_period(traj);
  REQUIRE(st.has_value());
  CHECK(st->period == 7);
  CHECK(st->pattern == canonical_rotation(relay_vec(cycle, 0.0)).pattern);
  CHECK(relay_vec(st->waveform, 0.0) == st->pattern);
}

TEST_CASE("invalid simulations", "[simulator]") {
  CHECK_THROWS_AS(simulate(PlantSpec(ImpulseResponse::geometric(0.5), 0, 0.0), SignPattern{1}, 10), std::invalid_argument);
  CHECK_THROWS_AS(simulate(PlantSpec(ImpulseResponse::geometric(0.5), 3, 0.0), SignPattern{1}, 10), std::invalid_argument);
  CHECK_THROWS_AS(simulate(PlantSpec(ImpulseResponse::geometric(0.5), 1, 0.0), SignPattern{1}, 10, {SimulationMethod::automatic, 0.5}),
                  SimulationDiverged);
}
