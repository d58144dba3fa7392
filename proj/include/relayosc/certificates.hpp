#pragma once

/**
 * @file certificates.hpp
 * @brief Executable variation-bounding certificates for circulant operators.
 *
 * vb2_conditions() decides whether H_v maps every vector with at most two
 * cyclic rises/falls to a vector with the same property (order-2 cyclic
 * variation bounding). check_preservation() and theorem1_invariance() are
 * randomized and direct checks of the same property for relay images and
 * for the loop gain of a plant.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "relayosc/config.hpp"
#include "relayosc/lti.hpp"
#include "relayosc/variation.hpp"

namespace relayosc {

struct Vb2Verdict {
  /// S_c^-(Delta_c Delta_c v) <= 2.
  bool condition1 = false;
  /// (Delta_c v_t)^2 >= Delta_c v_{t-1} Delta_c v_{t+1} for every t, indices mod n.
  bool condition2 = false;
  /// First index violating condition 2.
  std::optional<std::size_t> witness;
  /// n <= 3: every output has cyclic variation at most 2, nothing to check.
  bool unconditional = false;

  [[nodiscard]] bool passed() const { return unconditional || (condition1 && condition2); }
};

[[nodiscard]] inline Vb2Verdict vb2_conditions(std::span<const double> v, double slack = defaults::vb2_slack) {
  Vb2Verdict verdict;
  const std::size_t n = v.size();
  if (n == 0) throw std::invalid_argument("vb2_conditions: empty vector");
  if (n <= 3) {
    verdict.unconditional = verdict.condition1 = verdict.condition2 = true;
    return verdict;
  }
  const RealVector d = cyclic_diff(v);
  verdict.condition1 = s_cyclic_minus(cyclic_diff(d)) <= 2;
  verdict.condition2 = true;
  for (std::size_t t = 0; t < n; ++t) {
    const double lhs = d[t] * d[t];
    const double rhs = d[(t + n - 1) % n] * d[(t + 1) % n];
    if (lhs - rhs < -slack) {
      verdict.condition2 = false;
      verdict.witness = t;
      break;
    }
  }
  return verdict;
}

/// Random vector with S_c^-(Delta_c w) <= 2: a rising run, a plateau at the
/// peak and a falling run, optionally quantized to create ties, then
/// affinely rescaled and rotated.
[[nodiscard]] inline RealVector random_unimodal(std::size_t n, std::mt19937_64& rng) {
  if (n == 0) return {};
  std::uniform_int_distribution<std::size_t> width_dist(1, n);
  const std::size_t width = width_dist(rng);
  const std::size_t rest = n - width;
  const std::size_t rise = std::uniform_int_distribution<std::size_t>(0, rest)(rng);
  const std::size_t fall = rest - rise;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> up(rise), down(fall);
  for (double& x : up) x = unit(rng);
  for (double& x : down) x = unit(rng);
  std::ranges::sort(up);
  std::ranges::sort(down, std::greater<>{});

  RealVector w;
  w.reserve(n);
  w.insert(w.end(), up.begin(), up.end());
  w.insert(w.end(), width, 1.0);
  w.insert(w.end(), down.begin(), down.end());

  if (std::bernoulli_distribution(0.5)(rng)) {
    const double levels = static_cast<double>(std::uniform_int_distribution<int>(1, 3)(rng));
    for (double& x : w) x = std::floor(x * levels) / levels;
  }
  const double offset = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
  const double scale = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
  for (double& x : w) x = offset + scale * x;
  const auto shift = static_cast<long long>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  return cyclic_shift(w, shift);
}

struct PreservationResult {
  bool preserved = true;
  std::size_t trials_run = 0;
  std::optional<RealVector> counterexample;  // offending w
  std::optional<RealVector> image;           // H_{rel(v)} w for that w
};

/// Samples w with S_c^-(Delta_c w) <= 2 and checks S_c^-(Delta_c H_{rel(v)} w) <= 2.
[[nodiscard]] inline PreservationResult check_preservation(std::span<const double> v, double chi0, std::size_t trials,
                                                           std::uint64_t seed) {
  PreservationResult result;
  const std::size_t n = v.size();
  if (n <= 3) return result;
  const RealVector generator = relay_vec(v, chi0).to_real();
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < trials; ++k) {
    ++result.trials_run;
    const RealVector w = random_unimodal(n, rng);
    RealVector image = circulant_apply(generator, w);
    // Delta_c commutes with H, so differencing w first avoids cancellation in Delta_c of the image.
    if (s_cyclic_minus(circulant_apply(generator, cyclic_diff(w))) > 2) {
      result.preserved = false;
      result.counterexample = w;
      result.image = std::move(image);
      return result;
    }
  }
  return result;
}

struct Theorem1Verdict {
  bool preconditions_met = false;
  std::string detail;
  int diff_variation = -1;  // S_c^-(Delta_c o^P)
  int minus_variation = -1;  // S_c^-(o^P)
  int plus_variation = -1;  // S_c^+(o^P)
  bool sign_symmetric = false;
  RealVector output;  // o^P

  [[nodiscard]] bool holds() const {
    return preconditions_met && diff_variation <= 2 && minus_variation <= 2 &&
           (!sign_symmetric || plus_variation <= 2);
  }
};

/// Evaluates o^P = -H_{gbar^P} rel(u^P) with the delay folded into gbar and
/// reports the variation counts that the invariance result bounds by 2.
[[nodiscard]] inline Theorem1Verdict theorem1_invariance(const PlantSpec& plant, std::span<const double> u) {
  Theorem1Verdict verdict;
  const std::size_t period = u.size();
  if (period < 2) {
    verdict.detail = "period must exceed 1";
    return verdict;
  }
  const SignPattern pattern = relay_vec(u, plant.dead_zone());
  const Assumption1Verdict a1 = verify_assumption1(plant.g0());
  if (!a1.passed()) {
    verdict.detail = "plant violates assumption 1: " + a1.detail;
  } else if (s_cyclic_plus(pattern) != 2) {
    verdict.detail = "relay image does not have S_c^+ = 2";
  } else if (s_cyclic_minus(cyclic_diff(u)) != 2) {
    verdict.detail = "signal is not periodically unimodal";
  } else {
    verdict.preconditions_met = true;
  }

  const PeriodicSummation kernel = periodic_summation(plant.response(), period);
  verdict.output = circulant_apply(kernel.values, pattern.to_real());
  for (double& x : verdict.output) x = -x;
  RealVector diff = circulant_apply(kernel.values, cyclic_diff(pattern));
  for (double& x : diff) x = -x;
  verdict.diff_variation = s_cyclic_minus(diff);
  verdict.minus_variation = s_cyclic_minus(verdict.output);
  verdict.plus_variation = s_cyclic_plus(verdict.output);
  verdict.sign_symmetric = is_sign_symmetric(pattern);
  return verdict;
}

}  // namespace relayosc
