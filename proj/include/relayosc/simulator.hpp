#pragma once

/**
 * @file simulator.hpp
 * @brief Closed-loop simulation u(t) = -(g * rel(u))(t) from a relay-output seed.
 *
 * The seed lists the relay outputs r(-L), ..., r(-1); everything before
 * -L is zero. Generated kernels (rational, geometric) run their difference
 * equation, sampled kernels run a truncated convolution.
 */

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relayosc/analyzer.hpp"
#include "relayosc/config.hpp"
#include "relayosc/lti.hpp"
#include "relayosc/variation.hpp"

namespace relayosc {

enum class SimulationMethod { automatic, recursion, convolution };

struct SimulationOptions {
  SimulationMethod method = SimulationMethod::automatic;
  /// 0 selects divergence_factor * ||g||_1.
  double divergence_cap = 0.0;
};

struct Trajectory {
  RealVector u;
  std::vector<int> r;

  [[nodiscard]] std::size_t horizon() const noexcept { return u.size(); }
};

class SimulationDiverged : public std::runtime_error {
 public:
  SimulationDiverged(std::size_t step, double value, double cap)
      : std::runtime_error("simulation diverged at t=" + std::to_string(step) + ": |u|=" + std::to_string(std::abs(value)) +
                           " exceeds " + std::to_string(cap)),
        step_(step),
        value_(value) {}

  [[nodiscard]] std::size_t step() const noexcept { return step_; }
  [[nodiscard]] double value() const noexcept { return value_; }

 private:
  std::size_t step_;
  double value_;
};

[[nodiscard]] inline Trajectory simulate(const PlantSpec& plant, const SignPattern& seed, std::size_t steps,
                                         const SimulationOptions& opt = {}) {
  const int pd = plant.delay();
  if (pd < 1) throw std::invalid_argument("simulate: the loop needs at least one sample of delay");
  if (steps == 0) throw std::invalid_argument("simulate: horizon must be positive");
  if (seed.size() < static_cast<std::size_t>(pd)) {
    throw std::invalid_argument("simulate: seed must cover at least Pd samples");
  }
  const double chi0 = plant.dead_zone();
  const double cap = opt.divergence_cap > 0.0 ? opt.divergence_cap
                                              : defaults::divergence_factor * plant.g0().l1_norm_bound();
  const auto seed_len = static_cast<long long>(seed.size());
  const auto total = static_cast<std::size_t>(seed_len) + steps;

  // r and y indexed from t = -L.
  std::vector<int> r(total, 0);
  for (std::size_t i = 0; i < seed.size(); ++i) r[i] = seed[i];

  Trajectory traj;
  traj.u.resize(steps);
  traj.r.resize(steps);

  SimulationMethod method = opt.method;
  const auto rec = plant.g0().recursion();
  if (method == SimulationMethod::automatic) method = rec ? SimulationMethod::recursion : SimulationMethod::convolution;
  if (method == SimulationMethod::recursion && !rec) {
    throw std::invalid_argument("simulate: sampled kernels have no recursion");
  }

  const auto store = [&](std::size_t idx, double y) {
    const double u = -y;
    if (!std::isfinite(u) || std::abs(u) > cap) throw SimulationDiverged(idx - seed.size(), u, cap);
    traj.u[idx - seed.size()] = u;
    r[idx] = relay(u, chi0);
    traj.r[idx - seed.size()] = r[idx];
  };

  if (method == SimulationMethod::recursion) {
    const auto& [b, a] = *rec;
    // y = g * r with x(t) = r(t - Pd), zero state before t = -L.
    std::vector<double> y(total, 0.0);
    const auto x = [&](long long idx) { return idx - pd >= 0 ? static_cast<double>(r[static_cast<std::size_t>(idx - pd)]) : 0.0; };
    for (std::size_t idx = 0; idx < total; ++idx) {
      double acc = 0.0;
      for (std::size_t i = 0; i < b.size() && i <= idx; ++i) acc += b[i] * x(static_cast<long long>(idx - i));
      for (std::size_t i = 1; i < a.size() && i <= idx; ++i) acc -= a[i] * y[idx - i];
      y[idx] = acc;
      if (idx >= seed.size()) store(idx, acc);
    }
    return traj;
  }

  const ImpulseResponse g = plant.response();
  const std::size_t reach = static_cast<std::size_t>(pd) + plant.g0().horizon_for(defaults::convolution_tail) + 1;
  const RealVector taps = g.head(reach);
  for (std::size_t idx = seed.size(); idx < total; ++idx) {
    double acc = 0.0;
    const std::size_t kmax = std::min(reach - 1, idx);
    for (std::size_t k = static_cast<std::size_t>(pd); k <= kmax; ++k) acc += taps[k] * r[idx - k];
    store(idx, acc);
  }
  return traj;
}

/// Seed made of whole periods of `pattern`, long enough that the history
/// before it contributes less than `tol` to every later sample.
[[nodiscard]] inline SignPattern periodic_seed(const SignPattern& pattern, const PlantSpec& plant,
                                               double tol = defaults::summation_tol) {
  if (pattern.empty()) throw std::invalid_argument("periodic_seed: empty pattern");
  const std::size_t p = pattern.size();
  std::size_t len = static_cast<std::size_t>(plant.delay()) + plant.g0().horizon_for(tol) + 1;
  len = ((len + p - 1) / p) * p;
  std::vector<int> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = pattern[i % p];
  return SignPattern(std::move(out));
}

struct SteadyState {
  std::size_t period = 0;
  /// Time index modulo P at which the canonical rotation starts.
  std::size_t phase = 0;
  SignPattern pattern;
  /// One period of u aligned with `pattern`.
  RealVector waveform;
};

/// Smallest P for which r repeats exactly and u within `tol` over the
/// trailing window (default: second half of the trajectory).
[[nodiscard]] inline std::optional<SteadyState> detect_period(const Trajectory& traj,
                                                              double tol = defaults::period_tol,
                                                              std::size_t window = 0) {
  const std::size_t n = traj.horizon();
  if (window == 0) window = n / 2;
  window = std::min(window, n);
  const std::size_t start = n - window;
  for (std::size_t p = 1; 4 * p <= window; ++p) {
    bool ok = true;
    for (std::size_t t = start + p; t < n && ok; ++t) {
      ok = traj.r[t] == traj.r[t - p] && std::abs(traj.u[t] - traj.u[t - p]) <= tol;
    }
    if (!ok) continue;
    const SignPattern slice(std::vector<int>(traj.r.begin() + static_cast<long long>(start),
                                             traj.r.begin() + static_cast<long long>(start + p)));
    const CanonicalForm canon = canonical_rotation(slice);
    // canon[j] = r[start + (j + shift) mod p]
    SteadyState st;
    st.period = p;
    st.pattern = canon.pattern;
    const std::size_t first = start + canon.shift;
    st.phase = first % p;
    st.waveform.assign(traj.u.begin() + static_cast<long long>(first), traj.u.begin() + static_cast<long long>(first + p));
    return st;
  }
  return std::nullopt;
}

struct Classification {
  bool is_self_oscillation = false;
  bool satisfies_assumption2 = false;
  bool periodically_unimodal = false;
  bool sign_symmetric = false;
  SignPattern pattern;
};

[[nodiscard]] inline Classification classify(std::span<const double> u, double chi0, double zero_tol = defaults::period_tol) {
  Classification c;
  if (u.empty()) return c;
  c.pattern = relay_vec(u, chi0);
  const int diff_variation = s_cyclic_minus(cyclic_diff(u), zero_tol);
  c.is_self_oscillation = diff_variation >= 2;
  c.periodically_unimodal = diff_variation == 2;
  c.sign_symmetric = is_sign_symmetric(c.pattern);
  c.satisfies_assumption2 = c.periodically_unimodal && s_cyclic_plus(c.pattern) == 2;
  return c;
}

}  // namespace relayosc
