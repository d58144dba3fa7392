#pragma once

/**
 * @file lti.hpp
 * @brief Causal SISO impulse responses, periodic summation and circulant algebra.
 *
 * An ImpulseResponse is one of three generators:
 *  - geometric: g(t) = gain * pole^t, pole in (0, 1);
 *  - rational:  G(z) = N(z) / D(z) with coefficients in descending powers of z;
 *  - samples:   a finite list, zero afterwards.
 * Leading zero samples are factored out as a pure delay, so every generator
 * stores a delay-free kernel g0 with g0(0) != 0 plus an integer delay.
 *
 * Each response carries tail_bound(t) >= sum_{k >= t} |g(k)|. It is exact
 * for the geometric and samples kinds. For rational kinds it is a
 * dominant-pole envelope C * r^t / (1 - r) with r slightly above the largest
 * pole modulus and C fitted over the cached samples, which extend well past
 * the peak of the polynomial factors of repeated poles.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "relayosc/config.hpp"
#include "relayosc/variation.hpp"

namespace relayosc {

enum class KernelKind { geometric, rational, samples };

[[nodiscard]] inline const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::geometric: return "geometric";
    case KernelKind::rational: return "rational";
    case KernelKind::samples: return "samples";
  }
  return "unknown";
}

class UnstablePlantError : public std::invalid_argument {
 public:
  UnstablePlantError(const std::string& what, std::vector<std::complex<double>> poles)
      : std::invalid_argument(what), poles_(std::move(poles)) {}
  [[nodiscard]] const std::vector<std::complex<double>>& poles() const noexcept { return poles_; }

 private:
  std::vector<std::complex<double>> poles_;
};

class SummationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Roots of a polynomial given in descending powers (leading coefficient nonzero).
[[nodiscard]] inline std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs) {
  const std::size_t degree = coeffs.size() - 1;
  if (degree == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (std::size_t j = 0; j < degree; ++j) companion(0, j) = -coeffs[j + 1] / coeffs[0];
  for (std::size_t i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> roots(degree);
  for (std::size_t i = 0; i < degree; ++i) roots[i] = solver.eigenvalues()[static_cast<Eigen::Index>(i)];
  return roots;
}

/// Immutable causal impulse response; copies share their sample cache.
class ImpulseResponse {
 public:
  /// g(t) = gain * pole^t for t >= 0.
  static ImpulseResponse geometric(double pole, double gain = 1.0) {
    if (!(pole > 0.0 && pole < 1.0)) throw std::invalid_argument("geometric kernel: pole must lie in (0, 1)");
    if (!(gain > 0.0) || !std::isfinite(gain)) throw std::invalid_argument("geometric kernel: gain must be positive");
    auto data = std::make_shared<Data>();
    data->kind = KernelKind::geometric;
    data->pole = pole;
    data->gain = gain;
    data->num = {gain};
    data->den = {1.0, -pole};
    data->poles = {pole};
    data->finite = false;
    return ImpulseResponse(std::move(data), 0);
  }

  /// G(z) = (b_m z^m + ... + b_0) / (a_n z^n + ... + a_0), coefficients listed from the highest power.
  static ImpulseResponse rational(std::vector<double> num, std::vector<double> den) {
    const auto strip = [](std::vector<double>& c) {
      const auto first = std::ranges::find_if(c, [](double x) { return x != 0.0; });
      c.erase(c.begin(), first);
    };
    for (double c : num) if (!std::isfinite(c)) throw std::invalid_argument("rational kernel: non-finite numerator");
    for (double c : den) if (!std::isfinite(c)) throw std::invalid_argument("rational kernel: non-finite denominator");
    strip(num);
    strip(den);
    if (den.empty()) throw std::invalid_argument("rational kernel: zero denominator");
    if (num.empty()) throw std::invalid_argument("rational kernel: zero numerator gives an identically zero response");
    const std::size_t n = den.size() - 1;
    const std::size_t m = num.size() - 1;
    if (m > n) throw std::invalid_argument("rational kernel: improper transfer function (not causal)");

    auto data = std::make_shared<Data>();
    data->kind = KernelKind::rational;
    const double lead = den.front();
    for (double& c : num) c /= lead;
    for (double& c : den) c /= lead;
    data->poles = polynomial_roots(den);
    double rho = 0.0;
    for (auto p : data->poles) rho = std::max(rho, std::abs(p));
    if (rho > 1.0 - defaults::stability_margin) {
      std::ostringstream msg;
      msg << "rational kernel: pole modulus " << rho << " is not strictly inside the unit circle; poles:";
      for (auto p : data->poles) msg << " (" << p.real() << (p.imag() < 0 ? "" : "+") << p.imag() << "i)";
      throw UnstablePlantError(msg.str(), data->poles);
    }
    data->num = std::move(num);
    data->den = std::move(den);
    data->build_rational_cache(rho);
    return ImpulseResponse(std::move(data), static_cast<int>(n - m));
  }

  /// Finite impulse response: g(t) = values[t], zero beyond the list.
  static ImpulseResponse samples(std::vector<double> values) {
    for (double v : values) if (!std::isfinite(v)) throw std::invalid_argument("samples kernel: non-finite sample");
    const auto first = std::ranges::find_if(values, [](double x) { return x != 0.0; });
    const int delay = static_cast<int>(first - values.begin());
    values.erase(values.begin(), first);
    while (!values.empty() && values.back() == 0.0) values.pop_back();
    auto data = std::make_shared<Data>();
    data->kind = KernelKind::samples;
    data->finite = true;
    const int effective_delay = values.empty() ? 0 : delay;
    data->cache = std::move(values);
    data->finish_cache();
    return ImpulseResponse(std::move(data), effective_delay);
  }

  static ImpulseResponse unit_pulse() { return samples({1.0}); }

  [[nodiscard]] KernelKind kind() const noexcept { return data_->kind; }
  /// Number of leading zero samples (the relative degree).
  [[nodiscard]] int delay() const noexcept { return delay_; }
  [[nodiscard]] bool is_zero() const noexcept { return data_->finite && data_->cache.empty(); }
  /// True when the support is finite.
  [[nodiscard]] bool finite_support() const noexcept { return data_->finite; }
  /// One past the last nonzero sample; only meaningful for finite support.
  [[nodiscard]] long long support_end() const noexcept {
    return delay_ + static_cast<long long>(data_->cache.size());
  }

  [[nodiscard]] double operator()(long long t) const {
    if (t < delay_) return 0.0;
    return data_->kernel(static_cast<std::size_t>(t - delay_));
  }

  /// Upper bound on sum_{k >= t} |g(k)|.
  [[nodiscard]] double tail_bound(long long t) const {
    return data_->kernel_tail(t <= delay_ ? 0 : static_cast<std::size_t>(t - delay_));
  }

  [[nodiscard]] double l1_norm_bound() const { return tail_bound(0); }

  [[nodiscard]] std::vector<double> head(std::size_t count) const {
    std::vector<double> out(count);
    for (std::size_t t = 0; t < count; ++t) out[t] = (*this)(static_cast<long long>(t));
    return out;
  }

  /// Same kernel preceded by `extra` additional zero samples.
  [[nodiscard]] ImpulseResponse delayed(int extra) const {
    if (extra < 0) throw std::invalid_argument("delayed: negative delay");
    return ImpulseResponse(data_, delay_ + extra);
  }

  /// The delay-free kernel g0(t) = g(t + delay()).
  [[nodiscard]] ImpulseResponse advanced() const { return ImpulseResponse(data_, 0); }

  [[nodiscard]] double pole() const noexcept { return data_->pole; }
  [[nodiscard]] double gain() const noexcept { return data_->gain; }
  [[nodiscard]] const std::vector<std::complex<double>>& poles() const noexcept { return data_->poles; }

  /// Delay-free difference-equation coefficients (numerator, monic denominator) in
  /// powers of z^{-1}; empty for the samples kind.
  [[nodiscard]] std::optional<std::pair<std::vector<double>, std::vector<double>>> recursion() const {
    if (data_->kind == KernelKind::samples) return std::nullopt;
    return std::make_pair(data_->num, data_->den);
  }

  /// True when the generator guarantees that g is eventually positive,
  /// strictly decreasing and convex: a geometric kernel, or a rational kernel
  /// whose unique dominant pole is real and positive.
  [[nodiscard]] bool tail_guaranteed_monotone() const {
    if (data_->kind == KernelKind::geometric) return true;
    if (data_->kind == KernelKind::samples || data_->finite) return false;
    const auto& poles = data_->poles;
    const auto dom = std::ranges::max_element(poles, {}, [](auto p) { return std::abs(p); });
    const double rho = std::abs(*dom);
    if (std::abs(dom->imag()) > 1e-12 || dom->real() <= 0.0) return false;
    for (auto it = poles.begin(); it != poles.end(); ++it) {
      if (it != dom && std::abs(*it) > rho - 1e-9) return false;
    }
    return data_->kernel(data_->cache.size() - 1) > 0.0;
  }

  /// Index (relative to g0) past which the tail is below `level`.
  [[nodiscard]] std::size_t horizon_for(double level) const {
    std::size_t t = 0;
    while (data_->kernel_tail(t) >= level) {
      if (data_->finite && t >= data_->cache.size()) break;
      if (++t > defaults::max_summation_terms) {
        throw SummationError("impulse-response tail does not fall below the requested level");
      }
    }
    return t;
  }

 private:
  struct Data {
    KernelKind kind = KernelKind::samples;
    double pole = 0.0;
    double gain = 0.0;
    std::vector<double> num;  // z^{-1} powers, delay-free
    std::vector<double> den;  // z^{-1} powers, den[0] == 1
    std::vector<std::complex<double>> poles;
    bool finite = false;
    std::vector<double> cache;       // g0(0 .. cache.size()-1)
    std::vector<double> suffix_abs;  // suffix sums of |cache|, one extra trailing zero
    double env_rate = 0.0;
    double env_scale = 0.0;

    void finish_cache() {
      suffix_abs.assign(cache.size() + 1, 0.0);
      for (std::size_t t = cache.size(); t-- > 0;) suffix_abs[t] = suffix_abs[t + 1] + std::abs(cache[t]);
    }

    double envelope_tail(std::size_t t) const {
      if (finite) return 0.0;
      return env_scale * std::pow(env_rate, static_cast<double>(t)) / (1.0 - env_rate);
    }

    double recursion_step(std::size_t t, const std::vector<double>& history) const {
      double value = t < num.size() ? num[t] : 0.0;
      for (std::size_t i = 1; i < den.size() && i <= t; ++i) value -= den[i] * history[t - i];
      return value;
    }

    void build_rational_cache(double rho) {
      if (rho == 0.0) {
        // All poles at the origin: finite impulse response.
        finite = true;
        const std::size_t length = num.size() + den.size();
        for (std::size_t t = 0; t < length; ++t) cache.push_back(recursion_step(t, cache));
        while (!cache.empty() && cache.back() == 0.0) cache.pop_back();
        finish_cache();
        return;
      }
      env_rate = rho + 0.1 * (1.0 - rho);
      const double degree = static_cast<double>(den.size());
      const auto fit_horizon = static_cast<std::size_t>(std::ceil(2.0 * degree / std::log(env_rate / rho))) + 32;
      double scale = 0.0;
      double weight = 1.0;  // env_rate^{-t}
      for (std::size_t t = 0;; ++t) {
        cache.push_back(recursion_step(t, cache));
        scale = std::max(scale, std::abs(cache.back()) * weight);
        weight /= env_rate;
        const double tail = scale * std::pow(env_rate, static_cast<double>(t + 1)) / (1.0 - env_rate);
        if (t + 1 >= fit_horizon && tail < defaults::cache_tail * std::max(1.0, scale)) break;
        if (t > defaults::max_summation_terms) throw SummationError("rational kernel: cache horizon exceeded");
      }
      env_scale = scale;
      finish_cache();
    }

    double kernel(std::size_t t) const {
      if (kind == KernelKind::geometric) return gain * std::pow(pole, static_cast<double>(t));
      if (t < cache.size()) return cache[t];
      if (finite) return 0.0;
      // Beyond the cache: continue the recursion from the cached history.
      std::vector<double> history(cache);
      for (std::size_t k = cache.size(); k <= t; ++k) history.push_back(recursion_step(k, history));
      return history[t];
    }

    double kernel_tail(std::size_t t) const {
      if (kind == KernelKind::geometric) return gain * std::pow(pole, static_cast<double>(t)) / (1.0 - pole);
      if (t < cache.size()) return suffix_abs[t] + envelope_tail(cache.size());
      return envelope_tail(t);
    }
  };

  ImpulseResponse(std::shared_ptr<const Data> data, int delay) : data_(std::move(data)), delay_(delay) {}

  std::shared_ptr<const Data> data_;
  int delay_ = 0;
};

/// Relative degree: the index of the first nonzero sample.
[[nodiscard]] inline int relative_degree(const ImpulseResponse& g) {
  if (g.is_zero()) throw std::invalid_argument("relative_degree: impulse response is identically zero");
  return g.delay();
}

/// Splits g(t) = g0(t - Pd) with g0(0) != 0.
[[nodiscard]] inline std::pair<int, ImpulseResponse> factor_delay(const ImpulseResponse& g) {
  return {relative_degree(g), g.advanced()};
}

struct Assumption1Verdict {
  bool l1_summable = false;
  bool support_connected = false;
  bool strictly_decreasing = false;
  bool strictly_positive = false;
  /// False when the generator cannot vouch for samples past the checked horizon.
  bool tail_decided = false;
  std::size_t checked_horizon = 0;
  std::string detail;

  [[nodiscard]] bool passed() const {
    return l1_summable && support_connected && strictly_decreasing && strictly_positive && tail_decided;
  }
};

namespace detail {

// Inspects g0 on [0, horizon): connected support, positivity, strict decrease
// with relative slack eps.
inline void inspect_samples(const ImpulseResponse& g0, std::size_t horizon, double eps, Assumption1Verdict& v) {
  v.support_connected = true;
  v.strictly_positive = true;
  v.strictly_decreasing = true;
  for (std::size_t t = 0; t < horizon; ++t) {
    const double cur = g0(static_cast<long long>(t));
    if (cur == 0.0) {
      v.support_connected = false;
      if (v.detail.empty()) v.detail = "support not connected (zero at t=" + std::to_string(t) + ")";
    } else if (cur < 0.0) {
      v.strictly_positive = false;
      if (v.detail.empty()) v.detail = "negative sample at t=" + std::to_string(t);
    }
    if (t + 1 < horizon) {
      const double next = g0(static_cast<long long>(t + 1));
      if (!(next < cur * (1.0 - eps)) && v.strictly_decreasing) {
        v.strictly_decreasing = false;
        if (v.detail.empty()) v.detail = "not strictly decreasing at t=" + std::to_string(t);
      }
    }
  }
}

}  // namespace detail

/// Assumption-1 check on the delay-free kernel: l1, connected support,
/// strictly decreasing (g(t+1) < (1 - eps) g(t)) and hence positive.
[[nodiscard]] inline Assumption1Verdict verify_assumption1(const ImpulseResponse& g, double eps = 0.0) {
  Assumption1Verdict v;
  if (g.is_zero()) {
    v.detail = "impulse response is identically zero";
    return v;
  }
  const ImpulseResponse g0 = g.advanced();
  v.l1_summable = std::isfinite(g0.l1_norm_bound());

  if (g0.kind() == KernelKind::geometric) {
    v.support_connected = v.strictly_decreasing = v.strictly_positive = v.tail_decided = true;
    v.detail = "geometric decay";
    return v;
  }
  if (g0.finite_support()) {
    v.checked_horizon = static_cast<std::size_t>(g0.support_end());
    detail::inspect_samples(g0, v.checked_horizon, eps, v);
    // The last support sample falls to zero afterwards, which is still a decrease.
    v.tail_decided = true;
    if (v.passed()) v.detail = "finite support, strictly decreasing";
    return v;
  }
  v.checked_horizon = g0.horizon_for(defaults::check_tail) + 1;
  detail::inspect_samples(g0, v.checked_horizon, eps, v);
  v.tail_decided = g0.tail_guaranteed_monotone();
  if (!v.tail_decided && v.detail.empty()) v.detail = "undecidable beyond horizon";
  if (v.passed()) v.detail = "positive dominant pole, strictly decreasing over checked horizon";
  return v;
}

/// Convexity on the support: g(t+1) - 2 g(t) + g(t-1) >= 0 whenever t-1, t and
/// t+1 all lie in the support. `horizon` = 0 picks the default check horizon.
[[nodiscard]] inline bool is_convex_on_support(const ImpulseResponse& g, std::size_t horizon = 0) {
  if (g.is_zero()) return false;
  const ImpulseResponse g0 = g.advanced();
  if (g0.kind() == KernelKind::geometric) return true;
  std::size_t end = 0;
  if (g0.finite_support()) {
    end = static_cast<std::size_t>(g0.support_end());
  } else {
    if (!g0.tail_guaranteed_monotone()) return false;
    end = horizon == 0 ? g0.horizon_for(defaults::check_tail) + 2 : horizon;
  }
  for (std::size_t t = 1; t + 1 < end; ++t) {
    const double prev = g0(static_cast<long long>(t - 1));
    const double cur = g0(static_cast<long long>(t));
    const double next = g0(static_cast<long long>(t + 1));
    if (prev == 0.0 || cur == 0.0 || next == 0.0) continue;
    const double scale = std::max({std::abs(prev), std::abs(cur), std::abs(next)});
    if (next - 2.0 * cur + prev < -1e-12 * scale) return false;
  }
  return true;
}

/// One period of the periodic summation gbar(i) = sum_k g(i + kP).
struct PeriodicSummation {
  std::size_t period = 0;
  RealVector values;
  /// Bound on the absolute truncation error of each entry.
  double residual = 0.0;
};

[[nodiscard]] inline PeriodicSummation periodic_summation(const ImpulseResponse& g, std::size_t period,
                                                          double tol = defaults::summation_tol) {
  if (period == 0) throw std::invalid_argument("periodic_summation: period must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("periodic_summation: tolerance must be positive");
  PeriodicSummation out{period, RealVector(period, 0.0), 0.0};
  const auto p = static_cast<long long>(period);

  if (g.kind() == KernelKind::geometric) {
    const long long d = g.delay();
    const double denom = 1.0 - std::pow(g.pole(), static_cast<double>(period));
    for (long long i = 0; i < p; ++i) {
      const long long first = i >= d ? i : i + ((d - i + p - 1) / p) * p;
      out.values[static_cast<std::size_t>(i)] = g.gain() * std::pow(g.pole(), static_cast<double>(first - d)) / denom;
    }
    return out;
  }

  long long end = 0;
  if (g.finite_support()) {
    end = g.support_end();
  } else {
    end = g.delay();
    while (g.tail_bound(end) >= tol) {
      end += p;
      if (end - g.delay() > static_cast<long long>(defaults::max_summation_terms)) {
        throw SummationError("periodic_summation: tail bound does not reach the tolerance within the iteration cap");
      }
    }
  }
  for (long long t = 0; t < end; ++t) out.values[static_cast<std::size_t>(t % p)] += g(t);
  out.residual = g.tail_bound(end);
  return out;
}

/// H_v w, where H_v is the circulant matrix whose first column is v.
[[nodiscard]] inline RealVector circulant_apply(std::span<const double> v, std::span<const double> w) {
  if (v.size() != w.size()) throw std::invalid_argument("circulant_apply: length mismatch");
  const std::size_t n = v.size();
  RealVector out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += v[(i + n - j) % n] * w[j];
    out[i] = acc;
  }
  return out;
}

/// Q_n^k v: rotates entries down by k with wraparound, for any integer k.
template <class T>
[[nodiscard]] std::vector<T> cyclic_shift(std::span<const T> v, long long k) {
  const auto n = static_cast<long long>(v.size());
  if (n == 0) return {};
  const long long r = ((k % n) + n) % n;
  std::vector<T> out(v.size());
  for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>((i + r) % n)] = v[static_cast<std::size_t>(i)];
  return out;
}

[[nodiscard]] inline RealVector cyclic_shift(const RealVector& v, long long k) {
  return cyclic_shift(std::span<const double>(v), k);
}

[[nodiscard]] inline SignPattern cyclic_shift(const SignPattern& s, long long k) {
  return SignPattern(cyclic_shift(std::span<const int>(s.values()), k));
}

/// Plant g(t) = g0(t - Pd) in feedback with a relay of dead zone chi0.
class PlantSpec {
 public:
  /// Any leading zeros of `g` are folded into the delay, so delay() = extra_delay + relative_degree(g).
  PlantSpec(const ImpulseResponse& g, int extra_delay, double dead_zone) : g0_(g.advanced()) {
    if (extra_delay < 0) throw std::invalid_argument("plant: delay must be nonnegative");
    if (!(dead_zone >= 0.0) || !std::isfinite(dead_zone)) throw std::invalid_argument("plant: dead zone must be nonnegative");
    const auto [degree, g0] = factor_delay(g);
    if (!(g0(0) > 0.0)) throw std::invalid_argument("plant: leading impulse-response sample must be positive");
    delay_ = extra_delay + degree;
    dead_zone_ = dead_zone;
  }

  [[nodiscard]] const ImpulseResponse& g0() const noexcept { return g0_; }
  [[nodiscard]] int delay() const noexcept { return delay_; }
  [[nodiscard]] double dead_zone() const noexcept { return dead_zone_; }
  /// The full response g(t) = g0(t - Pd).
  [[nodiscard]] ImpulseResponse response() const { return g0_.delayed(delay_); }

  [[nodiscard]] PlantSpec with_delay(int delay) const { return PlantSpec(g0_, delay, dead_zone_); }
  [[nodiscard]] PlantSpec with_dead_zone(double chi0) const { return PlantSpec(g0_, delay_, chi0); }

 private:
  ImpulseResponse g0_;
  int delay_ = 0;
  double dead_zone_ = 0.0;
};

/// The loop-gain map for one period length P: s -> -Q_P^{Pd} H_{g0bar^P} s.
class LoopGain {
 public:
  LoopGain(const PlantSpec& plant, std::size_t period, double tol = defaults::summation_tol)
      : kernel_(periodic_summation(plant.g0(), period, tol)),
        shift_(static_cast<long long>(plant.delay()) % static_cast<long long>(period)),
        dead_zone_(plant.dead_zone()) {}

  [[nodiscard]] std::size_t period() const noexcept { return kernel_.period; }
  [[nodiscard]] long long shift() const noexcept { return shift_; }
  [[nodiscard]] double dead_zone() const noexcept { return dead_zone_; }
  [[nodiscard]] const PeriodicSummation& kernel() const noexcept { return kernel_; }

  [[nodiscard]] RealVector apply(std::span<const double> input) const {
    if (input.size() != kernel_.period) throw std::invalid_argument("loop gain: pattern length differs from period");
    RealVector y = cyclic_shift(circulant_apply(kernel_.values, input), shift_);
    for (double& x : y) x = -x;
    return y;
  }

  [[nodiscard]] RealVector apply(const SignPattern& pattern) const { return apply(pattern.to_real()); }

  /// Entry i of the image of the unit vector e_j.
  [[nodiscard]] double coefficient(std::size_t i, std::size_t j) const {
    const std::size_t n = kernel_.period;
    const auto idx = ((static_cast<long long>(i) - shift_ - static_cast<long long>(j)) % static_cast<long long>(n) +
                      static_cast<long long>(n)) % static_cast<long long>(n);
    return -kernel_.values[static_cast<std::size_t>(idx)];
  }

 private:
  PeriodicSummation kernel_;
  long long shift_ = 0;
  double dead_zone_ = 0.0;
};

/// One period of u^P = -Q_P^{Pd} H_{g0bar^P} pattern.
[[nodiscard]] inline RealVector loop_gain(const PlantSpec& plant, const SignPattern& pattern,
                                          double tol = defaults::summation_tol) {
  if (pattern.empty()) throw std::invalid_argument("loop_gain: empty pattern");
  return LoopGain(plant, pattern.size(), tol).apply(pattern);
}

}  // namespace relayosc
