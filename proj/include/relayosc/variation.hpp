#pragma once

/**
 * @file variation.hpp
 * @brief Sign-variation calculus over real vectors and relay sign patterns.
 *
 * Every function here is a pure template over a random-access range of
 * arithmetic values, so the same code counts sign changes of a real
 * waveform (RealVector) and of a relay output (SignPattern).
 *
 * Conventions:
 *  - S^-(v) counts strict sign alternations after deleting zeros, with
 *    S^-(0) = -1.
 *  - S^+(v) is S^- after replacing every zero by the sign that maximizes
 *    the count.
 *  - The cyclic variants take the supremum over the n rotations of the
 *    wrapped vector [v_i, ..., v_n, v_1, ..., v_i]. The first and last
 *    entries of that wrapped vector are the same sample, so in S_c^+ they
 *    receive the same replacement sign.
 *  - A sample x counts as zero when |x| <= zero_tol (default 0, exact).
 */

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <ranges>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace relayosc {

using RealVector = std::vector<double>;

template <class R>
concept NumericRange = std::ranges::random_access_range<const R> &&
                       std::is_arithmetic_v<std::ranges::range_value_t<const R>>;

/// Relay output over one period; every entry is -1, 0 or +1.
class SignPattern {
 public:
  using value_type = int;
  using const_iterator = std::vector<int>::const_iterator;

  SignPattern() = default;
  SignPattern(std::initializer_list<int> values) : SignPattern(std::vector<int>(values)) {}
  explicit SignPattern(std::vector<int> values) : values_(std::move(values)) {
    for (int v : values_) {
      if (v < -1 || v > 1) throw std::invalid_argument("sign pattern entries must be -1, 0 or +1");
    }
  }

  static SignPattern zeros(std::size_t n) { return SignPattern(std::vector<int>(n, 0)); }

  /// Parses the compact form produced by to_string(), e.g. "++0--0".
  static SignPattern parse(std::string_view text) {
    std::vector<int> values;
    values.reserve(text.size());
    for (char c : text) {
      switch (c) {
        case '+': values.push_back(1); break;
        case '-': values.push_back(-1); break;
        case '0': values.push_back(0); break;
        default: throw std::invalid_argument("invalid sign pattern character '" + std::string(1, c) + "'");
      }
    }
    return SignPattern(std::move(values));
  }

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
  [[nodiscard]] int operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] const_iterator begin() const noexcept { return values_.begin(); }
  [[nodiscard]] const_iterator end() const noexcept { return values_.end(); }
  [[nodiscard]] const std::vector<int>& values() const noexcept { return values_; }

  [[nodiscard]] bool is_zero() const {
    return std::ranges::all_of(values_, [](int v) { return v == 0; });
  }

  [[nodiscard]] RealVector to_real() const { return RealVector(values_.begin(), values_.end()); }

  [[nodiscard]] SignPattern negated() const {
    std::vector<int> out(values_.size());
    std::ranges::transform(values_, out.begin(), [](int v) { return -v; });
    return SignPattern(std::move(out));
  }

  [[nodiscard]] std::string to_string() const {
    std::string out;
    out.reserve(values_.size());
    for (int v : values_) out.push_back(v > 0 ? '+' : (v < 0 ? '-' : '0'));
    return out;
  }

  friend bool operator==(const SignPattern&, const SignPattern&) = default;
  friend auto operator<=>(const SignPattern&, const SignPattern&) = default;

 private:
  std::vector<int> values_;
};

template <class T>
[[nodiscard]] constexpr int sign_of(T x, double zero_tol = 0.0) {
  const double v = static_cast<double>(x);
  if (v > zero_tol) return 1;
  if (v < -zero_tol) return -1;
  return 0;
}

namespace detail {

inline constexpr int kUnreachable = std::numeric_limits<int>::min() / 4;

// S^- over the m entries get(0..m-1).
template <class Get>
int minus_variation(std::size_t m, Get&& get, double zero_tol) {
  int last = 0;
  int changes = 0;
  bool any = false;
  for (std::size_t k = 0; k < m; ++k) {
    const int s = sign_of(get(k), zero_tol);
    if (s == 0) continue;
    if (any && s != last) ++changes;
    last = s;
    any = true;
  }
  return any ? changes : -1;
}

// S^+ over the m entries get(0..m-1) by dynamic programming on the sign of
// the most recent entry. `pin` forces the sign assigned to zero entries at
// positions 0 and m-1 (used when both positions are the same sample).
template <class Get>
int plus_variation(std::size_t m, Get&& get, double zero_tol, int pin = 0) {
  if (m == 0) return -1;
  // best[0]: last entry negative, best[1]: last entry positive.
  std::array<int, 2> best{kUnreachable, kUnreachable};
  for (std::size_t k = 0; k < m; ++k) {
    int s = sign_of(get(k), zero_tol);
    if (s == 0 && pin != 0 && (k == 0 || k + 1 == m)) s = pin;
    if (k == 0) {
      best = {s <= 0 ? 0 : kUnreachable, s >= 0 ? 0 : kUnreachable};
      continue;
    }
    const std::array<int, 2> prev = best;
    const auto into = [&](int idx) { return std::max(prev[idx], prev[1 - idx] + 1); };
    best[0] = s <= 0 ? into(0) : kUnreachable;
    best[1] = s >= 0 ? into(1) : kUnreachable;
  }
  return std::max(best[0], best[1]);
}

}  // namespace detail

/// Cyclic forward difference: out[i] = v[i+1] - v[i], with out[n-1] = v[0] - v[n-1].
template <NumericRange R>
[[nodiscard]] RealVector cyclic_diff(const R& v) {
  const std::size_t n = std::ranges::size(v);
  if (n == 0) throw std::invalid_argument("cyclic_diff: empty vector");
  RealVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<double>(v[(i + 1) % n]) - static_cast<double>(v[i]);
  }
  return out;
}

template <NumericRange R>
[[nodiscard]] int s_minus(const R& v, double zero_tol = 0.0) {
  return detail::minus_variation(std::ranges::size(v), [&](std::size_t k) { return v[k]; }, zero_tol);
}

template <NumericRange R>
[[nodiscard]] int s_plus(const R& v, double zero_tol = 0.0) {
  return detail::plus_variation(std::ranges::size(v), [&](std::size_t k) { return v[k]; }, zero_tol);
}

template <NumericRange R>
[[nodiscard]] int s_cyclic_minus(const R& v, double zero_tol = 0.0) {
  const std::size_t n = std::ranges::size(v);
  int best = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto wrapped = [&](std::size_t k) { return v[(i + k) % n]; };
    best = std::max(best, detail::minus_variation(n + 1, wrapped, zero_tol));
  }
  return best;
}

template <NumericRange R>
[[nodiscard]] int s_cyclic_plus(const R& v, double zero_tol = 0.0) {
  const std::size_t n = std::ranges::size(v);
  int best = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto wrapped = [&](std::size_t k) { return v[(i + k) % n]; };
    if (sign_of(v[i], zero_tol) != 0) {
      best = std::max(best, detail::plus_variation(n + 1, wrapped, zero_tol));
    } else {
      for (int pin : {-1, 1}) best = std::max(best, detail::plus_variation(n + 1, wrapped, zero_tol, pin));
    }
  }
  return best;
}

/// Relay with symmetric dead zone: +1 above chi0, -1 below -chi0, 0 on [-chi0, chi0].
[[nodiscard]] inline int relay(double x, double chi0, double zero_tol = 0.0) {
  if (!(chi0 >= 0.0)) throw std::invalid_argument("relay: dead zone must be nonnegative");
  if (!(zero_tol >= 0.0)) throw std::invalid_argument("relay: tolerance must be nonnegative");
  const double edge = chi0 + zero_tol;
  if (x > edge) return 1;
  if (x < -edge) return -1;
  return 0;
}

template <NumericRange R>
[[nodiscard]] SignPattern relay_vec(const R& v, double chi0, double zero_tol = 0.0) {
  std::vector<int> out;
  out.reserve(std::ranges::size(v));
  for (const auto& x : v) out.push_back(relay(static_cast<double>(x), chi0, zero_tol));
  return SignPattern(std::move(out));
}

struct SignCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;

  friend bool operator==(const SignCounts&, const SignCounts&) = default;
};

template <NumericRange R>
[[nodiscard]] SignCounts sign_counts(const R& v, double zero_tol = 0.0) {
  SignCounts counts;
  for (const auto& x : v) {
    switch (sign_of(x, zero_tol)) {
      case 1: ++counts.positive; break;
      case -1: ++counts.negative; break;
      default: ++counts.zero; break;
    }
  }
  return counts;
}

template <NumericRange R>
[[nodiscard]] bool is_sign_symmetric(const R& v, double zero_tol = 0.0) {
  const SignCounts c = sign_counts(v, zero_tol);
  return c.positive == c.negative;
}

template <NumericRange R>
void require_nonzero(const R& v, const char* what) {
  if (std::ranges::all_of(v, [](const auto& x) { return x == 0; })) {
    throw std::invalid_argument(std::string(what) + ": zero vector");
  }
}

/// Periodic unimodality via S_c^-(Delta_c v) == 2. Constant vectors give -1 and
/// are therefore not unimodal under this test.
template <NumericRange R>
[[nodiscard]] bool is_periodically_unimodal(const R& v, double zero_tol = 0.0) {
  require_nonzero(v, "is_periodically_unimodal");
  return s_cyclic_minus(cyclic_diff(v), zero_tol) == 2;
}

/// Direct definition: some rotation is nondecreasing up to an index k2 and
/// nonincreasing from k2 to the end of the period.
template <NumericRange R>
[[nodiscard]] bool is_unimodal_by_rotation(const R& v) {
  require_nonzero(v, "is_unimodal_by_rotation");
  const std::size_t n = std::ranges::size(v);
  const auto at = [&](std::size_t start, std::size_t i) { return static_cast<double>(v[(start + i) % n]); };
  for (std::size_t start = 0; start < n; ++start) {
    std::size_t k = 0;
    while (k + 1 < n && at(start, k + 1) >= at(start, k)) ++k;
    std::size_t j = k;
    while (j + 1 < n && at(start, j + 1) <= at(start, j)) ++j;
    if (j + 1 == n) return true;
  }
  return false;
}

/// Level-set characterization: S_c^-(v - gamma) <= 2 for every gamma. The
/// count is piecewise constant in gamma, so the distinct entries and the
/// midpoints between consecutive distinct entries form a sufficient test set.
template <NumericRange R>
[[nodiscard]] bool is_unimodal_by_levels(const R& v) {
  require_nonzero(v, "is_unimodal_by_levels");
  std::set<double> levels;
  for (const auto& x : v) levels.insert(static_cast<double>(x));
  std::vector<double> gammas(levels.begin(), levels.end());
  const std::size_t distinct = gammas.size();
  for (std::size_t i = 0; i + 1 < distinct; ++i) gammas.push_back(0.5 * (gammas[i] + gammas[i + 1]));

  RealVector shifted(std::ranges::size(v));
  for (double gamma : gammas) {
    std::size_t i = 0;
    for (const auto& x : v) shifted[i++] = static_cast<double>(x) - gamma;
    if (s_cyclic_minus(shifted) > 2) return false;
  }
  return true;
}

}  // namespace relayosc
