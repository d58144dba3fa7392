#pragma once

/**
 * @file analyzer.hpp
 * @brief Fixed-point search for unimodal self-oscillations of the relay loop.
 *
 * A candidate relay pattern s of length P is a fixed point when
 * rel(u) = s for u = loop_gain(plant, s). The analyzer enumerates the
 * patterns with S_c^+ = 2, verifies them, and annotates the results with the
 * period bounds 2Pd <= P <= 2(Pd + Ps) (and 4Pd + 2 for convex kernels).
 * brute_force_fixed_points() is the independent exhaustive check.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "relayosc/config.hpp"
#include "relayosc/lti.hpp"
#include "relayosc/parallel.hpp"
#include "relayosc/variation.hpp"

namespace relayosc {

class TheoremInapplicable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OracleCapExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Smallest t >= 1 with sum_{k<t} g0(k) - sum_{k>=t} g0(k) > tie_tol.
[[nodiscard]] inline int compute_Ps(const ImpulseResponse& g, double tie_tol = defaults::ps_tie_tol) {
  const ImpulseResponse g0 = g.advanced();
  if (g0.is_zero() || !(g0(0) > 0.0)) throw TheoremInapplicable("compute_Ps: g0(0) must be positive");
  const double total = g0.kind() == KernelKind::geometric ? g0.gain() / (1.0 - g0.pole()) : g0.l1_norm_bound();
  const std::size_t horizon = g0.horizon_for(tie_tol * 1e-3) + 1;
  double partial = 0.0;
  for (std::size_t t = 1; t <= horizon + 1; ++t) {
    partial += g0(static_cast<long long>(t - 1));
    if (2.0 * partial - total > tie_tol) return static_cast<int>(t);
  }
  throw SummationError("compute_Ps: partial-sum gap stays within tolerance of zero beyond the horizon");
}

struct PeriodBounds {
  int lower = 0;
  int upper_general = 0;
  std::optional<int> upper_convex;
  int ps = 0;
  /// Periods strictly between Pd and 2Pd admit no oscillation.
  int exclusion_low = 0;

  [[nodiscard]] int effective_upper() const {
    return upper_convex ? std::min(upper_general, *upper_convex) : upper_general;
  }
};

[[nodiscard]] inline PeriodBounds period_bounds(const PlantSpec& plant) {
  const int pd = plant.delay();
  if (pd < 1) throw TheoremInapplicable("period bounds need Pd >= 1");
  const Assumption1Verdict a1 = verify_assumption1(plant.g0());
  if (!a1.passed()) throw TheoremInapplicable("assumption 1 fails: " + a1.detail);
  PeriodBounds b;
  b.ps = compute_Ps(plant.g0());
  b.lower = 2 * pd;
  b.upper_general = 2 * (pd + b.ps);
  b.exclusion_low = pd;
  // With Pd = 1 the convex bound's hypothesis is not met.
  if (pd > 1 && is_convex_on_support(plant.g0())) b.upper_convex = 4 * pd + 2;
  return b;
}

struct CanonicalForm {
  SignPattern pattern;
  /// cyclic_shift(pattern, shift) reproduces the input.
  std::size_t shift = 0;
};

/// Lexicographically smallest rotation, ordering -1 < 0 < +1.
[[nodiscard]] inline CanonicalForm canonical_rotation(const SignPattern& s) {
  CanonicalForm best{s, 0};
  const std::size_t n = s.size();
  for (std::size_t k = 1; k < n; ++k) {
    SignPattern r = cyclic_shift(s, -static_cast<long long>(k));
    if (r < best.pattern) best = {std::move(r), k};
  }
  return best;
}

/// Number of distinct rotations.
[[nodiscard]] inline std::size_t rotation_orbit(const SignPattern& s) {
  const std::size_t n = s.size();
  for (std::size_t k = 1; k < n; ++k) {
    if (n % k == 0 && cyclic_shift(s, static_cast<long long>(k)) == s) return k;
  }
  return n;
}

[[nodiscard]] inline std::vector<SignPattern> all_rotations(const SignPattern& s) {
  std::vector<SignPattern> out;
  const std::size_t orbit = rotation_orbit(s);
  for (std::size_t k = 0; k < orbit; ++k) out.push_back(cyclic_shift(s, static_cast<long long>(k)));
  return out;
}

/// Canonical representatives of every nonzero pattern with S_c^+ = 2: the
/// four two-signed forms and the one-signed patterns with one or two zeros.
[[nodiscard]] inline std::vector<SignPattern> enumerate_unimodal_patterns(std::size_t period) {
  if (period < 2) throw std::invalid_argument("enumerate_unimodal_patterns: period must be at least 2");
  std::set<SignPattern> seen;
  const auto add = [&](std::size_t pos, int gap1, std::size_t neg, int gap2) {
    std::vector<int> v;
    v.insert(v.end(), pos, 1);
    v.insert(v.end(), static_cast<std::size_t>(gap1), 0);
    v.insert(v.end(), neg, -1);
    v.insert(v.end(), static_cast<std::size_t>(gap2), 0);
    seen.insert(canonical_rotation(SignPattern(std::move(v))).pattern);
  };
  for (int gap1 = 0; gap1 <= 1; ++gap1) {
    for (int gap2 = 0; gap2 <= 1; ++gap2) {
      const std::size_t zeros = static_cast<std::size_t>(gap1 + gap2);
      if (period < zeros + 2) continue;
      for (std::size_t a = 1; a + zeros < period; ++a) add(a, gap1, period - zeros - a, gap2);
    }
  }
  for (std::size_t zeros = 1; zeros <= 2 && zeros < period; ++zeros) {
    for (int sign : {-1, 1}) {
      std::vector<int> v(period - zeros, sign);
      v.insert(v.end(), zeros, 0);
      seen.insert(canonical_rotation(SignPattern(std::move(v))).pattern);
    }
  }
  return {seen.begin(), seen.end()};
}

struct OscillationFlags {
  bool satisfies_assumption2 = false;
  bool sign_symmetric = false;
  bool unimodal = false;
  bool is_self_oscillation = false;

  friend bool operator==(const OscillationFlags&, const OscillationFlags&) = default;
};

struct OscillationRecord {
  std::size_t period = 0;
  SignPattern pattern;
  RealVector waveform;
  OscillationFlags flags;
  /// Number of distinct phase shifts of this oscillation.
  std::size_t orbit = 0;
};

[[nodiscard]] inline std::optional<OscillationRecord> verify_fixed_point(const LoopGain& gain,
                                                                          const SignPattern& pattern) {
  if (pattern.size() < 2) throw std::invalid_argument("verify_fixed_point: pattern length must be at least 2");
  RealVector u = gain.apply(pattern);
  if (relay_vec(u, gain.dead_zone()) != pattern) return std::nullopt;
  OscillationRecord rec;
  rec.period = pattern.size();
  rec.pattern = pattern;
  rec.orbit = rotation_orbit(pattern);
  // Delta_c u through the linear map, so equal samples difference to exact zeros.
  const int diff_variation = s_cyclic_minus(gain.apply(cyclic_diff(pattern)));
  rec.flags.is_self_oscillation = diff_variation >= 2;
  rec.flags.unimodal = diff_variation == 2;
  rec.flags.sign_symmetric = is_sign_symmetric(pattern);
  rec.flags.satisfies_assumption2 = rec.flags.unimodal && s_cyclic_plus(pattern) == 2;
  rec.waveform = std::move(u);
  return rec;
}

[[nodiscard]] inline std::optional<OscillationRecord> verify_fixed_point(const PlantSpec& plant,
                                                                          const SignPattern& pattern,
                                                                          double tol = defaults::summation_tol) {
  if (pattern.size() < 2) throw std::invalid_argument("verify_fixed_point: pattern length must be at least 2");
  return verify_fixed_point(LoopGain(plant, pattern.size(), tol), pattern);
}

[[nodiscard]] inline SignPattern half_wave_pattern(int pd) {
  std::vector<int> v(static_cast<std::size_t>(pd), 1);
  v.insert(v.end(), static_cast<std::size_t>(pd), -1);
  return SignPattern(std::move(v));
}

/// H_{gbar^{2Pd}} [1^Pd, -1^Pd] with the delay folded into gbar.
[[nodiscard]] inline RealVector half_wave_response(const PlantSpec& plant) {
  const int pd = plant.delay();
  if (pd < 1) throw TheoremInapplicable("needs Pd >= 1");
  const PeriodicSummation kernel = periodic_summation(plant.response(), static_cast<std::size_t>(2 * pd));
  return circulant_apply(kernel.values, half_wave_pattern(pd).to_real());
}

/// Whether the half-wave pattern of period 2Pd is a fixed point.
[[nodiscard]] inline bool exists_2Pd(const PlantSpec& plant) {
  const int pd = plant.delay();
  if (pd < 1) throw TheoremInapplicable("exists_2Pd needs Pd >= 1");
  const PeriodicSummation kernel = periodic_summation(plant.g0(), static_cast<std::size_t>(2 * pd));
  const RealVector y = circulant_apply(kernel.values, half_wave_pattern(pd).to_real());
  return y[0] > plant.dead_zone();
}

/// Pd-th largest entry of the half-wave response.
[[nodiscard]] inline double chi0_threshold(const PlantSpec& plant) {
  RealVector y = half_wave_response(plant);
  std::ranges::sort(y, std::greater<>{});
  return y[static_cast<std::size_t>(plant.delay() - 1)];
}

/// Even periods 2Pd / (2n + 1), largest first.
[[nodiscard]] inline std::vector<int> subharmonic_periods(int pd) {
  if (pd < 1) throw std::invalid_argument("subharmonic_periods: Pd must be positive");
  std::vector<int> out;
  for (int d = 1; d <= pd; d += 2) {
    if (pd % d == 0) out.push_back(2 * pd / d);
  }
  return out;
}

struct AbsenceVerdict {
  bool applicable = false;
  bool absent = false;
  std::string reason;
  /// Largest period covered by the exhaustive confirmation, 0 when not run.
  std::size_t confirmed_up_to = 0;
  std::vector<SignPattern> counterexamples;
};

[[nodiscard]] inline std::vector<SignPattern> brute_force_fixed_points(const PlantSpec& plant, std::size_t period,
                                                                       std::size_t cap = defaults::oracle_cap,
                                                                       std::size_t threads = 0);

/// Without delay and under assumption 1 no Assumption-2 oscillation exists.
[[nodiscard]] inline AbsenceVerdict check_absence(const PlantSpec& plant, std::size_t confirm_up_to = 0) {
  AbsenceVerdict v;
  if (plant.delay() != 0) {
    v.reason = "theorem inapplicable: Pd must be 0";
    return v;
  }
  const Assumption1Verdict a1 = verify_assumption1(plant.g0());
  if (!a1.passed()) {
    v.reason = "theorem inapplicable: assumption 1 fails (" + a1.detail + ")";
    return v;
  }
  v.applicable = true;
  v.absent = true;
  v.reason = "no self-oscillation with S_c^+(rel(u)) = 2 exists for a delay-free plant";
  for (std::size_t p = 2; p <= confirm_up_to; ++p) {
    for (const SignPattern& s : brute_force_fixed_points(plant, p, std::max(confirm_up_to, defaults::oracle_cap))) {
      if (s_cyclic_plus(s) == 2) v.counterexamples.push_back(s);
    }
    v.confirmed_up_to = p;
  }
  if (!v.counterexamples.empty()) v.absent = false;
  return v;
}

/// 2(Pd + Ps) rounded up to even, plus 2.
[[nodiscard]] inline std::size_t default_pmax(const PlantSpec& plant) {
  int ps = 1;
  try {
    ps = compute_Ps(plant.g0());
  } catch (const std::exception&) {
  }
  const int upper = 2 * (plant.delay() + ps);
  return static_cast<std::size_t>(upper + (upper % 2) + 2);
}

struct BoundViolation {
  std::size_t period = 0;
  SignPattern pattern;
  std::string reason;
};

struct OracleDiffEntry {
  std::size_t period = 0;
  SignPattern pattern;
  /// "oracle_only" or "analyzer_only".
  std::string side;
};

struct AnalyzeOptions {
  std::size_t pmax = 0;  // 0 = default_pmax
  /// Skip zero-free patterns that are not sign-symmetric.
  bool prune = false;
  double tol = defaults::summation_tol;
  std::size_t threads = 0;
};

struct OscillationReport {
  PlantSpec plant;
  Assumption1Verdict assumption1;
  std::optional<PeriodBounds> bounds;
  std::optional<AbsenceVerdict> absence;
  std::size_t pmax = 0;
  std::vector<OscillationRecord> records;
  std::vector<BoundViolation> violations;
  std::vector<OracleDiffEntry> oracle_diff;
  std::size_t oracle_checked_up_to = 0;

  /// Records with P < Pd fall outside the scope of the period bounds.
  [[nodiscard]] bool in_bound_scope(const OscillationRecord& r) const {
    return static_cast<long long>(r.period) >= plant.delay();
  }
};

namespace detail {

inline void check_record(const OscillationReport& report, const OscillationRecord& rec,
                         std::vector<BoundViolation>& out) {
  const auto p = static_cast<int>(rec.period);
  const auto fail = [&](std::string why) { out.push_back({rec.period, rec.pattern, std::move(why)}); };
  const SignCounts c = sign_counts(rec.pattern);
  if (rec.flags.satisfies_assumption2) {
    if (!rec.flags.sign_symmetric) fail("assumption-2 oscillation is not sign-symmetric");
    if (c.zero == 0 && rec.period != 2 * c.positive) fail("zero-free pattern with P != 2 P_p");
  }
  if (!report.bounds || !report.in_bound_scope(rec) || !rec.flags.satisfies_assumption2) return;
  const PeriodBounds& b = *report.bounds;
  if (p > b.exclusion_low && p < b.lower) {
    fail("period strictly between Pd and 2Pd");
  } else if (p < b.lower) {
    fail("period below 2Pd");
  }
  if (p > b.upper_general) fail("period above 2(Pd+Ps)");
  if (b.upper_convex && p > *b.upper_convex) fail("period above 4Pd+2");
}

}  // namespace detail

[[nodiscard]] inline OscillationReport find_oscillations(const PlantSpec& plant, const AnalyzeOptions& opt = {}) {
  OscillationReport report{plant, verify_assumption1(plant.g0()), {}, {}, 0, {}, {}, {}, 0};
  if (plant.delay() >= 1 && report.assumption1.passed()) report.bounds = period_bounds(plant);
  if (plant.delay() == 0) report.absence = check_absence(plant);
  report.pmax = opt.pmax != 0 ? opt.pmax : default_pmax(plant);
  if (report.pmax < 2) throw std::invalid_argument("find_oscillations: Pmax must be at least 2");

  const std::size_t count = report.pmax - 1;
  std::vector<std::vector<OscillationRecord>> per_period(count);
  parallel_for(
      count,
      [&](std::size_t idx) {
        const std::size_t p = idx + 2;
        const LoopGain gain(plant, p, opt.tol);
        for (const SignPattern& s : enumerate_unimodal_patterns(p)) {
          if (opt.prune) {
            const SignCounts c = sign_counts(s);
            if (c.zero == 0 && c.positive != c.negative) continue;
          }
          if (auto rec = verify_fixed_point(gain, s)) per_period[idx].push_back(std::move(*rec));
        }
      },
      opt.threads);
  for (auto& recs : per_period) {
    for (auto& r : recs) report.records.push_back(std::move(r));
  }
  for (const auto& rec : report.records) detail::check_record(report, rec, report.violations);
  return report;
}

namespace detail {

struct OracleSearch {
  std::size_t n = 0;
  double chi0 = 0.0;
  std::vector<double> coeff;   // coeff[i * n + j]
  std::vector<double> suffix;  // suffix[i * (n + 1) + k] = sum_{j >= k} |coeff(i, j)|
  const LoopGain* gain = nullptr;

  [[nodiscard]] double c(std::size_t i, std::size_t j) const { return coeff[i * n + j]; }
  [[nodiscard]] double rest(std::size_t i, std::size_t k) const { return suffix[i * (n + 1) + k]; }

  [[nodiscard]] bool feasible(int s, double partial, double remaining) const {
    const double hi = partial + remaining + defaults::oracle_prune_margin;
    const double lo = partial - remaining - defaults::oracle_prune_margin;
    if (s > 0) return hi > chi0;
    if (s < 0) return lo < -chi0;
    return hi >= -chi0 && lo <= chi0;
  }

  // s[0..k) assigned; partial[i] = sum_{j<k} coeff(i,j) s_j.
  void descend(std::size_t k, std::vector<int>& s, std::vector<std::vector<double>>& partial,
               std::vector<SignPattern>& found) const {
    const std::vector<double>& cur = partial[k];
    for (std::size_t i = 0; i < k; ++i) {
      if (!feasible(s[i], cur[i], rest(i, k))) return;
    }
    if (k == n) {
      if (std::ranges::all_of(s, [](int x) { return x == 0; })) return;
      SignPattern pattern(s);
      if (relay_vec(gain->apply(pattern), chi0) == pattern) found.push_back(std::move(pattern));
      return;
    }
    for (int sign : {-1, 0, 1}) {
      s[k] = sign;
      std::vector<double>& next = partial[k + 1];
      for (std::size_t i = 0; i < n; ++i) next[i] = cur[i] + sign * c(i, k);
      descend(k + 1, s, partial, found);
    }
    s[k] = 0;
  }
};

}  // namespace detail

/// Every nonzero s in {-1,0,1}^P with rel(loop_gain(s)) = s, by depth-first
/// search that abandons a prefix once some assigned row cannot reach its sign.
[[nodiscard]] inline std::vector<SignPattern> brute_force_fixed_points(const PlantSpec& plant, std::size_t period,
                                                                       std::size_t cap, std::size_t threads) {
  if (period < 1) throw std::invalid_argument("oracle: period must be positive");
  if (period > cap) {
    throw OracleCapExceeded("oracle: period " + std::to_string(period) + " exceeds the cap " + std::to_string(cap));
  }
  const LoopGain gain(plant, period);
  detail::OracleSearch search;
  search.n = period;
  search.chi0 = plant.dead_zone();
  search.gain = &gain;
  search.coeff.resize(period * period);
  search.suffix.assign(period * (period + 1), 0.0);
  for (std::size_t i = 0; i < period; ++i) {
    for (std::size_t j = 0; j < period; ++j) search.coeff[i * period + j] = gain.coefficient(i, j);
    for (std::size_t k = period; k-- > 0;) {
      search.suffix[i * (period + 1) + k] = search.suffix[i * (period + 1) + k + 1] + std::abs(search.c(i, k));
    }
  }

  // Split on the first two entries.
  const std::size_t depth = std::min<std::size_t>(2, period);
  std::size_t branches = 1;
  for (std::size_t d = 0; d < depth; ++d) branches *= 3;
  std::vector<std::vector<SignPattern>> found(branches);
  parallel_for(
      branches,
      [&](std::size_t b) {
        std::vector<int> s(period, 0);
        std::vector<std::vector<double>> partial(period + 1, std::vector<double>(period, 0.0));
        std::size_t code = b;
        for (std::size_t k = 0; k < depth; ++k) {
          s[k] = static_cast<int>(code % 3) - 1;
          code /= 3;
          for (std::size_t i = 0; i < period; ++i) partial[k + 1][i] = partial[k][i] + s[k] * search.c(i, k);
        }
        // Prefix feasibility is rechecked inside descend.
        search.descend(depth, s, partial, found[b]);
      },
      threads);
  std::vector<SignPattern> out;
  for (auto& f : found) out.insert(out.end(), f.begin(), f.end());
  std::ranges::sort(out);
  return out;
}

/// Compares, for every P in [2, up_to], the rotations of the analyzer's
/// records with the oracle's fixed points that have S_c^+ = 2.
[[nodiscard]] inline std::vector<OracleDiffEntry> oracle_diff(const OscillationReport& report, std::size_t up_to,
                                                              std::size_t cap = defaults::oracle_cap,
                                                              std::size_t threads = 0) {
  std::vector<OracleDiffEntry> diff;
  for (std::size_t p = 2; p <= up_to; ++p) {
    std::set<SignPattern> oracle;
    for (SignPattern& s : brute_force_fixed_points(report.plant, p, cap, threads)) {
      if (s_cyclic_plus(s) == 2) oracle.insert(std::move(s));
    }
    std::set<SignPattern> analyzer;
    for (const auto& rec : report.records) {
      if (rec.period != p) continue;
      for (SignPattern& s : all_rotations(rec.pattern)) analyzer.insert(std::move(s));
    }
    for (const auto& s : oracle) {
      if (!analyzer.contains(s)) diff.push_back({p, s, "oracle_only"});
    }
    for (const auto& s : analyzer) {
      if (!oracle.contains(s)) diff.push_back({p, s, "analyzer_only"});
    }
  }
  return diff;
}

}  // namespace relayosc
