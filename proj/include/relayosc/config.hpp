#pragma once

// Numerical defaults shared by the library and the CLI. Every command-line
// override maps onto one of these.

#include <cstddef>

namespace relayosc::defaults {

/// Absolute error allowed per entry of a periodic summation.
inline constexpr double summation_tol = 1e-12;
/// Upper bound on the number of impulse-response samples summed for one kernel.
inline constexpr std::size_t max_summation_terms = 50'000'000;
/// Rational plants are rejected when a pole modulus exceeds 1 - stability_margin.
inline constexpr double stability_margin = 1e-9;
/// Tail level below which the cached impulse-response samples stop.
inline constexpr double cache_tail = 1e-17;
/// Tail level that fixes the horizon of sample-wise monotonicity/convexity checks.
inline constexpr double check_tail = 1e-12;
/// The partial-sum gap defining P_s must exceed this value.
inline constexpr double ps_tie_tol = 1e-12;
/// Slack on the 2x2 inequalities of the variation-bounding test.
inline constexpr double vb2_slack = 1e-12;
/// Waveform repetition tolerance for steady-state detection.
inline constexpr double period_tol = 1e-9;
/// Largest period handled by the exhaustive 3^P fixed-point search.
inline constexpr std::size_t oracle_cap = 16;
/// Safety margin used when pruning the exhaustive search.
inline constexpr double oracle_prune_margin = 1e-9;
/// A simulation aborts once |u| exceeds this multiple of ||g||_1.
inline constexpr double divergence_factor = 1e3;
/// Impulse-response tail dropped by the direct-convolution simulator.
inline constexpr double convolution_tail = 1e-15;
/// Significant digits used for every number written by the CLI.
inline constexpr int output_digits = 12;

}  // namespace relayosc::defaults
