#pragma once

namespace fading {

/// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Exponential integral evaluated on the negative real axis, Ei(-s) = -E1(s).
///
/// Power series below s = 6, Lentz continued fraction above. Throws
/// DomainError unless s is finite and strictly positive.
double exp_integral_ei_neg(double s);

/// E[log |G|^2] for a circularly symmetric complex Gaussian G whose mean has
/// squared magnitude `mean_sq` and whose variance is `variance`:
///
///   log(mean_sq) - Ei(-mean_sq / variance)       mean_sq > 0
///   log(variance) - gamma                        mean_sq = 0
///
/// Small ratios switch to the series of log s - Ei(-s) so the value is
/// continuous through mean_sq = 0.
double noncentral_log_magnitude_sq_mean(double mean_sq, double variance);

/// log(s) - Ei(-s) for s >= 0, with the s -> 0 limit -gamma.
double log_minus_ei_neg(double s);

}  // namespace fading
