#pragma once

namespace signfull {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;      // sqrt(2 pi)
inline constexpr double kSqrtHalfPi = 1.25331413731550025121;   // sqrt(pi / 2)
inline constexpr double kInvSqrt2Pi = 0.398942280401432677940;  // 1 / sqrt(2 pi)

double norm_pdf(double t) noexcept;
double norm_cdf(double t) noexcept;
double log_norm_cdf(double t) noexcept;

/// Inverse Mills ratio phi(t) / Phi(t). Stable for every finite t: behaves
/// like -t + 1/(-t) as t -> -inf and like phi(t) as t -> +inf.
double inv_mills(double t) noexcept;

}  // namespace signfull
