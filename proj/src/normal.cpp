#include "signfull/normal.hpp"

#include <cmath>

namespace signfull {

namespace {

constexpr double kInvSqrt2 = 0.707106781186547524401;
constexpr double kLeftTail = -8.0;

// Continued fraction for 1 / R(x), R the Mills ratio (1 - Phi(x)) / phi(x):
// x + 1/(x + 2/(x + 3/(x + ...))). Evaluated backwards; x > 8 converges
// to full double precision well before 60 terms.
double reciprocal_mills(double x) noexcept {
    double tail = x;
    for (int n = 60; n >= 1; --n) tail = x + n / tail;
    return tail;
}

}  // namespace

double norm_pdf(double t) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

double norm_cdf(double t) noexcept { return 0.5 * std::erfc(-t * kInvSqrt2); }

double log_norm_cdf(double t) noexcept {
    if (t >= kLeftTail) return std::log(norm_cdf(t));
    // log Phi(t) = log phi(t) - log(phi(t)/Phi(t))
    return -0.5 * t * t - std::log(kSqrt2Pi) - std::log(reciprocal_mills(-t));
}

double inv_mills(double t) noexcept {
    if (std::isnan(t)) return t;
    if (t < kLeftTail) return reciprocal_mills(-t);
    return norm_pdf(t) / norm_cdf(t);
}

}  // namespace signfull
