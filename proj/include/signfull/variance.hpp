#pragma once

#include "signfull/estimators.hpp"

#include <cstdint>
#include <optional>

namespace signfull {

struct MonteCarloInfo {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double std_error = 0.0;  // of the reported value
};

/// Asymptotic variance factor V(rho): Var(rho_hat) ~ V / k.
struct VarianceFactor {
    Estimator estimator = Estimator::SignSign;
    double rho = 0.0;
    double value = 0.0;
    std::optional<MonteCarloInfo> monte_carlo;  // set only for the sign-full MLE
};

/// Closed-form V for every estimator except MleSignFull (see fisher_vm).
/// At |rho| = 1 the continuous limit is returned.
VarianceFactor v_factor(Estimator e, double rho);

struct FisherConfig {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/// V_m = 1 / I(rho), with the per-sample Fisher information I(rho) estimated
/// by Monte Carlo as the mean of minus the second derivative of
/// log Phi(c sgn(x) y). Deterministic for a given seed and sample count.
VarianceFactor fisher_vm(double rho, const FisherConfig& cfg);

/// Fisher information only (1 / V_m) with its standard error.
struct FisherInformation {
    double value = 0.0;
    double std_error = 0.0;
};
FisherInformation fisher_information(double rho, const FisherConfig& cfg);

/// The three half-line Gaussian integrals
///   I1 = int_0^inf t   e^{-t^2/2} Phi(c t) dt
///   I2 = int_0^inf t^3 e^{-t^2/2} Phi(c t) dt
///   I3 = int_0^inf t^2 e^{-t^2/2} Phi(c t) dt,   c = rho / sqrt(1 - rho^2).
struct GaussianIntegrals {
    double i1 = 0.0;
    double i2 = 0.0;
    double i3 = 0.0;
};
GaussianIntegrals half_line_integrals(double rho);

/// Ratios of variance factors to V_1 at rho = 0 and the rho -> 1 limits,
/// all from closed forms.
struct VarianceRatioTable {
    double mle_at_zero = 0.0;
    double g_at_zero = 0.0;
    double g_norm_at_zero = 0.0;
    double s_at_zero = 0.0;
    double s_norm_at_zero = 0.0;
    double s_limit_at_one = 0.0;
    double s_norm_limit_at_one = 0.0;
};
VarianceRatioTable variance_ratio_constants();

/// Leading term 2 sqrt(2) pi (1 - |rho|)^{3/2} of V_1 as |rho| -> 1 (zero at the ends).
double v1_asymptotic(double rho);

/// acos(rho) - rho sqrt(1 - rho^2), accurate near rho = 1.
double arc_minus_chord(double rho);

/// Closed-form moments of the sign-full statistics.
struct SignFullMoments {
    double signed_mean = 0.0;        // E sgn(x) y
    double signed_third = 0.0;       // E (sgn(x) y)^3
    double match_mean = 0.0;         // E y_- 1{x<0} + y_+ 1{x>=0}
    double match_second = 0.0;
    double mismatch_mean = 0.0;      // E y_- 1{x>=0} + y_+ 1{x<0}
    double mismatch_second = 0.0;
};
SignFullMoments sign_full_moments(double rho);

}  // namespace signfull
