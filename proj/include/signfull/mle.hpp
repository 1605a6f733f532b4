#pragma once

#include "signfull/estimators.hpp"
#include "signfull/projector.hpp"

#include <span>

namespace signfull {

struct SolverConfig {
    double tolerance = 1e-10;   // on rho
    int max_iter = 200;
    double boundary_eps = 1e-9; // search interval is [-1 + eps, 1 - eps]
};

struct MleResult {
    double rho_hat = 0.0;
    bool at_boundary = false;
    int iterations = 0;
    double score_residual = 0.0;
};

/// Sign-full likelihood equation sum_j lambda(c s_j) s_j with
/// c = rho / sqrt(1 - rho^2) and lambda the inverse Mills ratio. The positive
/// factor (1 - rho^2)^{-3/2} of the true derivative is dropped.
double mle_score(double rho, std::span<const double> s);
double mle_score(double rho, const SignFullPair& p);

/// Log-likelihood sum_j log Phi(c s_j), constant terms omitted.
double sign_full_loglik(double rho, std::span<const double> s);

/// Sign-full MLE from s_j = sgn(x_j) y_j.
MleResult mle_sign_full(std::span<const double> s, const SolverConfig& cfg = {});
MleResult mle_sign_full(const SignFullPair& p, const SolverConfig& cfg = {});

/// Bivariate-normal log-likelihood with unit variances, constants omitted.
double full_loglik(double rho, std::size_t k, double sum_xx, double sum_yy, double sum_xy);

/// Full-data MLE: the root of
///   rho^3 - rho^2 Sxy/k + rho ((Sxx + Syy)/k - 1) - Sxy/k = 0
/// in [-1, 1] with the largest likelihood.
MleResult mle_full_from_sums(std::size_t k, double sum_xx, double sum_yy, double sum_xy,
                             const SolverConfig& cfg = {});
MleResult mle_full(const FullSketch& x, const FullSketch& y, const SolverConfig& cfg = {});

EstimateReport to_report(const MleResult& r, Estimator e, std::size_t k);

}  // namespace signfull
