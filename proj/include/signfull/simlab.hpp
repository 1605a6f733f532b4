#pragma once

#include "signfull/estimators.hpp"
#include "signfull/mle.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace signfull {

/// Standard bivariate normal pair with correlation rho for coordinate j of
/// trial `trial`: x ~ N(0,1), y = rho x + sqrt(1 - rho^2) z. Pure in its arguments.
std::pair<double, double> sample_pair(double rho, std::uint64_t seed, std::uint64_t trial, std::uint32_t j);

struct SimConfig {
    double rho = 0.0;
    std::uint32_t k = 100;
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 0;
    std::vector<Estimator> estimators;
    unsigned threads = 1;
    SolverConfig solver{};
};

/// Empirical error of the unclamped estimator over `trials` repetitions.
/// mse = bias^2 + variance; clamp_rate is the fraction of trials whose value
/// fell outside [-1, 1].
struct MseReport {
    Estimator estimator = Estimator::SignSign;
    double rho = 0.0;
    std::uint32_t k = 0;
    double bias = 0.0;
    double variance = 0.0;
    double mse = 0.0;
    double clamp_rate = 0.0;
};

std::vector<MseReport> run_mse(const SimConfig& cfg);

struct MseRatioRow {
    std::uint32_t k = 0;
    double mse_sign_sign = 0.0;
    double mse_s_norm = 0.0;
    double mse_g_norm = 0.0;
    double ratio_s_norm = 0.0;   // MSE(rho_1) / MSE(rho_{s,n})
    double ratio_g_norm = 0.0;   // MSE(rho_1) / MSE(rho_{g,n})
    double theory_s_norm = 0.0;  // V_1 / V_{s,n}
    double theory_g_norm = 0.0;  // V_1 / V_{g,n}
};

std::vector<MseRatioRow> run_mse_ratio(double rho, const std::vector<std::uint32_t>& k_grid, std::uint64_t trials,
                                       std::uint64_t seed, unsigned threads = 1);

struct HistogramConfig {
    double rho = 0.0;
    std::uint32_t k = 100;
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 0;
    Estimator estimator = Estimator::SNorm;
    std::uint32_t bins = 60;
    double lo = -1.5;
    double hi = 1.5;
    unsigned threads = 1;
};

/// Counts of raw estimates in equal-width bins over [lo, hi).
struct Histogram {
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;
    std::uint64_t below_range = 0;
    std::uint64_t above_range = 0;
    double frac_above_one = 0.0;
    double frac_below_minus_one = 0.0;
    double mean = 0.0;
    std::uint64_t trials = 0;
};

Histogram run_histogram(const HistogramConfig& cfg);

/// Default k grid for MSE curves.
std::vector<std::uint32_t> default_k_grid();

}  // namespace signfull
