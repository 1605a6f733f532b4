#include "signfull/errors.hpp"
#include "signfull/simlab.hpp"
#include "signfull/variance.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace signfull;

TEST(SamplePair, CorrelationAndDeterminism) {
    EXPECT_EQ(sample_pair(0.3, 1, 2, 3), sample_pair(0.3, 1, 2, 3));
    EXPECT_NE(sample_pair(0.3, 1, 2, 3), sample_pair(0.3, 1, 2, 4));
    const auto [x, y] = sample_pair(1.0, 5, 0, 0);
    EXPECT_EQ(x, y);
    const auto [a, b] = sample_pair(-1.0, 5, 0, 0);
    EXPECT_EQ(a, -b);
    const std::size_t n = 200'000;
    double sxy = 0;
    for (std::uint32_t j = 0; j < n; ++j) {
        const auto [u, v] = sample_pair(0.6, 9, 0, j);
        sxy += u * v;
    }
    EXPECT_NEAR(sxy / n, 0.6, 4 * std::sqrt(1.36 / n));
}

TEST(RunMse, DecompositionAndDeterminism) {
    SimConfig cfg;
    cfg.rho = 0.7;
    cfg.k = 30;
    cfg.trials = 3000;
    cfg.seed = 12;
    cfg.estimators.assign(kAllEstimators.begin(), kAllEstimators.end());
    const auto a = run_mse(cfg);
    cfg.threads = 3;
    const auto b = run_mse(cfg);
    ASSERT_EQ(a.size(), kAllEstimators.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].estimator, kAllEstimators[i]);
        EXPECT_EQ(a[i].bias, b[i].bias);
        EXPECT_EQ(a[i].variance, b[i].variance);
        EXPECT_EQ(a[i].mse, b[i].mse);
        EXPECT_NEAR(a[i].mse, a[i].bias * a[i].bias + a[i].variance, 1e-12 * a[i].mse);
        EXPECT_GE(a[i].clamp_rate, 0.0);
        EXPECT_LE(a[i].clamp_rate, 1.0);
    }
}

TEST(RunMse, DegenerateRhoOne) {
    SimConfig cfg;
    cfg.rho = 1.0;
    cfg.k = 10;
    cfg.trials = 100;
    cfg.seed = 7;
    cfg.estimators = {Estimator::SNorm, Estimator::SignSign, Estimator::FullNorm, Estimator::S};
    for (const auto& r : run_mse(cfg)) EXPECT_EQ(r.mse, 0.0) << estimator_name(r.estimator);
}

TEST(RunMse, Errors) {
    SimConfig cfg;
    cfg.estimators = {Estimator::G};
    cfg.rho = 1.2;
    EXPECT_THROW(run_mse(cfg), ConfigError);
    cfg.rho = 0.0;
    cfg.k = 0;
    EXPECT_THROW(run_mse(cfg), ConfigError);
}

TEST(RunMse, VarianceMatchesTheory) {
    SimConfig cfg;
    cfg.k = 200;
    cfg.trials = 20'000;
    cfg.seed = 31;
    cfg.estimators = {Estimator::G, Estimator::S, Estimator::Full};
    for (double rho : {0.99, 0.75, 0.0, -0.95}) {
        cfg.rho = rho;
        for (const auto& r : run_mse(cfg)) {
            const double v = v_factor(r.estimator, rho).value;
            // Unbiased estimators: bias within 4 standard errors.
            EXPECT_LE(std::abs(r.bias), 4 * std::sqrt(v / cfg.k / cfg.trials)) << estimator_name(r.estimator);
            EXPECT_NEAR(r.variance * cfg.k / v, 1.0, 0.06) << estimator_name(r.estimator) << " rho=" << rho;
        }
    }
}

TEST(RunMse, NormalizedBiasIsSmall) {
    SimConfig cfg;
    cfg.k = 1000;
    cfg.trials = 20'000;
    cfg.seed = 32;
    cfg.estimators = {Estimator::GNorm, Estimator::SNorm, Estimator::FullNorm};
    for (double rho : {0.95, 0.5, 0.0}) {
        cfg.rho = rho;
        for (const auto& r : run_mse(cfg)) {
            const double v = std::max(v_factor(r.estimator, rho).value, 1e-3);
            EXPECT_LE(std::abs(r.bias), 10 * v / cfg.k + 4 * std::sqrt(r.variance / cfg.trials))
                << estimator_name(r.estimator);
        }
    }
}

TEST(MseRatio, Shape) {
    const auto rows = run_mse_ratio(0.99, {10, 100}, 2000, 3);
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) {
        EXPECT_NEAR(r.ratio_s_norm, r.mse_sign_sign / r.mse_s_norm, 1e-15 * r.ratio_s_norm);
        EXPECT_NEAR(r.theory_s_norm,
                    v_factor(Estimator::SignSign, 0.99).value / v_factor(Estimator::SNorm, 0.99).value, 1e-12);
    }
    EXPECT_THROW(run_mse_ratio(0.99, {1}, 10, 3), ConfigError);
}

TEST(Histogram, SNeverExceedsOne) {
    HistogramConfig cfg;
    cfg.rho = 0.95;
    cfg.k = 10;
    cfg.trials = 20'000;
    cfg.seed = 3;
    cfg.estimator = Estimator::S;
    const auto h = run_histogram(cfg);
    EXPECT_EQ(h.frac_above_one, 0.0);
    std::uint64_t total = h.below_range + h.above_range;
    for (auto c : h.counts) total += c;
    EXPECT_EQ(total, cfg.trials);
    ASSERT_EQ(h.edges.size(), cfg.bins + 1);
    EXPECT_EQ(h.edges.front(), cfg.lo);
    EXPECT_EQ(h.edges.back(), cfg.hi);
}

TEST(Histogram, GExceedsOne) {
    HistogramConfig cfg;
    cfg.rho = 0.95;
    cfg.k = 100;
    cfg.trials = 100'000;
    cfg.seed = 4;
    cfg.estimator = Estimator::G;
    EXPECT_GT(run_histogram(cfg).frac_above_one, 0.0);
}

TEST(Histogram, SNormMean) {
    HistogramConfig cfg;
    cfg.rho = 0.95;
    cfg.k = 1000;
    cfg.trials = 20'000;
    cfg.seed = 5;
    cfg.estimator = Estimator::SNorm;
    EXPECT_NEAR(run_histogram(cfg).mean, 0.95, 0.002);
}

TEST(Histogram, Errors) {
    HistogramConfig cfg;
    cfg.bins = 1;
    EXPECT_THROW(run_histogram(cfg), ConfigError);
}
