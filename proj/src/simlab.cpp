#include "signfull/simlab.hpp"

#include "signfull/errors.hpp"
#include "signfull/parallel.hpp"
#include "signfull/rng.hpp"
#include "signfull/variance.hpp"

#include <algorithm>
#include <cmath>

namespace signfull {

namespace {

struct RawEstimates {
    // values[e][trial]
    std::vector<std::vector<double>> values;
};

RawEstimates simulate(double rho, std::uint32_t k, std::uint64_t trials, std::uint64_t seed,
                      const std::vector<Estimator>& estimators, unsigned threads, const SolverConfig& solver) {
    if (!(std::fabs(rho) <= 1.0)) throw ConfigError("rho must lie in [-1, 1]");
    if (k == 0 || trials == 0) throw ConfigError("k and trials must be at least 1");
    if (estimators.empty()) throw ConfigError("no estimators requested");
    const bool want_mle = std::find(estimators.begin(), estimators.end(), Estimator::MleSignFull) != estimators.end();

    RawEstimates out;
    out.values.assign(estimators.size(), std::vector<double>(trials));
    constexpr std::uint64_t kChunk = 256;
    const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
    parallel_for_chunks(chunks, threads, [&](std::size_t chunk) {
        std::vector<double> s(want_mle ? k : 0);
        const std::uint64_t end = std::min(trials, (chunk + 1) * kChunk);
        for (std::uint64_t t = chunk * kChunk; t < end; ++t) {
            PairSums sums;
            for (std::uint32_t j = 0; j < k; ++j) {
                const auto [x, y] = sample_pair(rho, seed, t, j);
                sums.add(x, y);
                if (want_mle) s[j] = x >= 0.0 ? y : -y;
            }
            for (std::size_t e = 0; e < estimators.size(); ++e) {
                double v;
                switch (estimators[e]) {
                    case Estimator::MleSignFull:
                        v = mle_sign_full(s, solver).rho_hat;
                        break;
                    case Estimator::MleFull:
                        v = mle_full_from_sums(sums.k, sums.sum_xx, sums.sum_yy, sums.sum_xy, solver).rho_hat;
                        break;
                    default:
                        v = estimate_from_sums(estimators[e], sums).raw;
                }
                out.values[e][t] = v;
            }
        }
    });
    return out;
}

}  // namespace

std::pair<double, double> sample_pair(double rho, std::uint64_t seed, std::uint64_t trial, std::uint32_t j) {
    const auto g = rng::normal2(seed, trial, j, rng::Stream::BivariatePair);
    const double x = g[0];
    return {x, rho * x + std::sqrt((1.0 - rho) * (1.0 + rho)) * g[1]};
}

std::vector<MseReport> run_mse(const SimConfig& cfg) {
    const auto raw = simulate(cfg.rho, cfg.k, cfg.trials, cfg.seed, cfg.estimators, cfg.threads, cfg.solver);
    const double n = static_cast<double>(cfg.trials);
    std::vector<MseReport> reports;
    for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
        const auto& v = raw.values[e];
        double sum = 0.0;
        std::uint64_t clamps = 0;
        for (double x : v) {
            sum += x;
            clamps += (x > 1.0 || x < -1.0);
        }
        const double mean = sum / n;
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        MseReport r;
        r.estimator = cfg.estimators[e];
        r.rho = cfg.rho;
        r.k = cfg.k;
        r.bias = mean - cfg.rho;
        r.variance = ss / n;
        r.mse = r.bias * r.bias + r.variance;
        r.clamp_rate = static_cast<double>(clamps) / n;
        reports.push_back(r);
    }
    return reports;
}

std::vector<MseRatioRow> run_mse_ratio(double rho, const std::vector<std::uint32_t>& k_grid, std::uint64_t trials,
                                       std::uint64_t seed, unsigned threads) {
    if (k_grid.empty()) throw ConfigError("empty k grid");
    const double v1 = v_factor(Estimator::SignSign, rho).value;
    const double vsn = v_factor(Estimator::SNorm, rho).value;
    const double vgn = v_factor(Estimator::GNorm, rho).value;
    std::vector<MseRatioRow> rows;
    for (const auto k : k_grid) {
        if (k < 2) throw ConfigError("mse-ratio needs every k >= 2");
        SimConfig cfg;
        cfg.rho = rho;
        cfg.k = k;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.estimators = {Estimator::SignSign, Estimator::SNorm, Estimator::GNorm};
        cfg.threads = threads;
        const auto r = run_mse(cfg);
        MseRatioRow row;
        row.k = k;
        row.mse_sign_sign = r[0].mse;
        row.mse_s_norm = r[1].mse;
        row.mse_g_norm = r[2].mse;
        row.ratio_s_norm = row.mse_sign_sign / row.mse_s_norm;
        row.ratio_g_norm = row.mse_sign_sign / row.mse_g_norm;
        row.theory_s_norm = v1 / vsn;
        row.theory_g_norm = v1 / vgn;
        rows.push_back(row);
    }
    return rows;
}

Histogram run_histogram(const HistogramConfig& cfg) {
    if (cfg.bins < 2) throw ConfigError("histogram needs at least 2 bins");
    if (!(cfg.hi > cfg.lo)) throw ConfigError("histogram range is empty");
    const auto raw = simulate(cfg.rho, cfg.k, cfg.trials, cfg.seed, {cfg.estimator}, cfg.threads, SolverConfig{});
    Histogram h;
    h.trials = cfg.trials;
    h.counts.assign(cfg.bins, 0);
    const double width = (cfg.hi - cfg.lo) / cfg.bins;
    for (std::uint32_t b = 0; b <= cfg.bins; ++b) h.edges.push_back(cfg.lo + b * width);
    std::uint64_t above_one = 0, below_minus_one = 0;
    double sum = 0.0;
    for (double x : raw.values[0]) {
        sum += x;
        above_one += x > 1.0;
        below_minus_one += x < -1.0;
        if (x < cfg.lo) {
            ++h.below_range;
        } else if (x >= cfg.hi) {
            ++h.above_range;
        } else {
            const auto b = std::min<std::uint64_t>(cfg.bins - 1, static_cast<std::uint64_t>((x - cfg.lo) / width));
            ++h.counts[b];
        }
    }
    const double n = static_cast<double>(cfg.trials);
    h.frac_above_one = static_cast<double>(above_one) / n;
    h.frac_below_minus_one = static_cast<double>(below_minus_one) / n;
    h.mean = sum / n;
    return h;
}

std::vector<std::uint32_t> default_k_grid() { return {10, 20, 50, 100, 200, 500, 1000}; }

}  // namespace signfull
