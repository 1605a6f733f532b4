#include "signfull/variance.hpp"

#include "signfull/errors.hpp"
#include "signfull/normal.hpp"
#include "signfull/parallel.hpp"
#include "signfull/rng.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace signfull {

namespace {

void require_rho(double rho) {
    if (!(std::fabs(rho) <= 1.0)) throw DomainError("rho must lie in [-1, 1]");
}

double one_minus_sq(double rho) { return (1.0 - rho) * (1.0 + rho); }

double v_sign_sign(double rho) {
    const double theta = std::acos(rho);
    return theta * (kPi - theta) * one_minus_sq(rho);
}

double v_s(double rho) { return 2.0 * arc_minus_chord(rho) - (1.0 - rho) * (1.0 - rho); }

}  // namespace

double arc_minus_chord(double rho) {
    require_rho(rho);
    if (rho > 0.9) {
        // theta - sin(2 theta) / 2 = (u - sin u) / 2 with u = 2 theta.
        const double u = 4.0 * std::asin(std::sqrt(0.5 * (1.0 - rho)));
        const double u2 = u * u;
        double term = u * u2 / 6.0;
        double sum = 0.0;
        for (int n = 3; term != 0.0 && n < 40; n += 2) {
            sum += term;
            term *= -u2 / ((n + 1.0) * (n + 2.0));
        }
        return 0.5 * sum;
    }
    return std::acos(rho) - rho * std::sqrt(one_minus_sq(rho));
}

VarianceFactor v_factor(Estimator e, double rho) {
    require_rho(rho);
    const double r2 = rho * rho;
    double value = 0.0;
    switch (e) {
        case Estimator::SignSign:
            value = v_sign_sign(rho);
            break;
        case Estimator::Full:
            value = 1.0 + r2;
            break;
        case Estimator::FullNorm:
            value = one_minus_sq(rho) * one_minus_sq(rho);
            break;
        case Estimator::MleFull:
            value = one_minus_sq(rho) * one_minus_sq(rho) / (1.0 + r2);
            break;
        case Estimator::G:
            value = kPi / 2.0 - r2;
            break;
        case Estimator::GNorm:
            value = kPi / 2.0 - r2 - r2 * (1.5 - r2);
            break;
        case Estimator::S:
            value = v_s(rho);
            break;
        case Estimator::SNorm:
            value = v_s(rho) - (1.0 - rho) * (1.0 - rho) * (1.0 - 2.0 * rho - 2.0 * r2) / 2.0;
            break;
        case Estimator::MleSignFull:
            throw ContractError("the sign-full MLE has no closed-form variance; use fisher_vm");
    }
    return VarianceFactor{e, rho, value, std::nullopt};
}

FisherInformation fisher_information(double rho, const FisherConfig& cfg) {
    if (!(std::fabs(rho) <= 0.999)) throw DomainError("fisher_vm needs |rho| <= 0.999");
    if (cfg.samples < 10'000) throw ConfigError("fisher_vm needs at least 10^4 samples");

    const double om = one_minus_sq(rho);
    const double root = std::sqrt(om);
    const double c = rho / root;
    const double w_cubic = rho / (om * om * om * root);        // rho (1-rho^2)^{-7/2}
    const double w_square = 1.0 / (om * om * om);              // (1-rho^2)^{-3}
    const double w_linear = 3.0 * rho / (om * om * root);      // 3 rho (1-rho^2)^{-5/2}

    constexpr std::uint64_t kChunk = 1 << 16;
    const std::uint64_t chunks = (cfg.samples + kChunk - 1) / kChunk;
    std::vector<double> sums(chunks), sumsqs(chunks);
    parallel_for_chunks(chunks, cfg.threads, [&](std::size_t chunk) {
        const std::uint64_t begin = chunk * kChunk;
        const std::uint64_t end = std::min(cfg.samples, begin + kChunk);
        double s1 = 0.0, s2 = 0.0;
        for (std::uint64_t i = begin; i < end; ++i) {
            const auto g = rng::normal2(cfg.seed, i, 0, rng::Stream::Fisher);
            const double x = g[0];
            const double y = rho * x + root * g[1];
            const double s = x >= 0.0 ? y : -y;
            const double lam = inv_mills(c * s);
            const double y2 = y * y;
            const double term = w_cubic * lam * s * y2 + w_square * lam * lam * y2 - w_linear * lam * s;
            s1 += term;
            s2 += term * term;
        }
        sums[chunk] = s1;
        sumsqs[chunk] = s2;
    });
    double total = 0.0, total_sq = 0.0;
    for (std::uint64_t n = 0; n < chunks; ++n) {
        total += sums[n];
        total_sq += sumsqs[n];
    }
    const double count = static_cast<double>(cfg.samples);
    const double mean = total / count;
    const double var = std::max(0.0, total_sq / count - mean * mean);
    return {mean, std::sqrt(var / count)};
}

VarianceFactor fisher_vm(double rho, const FisherConfig& cfg) {
    const auto info = fisher_information(rho, cfg);
    if (!(info.value > 0.0)) throw DomainError("Monte Carlo Fisher information is not positive");
    const double vm = 1.0 / info.value;
    return VarianceFactor{Estimator::MleSignFull, rho, vm,
                          MonteCarloInfo{cfg.samples, cfg.seed, info.std_error * vm * vm}};
}

GaussianIntegrals half_line_integrals(double rho) {
    require_rho(rho);
    return {(1.0 + rho) / 2.0, (2.0 + 3.0 * rho - rho * rho * rho) / 2.0,
            kSqrtHalfPi - arc_minus_chord(rho) / kSqrt2Pi};
}

VarianceRatioTable variance_ratio_constants() {
    const double v1_zero = v_sign_sign(0.0);
    constexpr double kNearOne = 1.0 - 1e-8;
    const double v1_near = v_sign_sign(kNearOne);
    VarianceRatioTable t;
    // At rho = 0 the sign-full Fisher information is E[lambda(0)^2 y^2] = 2 / pi.
    t.mle_at_zero = (kPi / 2.0) / v1_zero;
    t.g_at_zero = v_factor(Estimator::G, 0.0).value / v1_zero;
    t.g_norm_at_zero = v_factor(Estimator::GNorm, 0.0).value / v1_zero;
    t.s_at_zero = v_factor(Estimator::S, 0.0).value / v1_zero;
    t.s_norm_at_zero = v_factor(Estimator::SNorm, 0.0).value / v1_zero;
    t.s_limit_at_one = v_factor(Estimator::S, kNearOne).value / v1_near;
    t.s_norm_limit_at_one = v_factor(Estimator::SNorm, kNearOne).value / v1_near;
    return t;
}

double v1_asymptotic(double rho) {
    require_rho(rho);
    const double d = 1.0 - std::fabs(rho);
    return 2.0 * std::sqrt(2.0) * kPi * d * std::sqrt(d);
}

SignFullMoments sign_full_moments(double rho) {
    require_rho(rho);
    const double amc = arc_minus_chord(rho);
    SignFullMoments m;
    m.signed_mean = std::sqrt(2.0 / kPi) * rho;
    m.signed_third = (6.0 * rho - 2.0 * rho * rho * rho) / kSqrt2Pi;
    m.match_mean = (1.0 + rho) / kSqrt2Pi;
    m.match_second = 1.0 - amc / kPi;
    m.mismatch_mean = (1.0 - rho) / kSqrt2Pi;
    m.mismatch_second = amc / kPi;
    return m;
}

}  // namespace signfull
