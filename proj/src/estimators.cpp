#include "signfull/estimators.hpp"

#include "signfull/errors.hpp"
#include "signfull/mle.hpp"
#include "signfull/normal.hpp"
#include "signfull/parallel.hpp"

#include <cmath>
#include <string>

namespace signfull {

namespace {

constexpr std::array<std::string_view, 9> kNames{"sign-sign", "full", "full-norm", "g",       "g-norm",
                                                 "s",         "s-norm", "mle",      "mle-full"};

EstimateReport finish(Estimator e, std::size_t k, double raw) {
    EstimateReport r{raw, e, k, false, raw};
    if (raw > 1.0) {
        r.rho_hat = 1.0;
        r.clamped = true;
    } else if (raw < -1.0) {
        r.rho_hat = -1.0;
        r.clamped = true;
    }
    return r;
}

void require_same_k(std::size_t a, std::size_t b) {
    if (a != b) throw ShapeError("sketch lengths differ: " + std::to_string(a) + " vs " + std::to_string(b));
}

PairSums full_sums(const FullSketch& x, const FullSketch& y) {
    require_same_k(x.k(), y.k());
    PairSums sums;
    const auto xv = x.values();
    const auto yv = y.values();
    for (std::size_t j = 0; j < xv.size(); ++j) sums.add(xv[j], yv[j]);
    return sums;
}

PairSums sign_full_sums(const SignFullPair& p) {
    PairSums sums;
    const auto yv = p.query().values();
    for (std::size_t j = 0; j < yv.size(); ++j) sums.add_sign_full(p.signs().bit(j), yv[j]);
    return sums;
}

[[noreturn]] void rethrow_with_index(std::size_t index) {
    const std::string prefix = "item " + std::to_string(index) + ": ";
    try {
        throw;
    } catch (const DomainError& e) {
        throw DomainError(prefix + e.what());
    } catch (const ShapeError& e) {
        throw ShapeError(prefix + e.what());
    } catch (const DegenerateInputError& e) {
        throw DegenerateInputError(prefix + e.what());
    } catch (const ContractError& e) {
        throw ContractError(prefix + e.what());
    }
}

}  // namespace

std::string_view estimator_name(Estimator e) noexcept { return kNames[static_cast<std::size_t>(e)]; }

std::optional<Estimator> parse_estimator(std::string_view name) noexcept {
    for (std::size_t n = 0; n < kNames.size(); ++n) {
        if (kNames[n] == name) return static_cast<Estimator>(n);
    }
    return std::nullopt;
}

bool needs_full_store(Estimator e) noexcept {
    return e == Estimator::Full || e == Estimator::FullNorm || e == Estimator::MleFull;
}

SignFullPair::SignFullPair(const SignSketch& signs, const FullSketch& query) : signs_(&signs), query_(&query) {
    require_same_k(signs.k(), query.k());
}

EstimateReport estimate_from_sums(Estimator e, const PairSums& s) {
    if (e == Estimator::MleSignFull || e == Estimator::MleFull) {
        throw ContractError(std::string(estimator_name(e)) + " has no closed form; use the mle module");
    }
    if (s.k == 0) throw DomainError("estimators need k >= 1");
    const double k = static_cast<double>(s.k);
    switch (e) {
        case Estimator::SignSign:
            return finish(e, s.k, std::cos(kPi * (1.0 - static_cast<double>(s.matches) / k)));
        case Estimator::Full:
            return finish(e, s.k, s.sum_xy / k);
        case Estimator::FullNorm:
            if (s.sum_xx <= 0.0 || s.sum_yy <= 0.0) throw DomainError("full-norm needs nonzero sketches");
            return finish(e, s.k, s.sum_xy / std::sqrt(s.sum_xx * s.sum_yy));
        case Estimator::G:
            return finish(e, s.k, kSqrtHalfPi * s.signed_sum / k);
        case Estimator::GNorm:
            if (s.sum_yy <= 0.0) throw DomainError("g-norm needs a nonzero query sketch");
            return finish(e, s.k, kSqrtHalfPi * s.signed_sum / std::sqrt(k * s.sum_yy));
        case Estimator::S:
            return finish(e, s.k, 1.0 - kSqrt2Pi * s.mismatch_sum / k);
        case Estimator::SNorm:
            if (s.sum_yy <= 0.0) throw DomainError("s-norm needs a nonzero query sketch");
            return finish(e, s.k, 1.0 - kSqrt2Pi * s.mismatch_sum / std::sqrt(k * s.sum_yy));
        case Estimator::MleSignFull:
        case Estimator::MleFull:
            break;
    }
    throw ContractError("unknown estimator");
}

EstimateReport estimate_sign_sign(const SignSketch& a, const SignSketch& b) {
    require_same_k(a.k(), b.k());
    PairSums sums;
    sums.k = a.k();
    sums.matches = matching_bits(a, b);
    return estimate_from_sums(Estimator::SignSign, sums);
}

EstimateReport estimate_full(const FullSketch& x, const FullSketch& y) {
    return estimate_from_sums(Estimator::Full, full_sums(x, y));
}

EstimateReport estimate_full_norm(const FullSketch& x, const FullSketch& y) {
    return estimate_from_sums(Estimator::FullNorm, full_sums(x, y));
}

EstimateReport estimate_g(const SignFullPair& p) { return estimate_from_sums(Estimator::G, sign_full_sums(p)); }

EstimateReport estimate_g_norm(const SignFullPair& p) {
    return estimate_from_sums(Estimator::GNorm, sign_full_sums(p));
}

EstimateReport estimate_s(const SignFullPair& p) { return estimate_from_sums(Estimator::S, sign_full_sums(p)); }

EstimateReport estimate_s_norm(const SignFullPair& p) {
    return estimate_from_sums(Estimator::SNorm, sign_full_sums(p));
}

EstimateReport estimate_sign_store(Estimator e, const SignSketch& stored, const FullSketch& query) {
    if (needs_full_store(e)) {
        throw ContractError(std::string(estimator_name(e)) + " needs full-precision values on both sides");
    }
    if (e == Estimator::SignSign) return estimate_sign_sign(stored, sign_quantize(query));
    const SignFullPair pair(stored, query);
    if (e == Estimator::MleSignFull) return to_report(mle_sign_full(pair), e, pair.k());
    return estimate_from_sums(e, sign_full_sums(pair));
}

std::vector<EstimateReport> estimate_batch(std::span<const SignSketch> signs, const FullSketch& query, Estimator e,
                                           unsigned threads) {
    if (needs_full_store(e)) {
        throw ContractError(std::string(estimator_name(e)) + " needs full-precision values on both sides");
    }
    for (std::size_t n = 0; n < signs.size(); ++n) {
        if (signs[n].k() != query.k()) {
            throw ShapeError("item " + std::to_string(n) + ": sketch lengths differ: " +
                             std::to_string(signs[n].k()) + " vs " + std::to_string(query.k()));
        }
    }
    std::vector<EstimateReport> out(signs.size());
    constexpr std::size_t kChunk = 256;
    const std::size_t chunks = (signs.size() + kChunk - 1) / kChunk;
    const SignSketch query_signs = e == Estimator::SignSign ? sign_quantize(query) : SignSketch{};
    parallel_for_chunks(chunks, threads, [&](std::size_t c) {
        const std::size_t end = std::min(signs.size(), (c + 1) * kChunk);
        for (std::size_t n = c * kChunk; n < end; ++n) {
            try {
                out[n] = e == Estimator::SignSign ? estimate_sign_sign(signs[n], query_signs)
                                                  : estimate_sign_store(e, signs[n], query);
            } catch (const Error&) {
                rethrow_with_index(n);
            }
        }
    });
    return out;
}

}  // namespace signfull
