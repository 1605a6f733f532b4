#pragma once

#include "signfull/projector.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace signfull {

enum class Estimator {
    SignSign,     // rho_1, both sides signs
    Full,         // rho_f
    FullNorm,     // rho_{f,n}
    G,            // rho_g
    GNorm,        // rho_{g,n}
    S,            // rho_s
    SNorm,        // rho_{s,n}
    MleSignFull,  // rho_m
    MleFull,      // rho_{f,m}
};

inline constexpr std::array<Estimator, 9> kAllEstimators{
    Estimator::SignSign, Estimator::Full,  Estimator::FullNorm,    Estimator::G,      Estimator::GNorm,
    Estimator::S,        Estimator::SNorm, Estimator::MleSignFull, Estimator::MleFull};

/// CLI name: sign-sign, full, full-norm, g, g-norm, s, s-norm, mle, mle-full.
std::string_view estimator_name(Estimator e) noexcept;
std::optional<Estimator> parse_estimator(std::string_view name) noexcept;

/// True for estimators that need the full-precision values on both sides.
bool needs_full_store(Estimator e) noexcept;

struct EstimateReport {
    double rho_hat = 0.0;
    Estimator estimator = Estimator::SignSign;
    std::size_t k = 0;
    bool clamped = false;
    // Formula value before clamping to [-1, 1].
    double raw = 0.0;
};

/// Stored signs sgn(x_j) paired with a full-precision query y_j.
class SignFullPair {
public:
    SignFullPair(const SignSketch& signs, const FullSketch& query);

    const SignSketch& signs() const noexcept { return *signs_; }
    const FullSketch& query() const noexcept { return *query_; }
    std::size_t k() const noexcept { return query_->k(); }

    /// s_j = sgn(x_j) * y_j with sgn(0) = +1.
    double signed_value(std::size_t j) const noexcept {
        const double y = query_->values()[j];
        return signs_->bit(j) ? y : -y;
    }

private:
    const SignSketch* signs_;
    const FullSketch* query_;
};

/// Sufficient statistics of one sketch pair. Every closed-form estimator is a
/// function of these, so the sketch API and the simulator share one formula.
struct PairSums {
    std::size_t k = 0;
    std::size_t matches = 0;   // #{j : sgn(x_j) = sgn(y_j)}
    double sum_xy = 0.0;
    double sum_xx = 0.0;
    double sum_yy = 0.0;
    double signed_sum = 0.0;   // sum sgn(x_j) y_j
    double mismatch_sum = 0.0; // sum y_{j-} 1{x_j >= 0} + y_{j+} 1{x_j < 0}

    /// Accumulate one coordinate given the full pair.
    void add(double x, double y) noexcept {
        add_sign_full(x >= 0.0, y);
        matches += (x >= 0.0) == (y >= 0.0);
        sum_xy += x * y;
        sum_xx += x * x;
    }

    /// Accumulate one coordinate given only sgn(x) and y.
    void add_sign_full(bool x_nonneg, double y) noexcept {
        const double s = x_nonneg ? y : -y;
        ++k;
        signed_sum += s;
        // The mismatch term is the negative part of s.
        mismatch_sum += s < 0.0 ? -s : 0.0;
        sum_yy += y * y;
    }
};

/// Closed-form estimate from sufficient statistics. MLE estimators are not
/// closed form and raise ContractError here.
EstimateReport estimate_from_sums(Estimator e, const PairSums& sums);

EstimateReport estimate_sign_sign(const SignSketch& a, const SignSketch& b);
EstimateReport estimate_full(const FullSketch& x, const FullSketch& y);
EstimateReport estimate_full_norm(const FullSketch& x, const FullSketch& y);
EstimateReport estimate_g(const SignFullPair& p);
EstimateReport estimate_g_norm(const SignFullPair& p);
EstimateReport estimate_s(const SignFullPair& p);
EstimateReport estimate_s_norm(const SignFullPair& p);

/// Any estimator usable against a stored sign sketch (sign-sign quantizes the query).
EstimateReport estimate_sign_store(Estimator e, const SignSketch& stored, const FullSketch& query);

/// Element i equals estimate_sign_store(e, signs[i], query). Errors carry the index.
std::vector<EstimateReport> estimate_batch(std::span<const SignSketch> signs, const FullSketch& query,
                                           Estimator e, unsigned threads = 1);

}  // namespace signfull
