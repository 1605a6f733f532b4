#include "signfull/mle.hpp"

#include "signfull/errors.hpp"
#include "signfull/normal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace signfull {

namespace {

double slope_factor(double rho) { return rho / std::sqrt((1.0 - rho) * (1.0 + rho)); }

struct ScoreEval {
    double value;
    double derivative;
};

// Score and its derivative in rho. d/drho lambda(c s) s = lambda'(c s) s^2 c'
// with lambda'(t) = -lambda(t) (t + lambda(t)) and c' = (1 - rho^2)^{-3/2}.
ScoreEval score_with_derivative(double rho, std::span<const double> s) {
    const double one_minus = (1.0 - rho) * (1.0 + rho);
    const double c = rho / std::sqrt(one_minus);
    const double dc = 1.0 / (one_minus * std::sqrt(one_minus));
    double value = 0.0;
    double slope = 0.0;
    for (double sj : s) {
        const double t = c * sj;
        const double lam = inv_mills(t);
        value += lam * sj;
        slope -= lam * (t + lam) * sj * sj;
    }
    return {value, slope * dc};
}

std::vector<double> signed_values(const SignFullPair& p) {
    std::vector<double> s(p.k());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = p.signed_value(j);
    return s;
}

void validate(const SolverConfig& cfg) {
    if (!(cfg.tolerance > 0.0) || !(cfg.boundary_eps > 0.0) || cfg.boundary_eps >= 1.0 || cfg.max_iter < 1) {
        throw ConfigError("invalid solver configuration");
    }
}

}  // namespace

double mle_score(double rho, std::span<const double> s) {
    if (!(std::fabs(rho) < 1.0)) throw DomainError("score needs |rho| < 1");
    const double c = slope_factor(rho);
    double value = 0.0;
    for (double sj : s) value += inv_mills(c * sj) * sj;
    return value;
}

double mle_score(double rho, const SignFullPair& p) { return mle_score(rho, signed_values(p)); }

double sign_full_loglik(double rho, std::span<const double> s) {
    if (!(std::fabs(rho) < 1.0)) throw DomainError("log-likelihood needs |rho| < 1");
    const double c = slope_factor(rho);
    double l = 0.0;
    for (double sj : s) l += log_norm_cdf(c * sj);
    return l;
}

MleResult mle_sign_full(std::span<const double> s, const SolverConfig& cfg) {
    validate(cfg);
    if (s.empty()) throw DomainError("MLE needs k >= 1");
    double sum = 0.0, sumsq = 0.0;
    for (double v : s) {
        sum += v;
        sumsq += v * v;
    }
    if (sumsq == 0.0) throw DegenerateInputError("all query projections are zero");

    double lo = -1.0 + cfg.boundary_eps;
    double hi = 1.0 - cfg.boundary_eps;
    const double f_lo = mle_score(lo, s);
    const double f_hi = mle_score(hi, s);
    MleResult result;
    if (!(f_lo > 0.0 && f_hi < 0.0)) {
        // No interior sign change from + to -: the likelihood peaks at an end.
        result.at_boundary = true;
        if (f_lo > 0.0) {
            result.rho_hat = hi;
        } else if (f_hi < 0.0) {
            result.rho_hat = lo;
        } else {
            result.rho_hat = sign_full_loglik(hi, s) >= sign_full_loglik(lo, s) ? hi : lo;
        }
        result.score_residual = result.rho_hat == hi ? f_hi : f_lo;
        return result;
    }

    // Safeguarded Newton inside a shrinking bracket [lo, hi] with f(lo) > 0 > f(hi).
    const double k = static_cast<double>(s.size());
    double rho = std::clamp(kSqrtHalfPi * sum / std::sqrt(k * sumsq), lo, hi);
    int it = 0;
    bool converged = false;
    while (it < cfg.max_iter) {
        ++it;
        const auto f = score_with_derivative(rho, s);
        if (f.value == 0.0) {
            converged = true;
            break;
        }
        if (f.value > 0.0) {
            lo = rho;
        } else {
            hi = rho;
        }
        double next = f.derivative < 0.0 ? rho - f.value / f.derivative : lo;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::fabs(next - rho);
        rho = next;
        if (step <= cfg.tolerance || hi - lo <= cfg.tolerance) {
            converged = true;
            break;
        }
    }
    if (converged) {
        // One more Newton step from a converged point drives the residual to rounding level.
        const auto f = score_with_derivative(rho, s);
        if (f.derivative < 0.0) {
            const double polished = rho - f.value / f.derivative;
            if (polished >= lo && polished <= hi && std::fabs(polished - rho) <= cfg.tolerance) rho = polished;
        }
    }
    result.rho_hat = rho;
    result.iterations = it;
    result.score_residual = mle_score(rho, s);
    return result;
}

MleResult mle_sign_full(const SignFullPair& p, const SolverConfig& cfg) {
    return mle_sign_full(signed_values(p), cfg);
}

double full_loglik(double rho, std::size_t k, double sum_xx, double sum_yy, double sum_xy) {
    if (!(std::fabs(rho) < 1.0)) throw DomainError("log-likelihood needs |rho| < 1");
    const double one_minus = (1.0 - rho) * (1.0 + rho);
    return -0.5 * static_cast<double>(k) * std::log(one_minus) -
           (sum_xx - 2.0 * rho * sum_xy + sum_yy) / (2.0 * one_minus);
}

MleResult mle_full_from_sums(std::size_t k, double sum_xx, double sum_yy, double sum_xy, const SolverConfig& cfg) {
    validate(cfg);
    if (k == 0) throw DomainError("MLE needs k >= 1");
    if (!(sum_xx > 0.0) || !(sum_yy > 0.0)) throw DomainError("full MLE needs nonzero sketches");
    const double kd = static_cast<double>(k);
    const double a = sum_xy / kd;
    const double b = (sum_xx + sum_yy) / kd - 1.0;
    auto cubic = [&](double r) { return ((r - a) * r + b) * r - a; };

    // Split [-1, 1] at the critical points; the cubic is monotone on each piece.
    std::vector<double> knots{-1.0};
    const double disc = a * a - 3.0 * b;
    if (disc > 0.0) {
        const double root = std::sqrt(disc);
        for (double cp : {(a - root) / 3.0, (a + root) / 3.0}) {
            if (cp > -1.0 && cp < 1.0) knots.push_back(cp);
        }
    }
    knots.push_back(1.0);

    std::vector<double> roots;
    int iterations = 0;
    for (std::size_t n = 0; n + 1 < knots.size(); ++n) {
        double l = knots[n], r = knots[n + 1];
        double fl = cubic(l), fr = cubic(r);
        if (fl == 0.0) {
            roots.push_back(l);
            continue;
        }
        if (fr == 0.0) {
            roots.push_back(r);
            continue;
        }
        if ((fl < 0.0) == (fr < 0.0)) continue;
        while (r - l > 0.25 * cfg.tolerance && iterations < 64 * cfg.max_iter) {
            const double m = 0.5 * (l + r);
            if (m <= l || m >= r) break;
            ++iterations;
            const double fm = cubic(m);
            if ((fm < 0.0) == (fl < 0.0)) {
                l = m;
                fl = fm;
            } else {
                r = m;
            }
        }
        roots.push_back(0.5 * (l + r));
    }
    // f(-1) <= 0 <= f(1) always, so this only triggers on rounding at the ends.
    if (roots.empty()) roots.push_back(std::fabs(cubic(-1.0)) < std::fabs(cubic(1.0)) ? -1.0 : 1.0);

    const double edge = 1.0 - cfg.boundary_eps;
    double best = roots.front();
    double best_ll = -INFINITY;
    for (double r : roots) {
        const double ll = full_loglik(std::clamp(r, -edge, edge), k, sum_xx, sum_yy, sum_xy);
        if (ll > best_ll) {
            best_ll = ll;
            best = r;
        }
    }
    MleResult result;
    result.rho_hat = best;
    result.at_boundary = std::fabs(best) >= edge;
    result.iterations = iterations;
    result.score_residual = cubic(best);
    return result;
}

MleResult mle_full(const FullSketch& x, const FullSketch& y, const SolverConfig& cfg) {
    if (x.k() != y.k()) throw ShapeError("sketch lengths differ");
    PairSums sums;
    for (std::size_t j = 0; j < x.k(); ++j) sums.add(x.values()[j], y.values()[j]);
    return mle_full_from_sums(sums.k, sums.sum_xx, sums.sum_yy, sums.sum_xy, cfg);
}

EstimateReport to_report(const MleResult& r, Estimator e, std::size_t k) {
    return EstimateReport{r.rho_hat, e, k, false, r.rho_hat};
}

}  // namespace signfull
