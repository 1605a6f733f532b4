#include "signfull/bench.hpp"

#include "signfull/errors.hpp"
#include "signfull/parallel.hpp"
#include "signfull/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <numeric>
#include <ostream>

namespace signfull {

RelevanceSets ground_truth(const Corpus& train, const Corpus& queries, double rho0, unsigned threads) {
    if (train.size() == 0 || queries.size() == 0) throw ConfigError("ground truth needs nonempty corpora");
    if (train.dim != queries.dim) throw ShapeError("training and query corpora differ in dim");
    RelevanceSets out(queries.size());
    parallel_for_chunks(queries.size(), threads, [&](std::size_t q) {
        for (std::size_t n = 0; n < train.size(); ++n) {
            if (cosine(queries.vectors[q], train.vectors[n]) >= rho0) out[q].push_back(static_cast<std::uint32_t>(n));
        }
    });
    return out;
}

Rankings rank_queries(std::span<const SignSketch> store, std::span<const FullSketch> queries, Estimator e,
                      unsigned threads) {
    if (needs_full_store(e)) {
        throw ContractError(std::string(estimator_name(e)) + " cannot rank against a store of signs");
    }
    Rankings out(queries.size());
    parallel_for_chunks(queries.size(), threads, [&](std::size_t q) {
        const auto reports = estimate_batch(store, queries[q], e, 1);
        auto& order = out[q];
        order.resize(store.size());
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (reports[a].rho_hat != reports[b].rho_hat) return reports[a].rho_hat > reports[b].rho_hat;
            return a < b;
        });
    });
    return out;
}

PrCurve pr_curve(const Rankings& ranked, const RelevanceSets& relevance, std::span<const std::size_t> l_grid) {
    if (ranked.size() != relevance.size()) throw ShapeError("rankings and relevance sets differ in query count");
    PrCurve curve;
    if (ranked.empty()) return curve;
    const std::size_t n = ranked.front().size();
    std::vector<std::size_t> grid(l_grid.begin(), l_grid.end());
    if (grid.empty()) {
        grid.resize(n);
        std::iota(grid.begin(), grid.end(), std::size_t{1});
    }
    for (std::size_t L : grid) {
        if (L == 0 || L > n) throw ConfigError("L values must lie in [1, corpus size]");
    }
    std::vector<double> precision_sum(grid.size(), 0.0), recall_sum(grid.size(), 0.0);
    std::vector<char> relevant(n);
    std::vector<std::size_t> hits(n + 1);
    for (std::size_t q = 0; q < ranked.size(); ++q) {
        if (ranked[q].size() != n) throw ShapeError("rankings differ in length");
        if (relevance[q].empty()) {
            ++curve.excluded_queries;
            continue;
        }
        ++curve.included_queries;
        std::fill(relevant.begin(), relevant.end(), 0);
        for (auto idx : relevance[q]) relevant.at(idx) = 1;
        hits[0] = 0;
        for (std::size_t r = 0; r < n; ++r) hits[r + 1] = hits[r] + static_cast<std::size_t>(relevant[ranked[q][r]]);
        const double total = static_cast<double>(relevance[q].size());
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double h = static_cast<double>(hits[grid[g]]);
            precision_sum[g] += h / static_cast<double>(grid[g]);
            recall_sum[g] += h / total;
        }
    }
    if (curve.included_queries == 0) return curve;
    const double m = static_cast<double>(curve.included_queries);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        curve.points.push_back({grid[g], precision_sum[g] / m, recall_sum[g] / m});
    }
    return curve;
}

double interpolated_precision(const PrCurve& curve, double recall) {
    double best = 0.0;
    for (const auto& p : curve.points) {
        if (p.recall >= recall) best = std::max(best, p.precision);
    }
    return best;
}

std::vector<BenchCurve> run_benchmark(const Corpus& train, const Corpus& queries, const BenchConfig& cfg) {
    if (cfg.k_grid.empty() || cfg.rho0_grid.empty() || cfg.estimators.empty()) {
        throw ConfigError("benchmark grids must be nonempty");
    }
    for (double r : cfg.rho0_grid) {
        if (!(r > 0.0 && r <= 1.0)) throw ConfigError("rho0 must lie in (0, 1]");
    }
    for (auto e : cfg.estimators) {
        if (needs_full_store(e)) {
            throw ContractError(std::string(estimator_name(e)) + " cannot rank against a store of signs");
        }
    }
    if (train.dim != queries.dim) throw ShapeError("training and query corpora differ in dim");
    const std::uint32_t k_max = *std::max_element(cfg.k_grid.begin(), cfg.k_grid.end());
    if (*std::min_element(cfg.k_grid.begin(), cfg.k_grid.end()) == 0) throw ConfigError("k must be at least 1");

    const ProjectionConfig proj{k_max, cfg.seed};
    const auto train_full = project_corpus(train, proj, cfg.threads);
    const auto query_full = project_corpus(queries, proj, cfg.threads);

    std::vector<RelevanceSets> relevance;
    for (double rho0 : cfg.rho0_grid) relevance.push_back(ground_truth(train, queries, rho0, cfg.threads));

    // rankings[k][estimator] do not depend on rho0.
    std::vector<std::vector<Rankings>> rankings(cfg.k_grid.size());
    for (std::size_t ki = 0; ki < cfg.k_grid.size(); ++ki) {
        const std::uint32_t k = cfg.k_grid[ki];
        std::vector<SignSketch> store;
        store.reserve(train_full.size());
        for (const auto& s : train_full) store.push_back(sign_quantize(s.values().first(k)));
        std::vector<FullSketch> qs;
        qs.reserve(query_full.size());
        for (const auto& s : query_full) qs.push_back(k == k_max ? s : s.prefix(k));
        for (auto e : cfg.estimators) rankings[ki].push_back(rank_queries(store, qs, e, cfg.threads));
    }

    std::vector<BenchCurve> curves;
    for (std::size_t ri = 0; ri < cfg.rho0_grid.size(); ++ri) {
        for (std::size_t ki = 0; ki < cfg.k_grid.size(); ++ki) {
            for (std::size_t ei = 0; ei < cfg.estimators.size(); ++ei) {
                curves.push_back({cfg.estimators[ei], cfg.rho0_grid[ri], cfg.k_grid[ki],
                                  pr_curve(rankings[ki][ei], relevance[ri], cfg.l_grid)});
            }
        }
    }
    return curves;
}

std::vector<BenchCurve> run_benchmark(const std::filesystem::path& train_path, const std::filesystem::path& query_path,
                                      const BenchConfig& cfg, std::optional<std::size_t> dim) {
    Corpus train = load_sparse_text(train_path, dim);
    Corpus queries = load_sparse_text(query_path, dim);
    if (!dim) {
        // Inferred dimensionalities may differ; widen both to the larger.
        const std::size_t d = std::max(train.dim, queries.dim);
        if (train.dim != d) train = load_sparse_text(train_path, d);
        if (queries.dim != d) queries = load_sparse_text(query_path, d);
    }
    return run_benchmark(train, queries, cfg);
}

void write_curves_csv(std::ostream& out, const std::vector<BenchCurve>& curves) {
    out << "estimator,rho0,k,L,precision,recall\n";
    auto num = [](double v) {
        char buf[32];
        return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
    };
    for (const auto& c : curves) {
        const std::string head =
            std::string(estimator_name(c.estimator)) + ',' + num(c.rho0) + ',' + std::to_string(c.k) + ',';
        for (const auto& p : c.curve.points) {
            out << head << p.L << ',' << num(p.precision) << ',' << num(p.recall) << '\n';
        }
    }
}

namespace {

double synth_normal(std::uint64_t seed, std::uint64_t object, std::uint32_t coord) {
    return rng::normal2(seed, object, coord >> 1, rng::Stream::Synthetic)[coord & 1u];
}

std::vector<double> unit_gaussian(std::uint64_t seed, std::uint64_t object, std::size_t dim) {
    std::vector<double> v(dim);
    double n2 = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        v[d] = synth_normal(seed, object, static_cast<std::uint32_t>(d));
        n2 += v[d] * v[d];
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& x : v) x *= inv;
    return v;
}

}  // namespace

PlantedCorpus make_planted_corpus(const PlantedConfig& cfg) {
    if (cfg.dim < 2 || cfg.clusters == 0 || cfg.n_train == 0 || cfg.n_query == 0) {
        throw ConfigError("planted corpus needs dim >= 2 and nonempty sets");
    }
    if (!(cfg.cos_lo >= 0.0 && cfg.cos_lo <= cfg.cos_hi && cfg.cos_hi <= 1.0)) {
        throw ConfigError("cosine band must satisfy 0 <= lo <= hi <= 1");
    }
    std::vector<std::vector<double>> centers;
    for (std::size_t c = 0; c < cfg.clusters; ++c) centers.push_back(unit_gaussian(cfg.seed, c, cfg.dim));

    auto member = [&](std::uint64_t object) {
        const auto bits = rng::bits128(cfg.seed, object, 0xFFFF'FFFFu, rng::Stream::Synthetic);
        const auto& center = centers[bits[0] % cfg.clusters];
        const double target = cfg.cos_lo + (cfg.cos_hi - cfg.cos_lo) * rng::uniform_open(bits[1]);
        auto w = unit_gaussian(cfg.seed, object, cfg.dim);
        const double along = std::inner_product(w.begin(), w.end(), center.begin(), 0.0);
        double n2 = 0.0;
        for (std::size_t d = 0; d < cfg.dim; ++d) {
            w[d] -= along * center[d];
            n2 += w[d] * w[d];
        }
        const double scale = std::sqrt((1.0 - target) * (1.0 + target) / n2);
        std::vector<double> v(cfg.dim);
        for (std::size_t d = 0; d < cfg.dim; ++d) v[d] = target * center[d] + scale * w[d];
        return normalize(DataVector::from_dense(v));
    };

    PlantedCorpus out;
    out.train.dim = out.query.dim = cfg.dim;
    const std::uint64_t base = cfg.clusters;
    for (std::size_t n = 0; n < cfg.n_train; ++n) out.train.vectors.push_back(member(base + n));
    for (std::size_t n = 0; n < cfg.n_query; ++n) out.query.vectors.push_back(member(base + cfg.n_train + n));
    return out;
}

}  // namespace signfull
