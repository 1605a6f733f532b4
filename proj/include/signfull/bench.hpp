#pragma once

#include "signfull/corevec.hpp"
#include "signfull/estimators.hpp"
#include "signfull/projector.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace signfull {

struct BenchConfig {
    std::vector<std::uint32_t> k_grid{100};
    std::uint64_t seed = 0;
    std::vector<double> rho0_grid{0.9};
    std::vector<Estimator> estimators{Estimator::SignSign, Estimator::GNorm, Estimator::SNorm};
    // Empty means the full sweep L = 1 .. train size.
    std::vector<std::size_t> l_grid;
    unsigned threads = 1;
};

/// relevance[q] holds, in increasing order, the training indices whose exact
/// cosine with query q is at least rho0.
using RelevanceSets = std::vector<std::vector<std::uint32_t>>;
RelevanceSets ground_truth(const Corpus& train, const Corpus& queries, double rho0, unsigned threads = 1);

/// ranking[q] lists every training index by descending estimate; ties go to
/// the lower index.
using Rankings = std::vector<std::vector<std::uint32_t>>;
Rankings rank_queries(std::span<const SignSketch> store, std::span<const FullSketch> queries, Estimator e,
                      unsigned threads = 1);

struct PrPoint {
    std::size_t L = 0;
    double precision = 0.0;
    double recall = 0.0;
};

/// Precision/recall averaged over queries with a nonempty relevance set.
struct PrCurve {
    std::vector<PrPoint> points;
    std::size_t included_queries = 0;
    std::size_t excluded_queries = 0;
};

PrCurve pr_curve(const Rankings& ranked, const RelevanceSets& relevance, std::span<const std::size_t> l_grid = {});

/// Interpolated precision: the best precision at any L whose recall reaches `recall`.
double interpolated_precision(const PrCurve& curve, double recall);

struct BenchCurve {
    Estimator estimator = Estimator::SNorm;
    double rho0 = 0.0;
    std::uint32_t k = 0;
    PrCurve curve;
};

/// Training side is kept as signs, queries at full precision, both projected
/// with the same seed. One curve per (rho0, k, estimator).
std::vector<BenchCurve> run_benchmark(const Corpus& train, const Corpus& queries, const BenchConfig& cfg);
std::vector<BenchCurve> run_benchmark(const std::filesystem::path& train_path, const std::filesystem::path& query_path,
                                      const BenchConfig& cfg, std::optional<std::size_t> dim = std::nullopt);

/// CSV with columns estimator,rho0,k,L,precision,recall.
void write_curves_csv(std::ostream& out, const std::vector<BenchCurve>& curves);

/// Planted-cluster corpus: cluster centers uniform on the unit sphere; each
/// point has cosine drawn uniformly from [cos_lo, cos_hi] with its center and
/// a random orthogonal remainder.
struct PlantedConfig {
    std::size_t n_train = 1000;
    std::size_t n_query = 100;
    std::size_t dim = 512;
    std::size_t clusters = 20;
    double cos_lo = 0.8;
    double cos_hi = 0.995;
    std::uint64_t seed = 0;
};

struct PlantedCorpus {
    Corpus train;
    Corpus query;
};

PlantedCorpus make_planted_corpus(const PlantedConfig& cfg);

}  // namespace signfull
