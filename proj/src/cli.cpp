#include "signfull/cli.hpp"

#include "signfull/bench.hpp"
#include "signfull/corevec.hpp"
#include "signfull/errors.hpp"
#include "signfull/estimators.hpp"
#include "signfull/mle.hpp"
#include "signfull/parallel.hpp"
#include "signfull/projector.hpp"
#include "signfull/simlab.hpp"
#include "signfull/variance.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace signfull {
namespace {

// Bad flag values detected after CLI11 has parsed the command line.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shortest text that parses back to the same double.
std::string num(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::vector<Estimator> parse_estimators(const std::vector<std::string>& names) {
    std::vector<Estimator> out;
    for (const auto& n : names) {
        auto e = parse_estimator(n);
        if (!e) {
            throw UsageError("unknown estimator '" + n +
                             "' (expected sign-sign, full, full-norm, g, g-norm, s, s-norm, mle, mle-full)");
        }
        out.push_back(*e);
    }
    if (out.empty()) throw UsageError("no estimators given");
    return out;
}

double parse_real(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v)) throw UsageError("invalid " + what + " '" + text + "'");
    return v;
}

// "a:b:step" inclusive of b; "x" alone is a single point.
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() == 1) return {parse_real(parts[0], "grid")};
    if (parts.size() != 3) throw UsageError("grid must be a:b:step, got '" + spec + "'");
    const double a = parse_real(parts[0], "grid start");
    const double b = parse_real(parts[1], "grid end");
    const double step = parse_real(parts[2], "grid step");
    if (!(step > 0.0) || b < a) throw UsageError("grid needs step > 0 and start <= end");
    const double span = (b - a) / step;
    if (span > 1e6) throw UsageError("grid has too many points");
    const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> grid;
    for (std::size_t i = 0; i < n; ++i) {
        // Snap to 12 decimals so 0.1 steps print as 0.3 and not 0.30000000000000004.
        grid.push_back(std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
    return grid;
}

void require_rho(double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw UsageError("rho must lie in [-1, 1]");
}

struct Common {
    std::optional<std::uint64_t> seed;
    unsigned threads = default_threads();
    std::string out_path;
};

void add_common(CLI::App* sub, Common& c, bool with_seed, bool seed_required) {
    if (with_seed) {
        auto* opt = sub->add_option("--seed", c.seed, "Random seed");
        if (seed_required) opt->required();
    }
    sub->add_option("--threads", c.threads, "Worker threads (output does not depend on it)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out_path, "Output file (default: standard output)");
}

// Writes to --out when given, otherwise to the caller's stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw Error("cannot write " + path);
            stream_ = &file_;
        }
    }
    std::ostream& operator*() { return *stream_; }
    void finish() {
        stream_->flush();
        if (!*stream_) throw Error("write failed");
    }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

// sketch -------------------------------------------------------------------

struct SketchArgs {
    Common common;
    std::string input;
    std::uint32_t k = 0;
    std::string kind = "sign";
    std::optional<std::size_t> dim;
};

void cmd_sketch(const SketchArgs& a, std::ostream&, std::ostream& err) {
    if (a.common.out_path.empty()) throw UsageError("sketch needs --out for the binary sketch file");
    const Corpus corpus = load_sparse_text(a.input, a.dim);
    if (corpus.skipped_lines > 0) err << "warning: skipped " << corpus.skipped_lines << " empty line(s)\n";
    const auto full = project_corpus(corpus, {a.k, *a.common.seed}, a.common.threads);
    SketchSet set;
    set.k = a.k;
    if (a.kind == "sign") {
        set.kind = SketchKind::Sign;
        for (const auto& s : full) set.signs.push_back(sign_quantize(s));
    } else {
        set.kind = SketchKind::Full;
        set.full = full;
    }
    save_sketches(a.common.out_path, set);
}

// estimate -----------------------------------------------------------------

struct EstimateArgs {
    Common common;
    std::string store;
    std::string query;
    std::vector<std::string> estimators{"s-norm"};
};

EstimateReport estimate_full_store(Estimator e, const FullSketch& x, const FullSketch& y) {
    switch (e) {
        case Estimator::Full: return estimate_full(x, y);
        case Estimator::FullNorm: return estimate_full_norm(x, y);
        case Estimator::MleFull: return to_report(mle_full(x, y), e, y.k());
        default: return estimate_sign_store(e, sign_quantize(x), y);
    }
}

void cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream&) {
    const auto estimators = parse_estimators(a.estimators);
    const SketchSet store = load_sketches(a.store);
    const SketchSet queries = load_sketches(a.query);
    if (queries.kind != SketchKind::Full) throw FormatError("query sketches must be full precision");
    if (queries.k != store.k) throw ShapeError("store and query sketches differ in k");
    if (store.kind == SketchKind::Sign) {
        for (auto e : estimators) {
            if (needs_full_store(e)) {
                throw ContractError(std::string(estimator_name(e)) + " needs a full-precision store");
            }
        }
    }
    Sink sink(a.common.out_path, out);
    *sink << "query,item,estimator,rho_hat,raw,clamped\n";
    for (std::size_t q = 0; q < queries.size(); ++q) {
        for (auto e : estimators) {
            std::vector<EstimateReport> reports;
            if (store.kind == SketchKind::Sign) {
                reports = estimate_batch(store.signs, queries.full[q], e, a.common.threads);
            } else {
                reports.resize(store.size());
                parallel_for_chunks(store.size(), a.common.threads, [&](std::size_t i) {
                    reports[i] = estimate_full_store(e, store.full[i], queries.full[q]);
                });
            }
            for (std::size_t i = 0; i < reports.size(); ++i) {
                *sink << q << ',' << i << ',' << estimator_name(e) << ',' << num(reports[i].rho_hat) << ','
                      << num(reports[i].raw) << ',' << (reports[i].clamped ? 1 : 0) << '\n';
            }
        }
    }
    sink.finish();
}

// variance-table -----------------------------------------------------------

struct VarianceArgs {
    Common common;
    std::vector<std::string> estimators{"sign-sign", "full", "full-norm", "g", "g-norm", "s", "s-norm", "mle-full"};
    std::string rho_grid = "-1:1:0.05";
    std::uint64_t fisher_samples = 1'000'000;
};

void cmd_variance(const VarianceArgs& a, std::ostream& out, std::ostream&) {
    const auto estimators = parse_estimators(a.estimators);
    const auto grid = parse_grid(a.rho_grid);
    bool wants_mle = false;
    for (auto e : estimators) wants_mle |= e == Estimator::MleSignFull;
    for (double r : grid) {
        require_rho(r);
        if (wants_mle && std::abs(r) > 0.999) throw UsageError("mle variance is available only for |rho| <= 0.999");
    }
    if (wants_mle && !a.common.seed) throw UsageError("--seed is required when the table includes mle");
    if (wants_mle && a.fisher_samples < 10'000) throw UsageError("--fisher-samples must be at least 10000");
    Sink sink(a.common.out_path, out);
    *sink << "rho,estimator,V\n";
    for (double r : grid) {
        for (auto e : estimators) {
            const VarianceFactor v = e == Estimator::MleSignFull
                                         ? fisher_vm(r, {a.fisher_samples, *a.common.seed, a.common.threads})
                                         : v_factor(e, r);
            *sink << num(r) << ',' << estimator_name(e) << ',' << num(v.value) << '\n';
        }
    }
    sink.finish();
}

// simulate / mse-ratio / histogram -----------------------------------------

struct SimulateArgs {
    Common common;
    double rho = 0.0;
    std::uint32_t k = 100;
    std::uint64_t trials = 100'000;
    std::vector<std::string> estimators{"sign-sign", "full", "full-norm", "g", "g-norm",
                                        "s", "s-norm", "mle", "mle-full"};
};

void cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream&) {
    require_rho(a.rho);
    SimConfig cfg;
    cfg.rho = a.rho;
    cfg.k = a.k;
    cfg.trials = a.trials;
    cfg.seed = *a.common.seed;
    cfg.estimators = parse_estimators(a.estimators);
    cfg.threads = a.common.threads;
    const auto reports = run_mse(cfg);
    Sink sink(a.common.out_path, out);
    *sink << "estimator,rho,k,bias,var,mse,clamp_rate\n";
    for (const auto& r : reports) {
        *sink << estimator_name(r.estimator) << ',' << num(r.rho) << ',' << r.k << ',' << num(r.bias) << ','
              << num(r.variance) << ',' << num(r.mse) << ',' << num(r.clamp_rate) << '\n';
    }
    sink.finish();
}

struct RatioArgs {
    Common common;
    double rho = 0.99;
    std::vector<std::uint32_t> k_grid = default_k_grid();
    std::uint64_t trials = 100'000;
};

void cmd_mse_ratio(const RatioArgs& a, std::ostream& out, std::ostream&) {
    require_rho(a.rho);
    for (auto k : a.k_grid) {
        if (k < 2) throw UsageError("every k in --k-grid must be at least 2");
    }
    const auto rows = run_mse_ratio(a.rho, a.k_grid, a.trials, *a.common.seed, a.common.threads);
    Sink sink(a.common.out_path, out);
    *sink << "rho,k,mse_sign_sign,mse_s_norm,mse_g_norm,ratio_s_norm,ratio_g_norm,theory_s_norm,theory_g_norm\n";
    for (const auto& r : rows) {
        *sink << num(a.rho) << ',' << r.k << ',' << num(r.mse_sign_sign) << ',' << num(r.mse_s_norm) << ','
              << num(r.mse_g_norm) << ',' << num(r.ratio_s_norm) << ',' << num(r.ratio_g_norm) << ','
              << num(r.theory_s_norm) << ',' << num(r.theory_g_norm) << '\n';
    }
    sink.finish();
}

struct HistogramArgs {
    Common common;
    HistogramConfig cfg;
    std::string estimator = "s-norm";
};

void cmd_histogram(HistogramArgs a, std::ostream& out, std::ostream&) {
    require_rho(a.cfg.rho);
    const auto es = parse_estimators({a.estimator});
    if (!(a.cfg.lo < a.cfg.hi)) throw UsageError("--lo must be below --hi");
    a.cfg.estimator = es.front();
    a.cfg.seed = *a.common.seed;
    a.cfg.threads = a.common.threads;
    const Histogram h = run_histogram(a.cfg);
    Sink sink(a.common.out_path, out);
    *sink << "# estimator=" << estimator_name(a.cfg.estimator) << '\n'
          << "# rho=" << num(a.cfg.rho) << '\n'
          << "# k=" << a.cfg.k << '\n'
          << "# trials=" << h.trials << '\n'
          << "# mean=" << num(h.mean) << '\n'
          << "# frac_above_one=" << num(h.frac_above_one) << '\n'
          << "# frac_below_minus_one=" << num(h.frac_below_minus_one) << '\n'
          << "# below_range=" << h.below_range << '\n'
          << "# above_range=" << h.above_range << '\n'
          << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        *sink << num(h.edges[b]) << ',' << num(h.edges[b + 1]) << ',' << h.counts[b] << '\n';
    }
    sink.finish();
}

// bench / synth ------------------------------------------------------------

struct BenchArgs {
    Common common;
    std::string train;
    std::string query;
    std::vector<std::uint32_t> k_grid{100};
    std::vector<double> rho0{0.9};
    std::vector<std::string> estimators{"sign-sign", "g-norm", "s-norm"};
    std::vector<std::size_t> l_grid;
    std::optional<std::size_t> dim;
};

void cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    BenchConfig cfg;
    cfg.k_grid = a.k_grid;
    cfg.seed = *a.common.seed;
    cfg.rho0_grid = a.rho0;
    cfg.estimators = parse_estimators(a.estimators);
    cfg.l_grid = a.l_grid;
    cfg.threads = a.common.threads;
    for (double r : cfg.rho0_grid) {
        if (!(r > 0.0 && r <= 1.0)) throw UsageError("--rho0 values must lie in (0, 1]");
    }
    for (auto k : cfg.k_grid) {
        if (k == 0) throw UsageError("--k values must be at least 1");
    }
    const auto curves = run_benchmark(a.train, a.query, cfg, a.dim);
    // Exclusions depend only on rho0, so report them once per threshold.
    for (std::size_t ri = 0; ri < cfg.rho0_grid.size(); ++ri) {
        const auto& c = curves[ri * cfg.k_grid.size() * cfg.estimators.size()].curve;
        if (c.included_queries == 0) {
            err << "warning: rho0=" << num(cfg.rho0_grid[ri])
                << ": no query has a relevant training point; curve is empty\n";
        } else if (c.excluded_queries > 0) {
            err << "note: rho0=" << num(cfg.rho0_grid[ri]) << ": " << c.excluded_queries
                << " query(ies) without relevant points excluded\n";
        }
    }
    Sink sink(a.common.out_path, out);
    write_curves_csv(*sink, curves);
    sink.finish();
}

struct SynthArgs {
    Common common;
    PlantedConfig cfg;
    std::string train_out;
    std::string query_out;
};

void cmd_synth(SynthArgs a, std::ostream&, std::ostream&) {
    a.cfg.seed = *a.common.seed;
    if (!(a.cfg.cos_lo >= 0.0 && a.cfg.cos_lo <= a.cfg.cos_hi && a.cfg.cos_hi <= 1.0)) {
        throw UsageError("cosine band must satisfy 0 <= --cos-lo <= --cos-hi <= 1");
    }
    const PlantedCorpus pc = make_planted_corpus(a.cfg);
    save_sparse_text(a.train_out, pc.train.vectors);
    save_sparse_text(a.query_out, pc.query.vectors);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cosine similarity estimation from sign-compressed random projections", "signfull"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::function<void()> action;

    SketchArgs sketch;
    auto* s_sketch = app.add_subcommand("sketch", "Project a sparse text corpus and store sign or full sketches");
    add_common(s_sketch, sketch.common, true, true);
    s_sketch->add_option("--input", sketch.input, "Sparse text corpus")->required();
    s_sketch->add_option("--k", sketch.k, "Number of projections")->required()->check(CLI::PositiveNumber);
    s_sketch->add_option("--kind", sketch.kind, "sign or full")->check(CLI::IsMember({"sign", "full"}));
    s_sketch->add_option("--dim", sketch.dim, "Override the inferred dimensionality")->check(CLI::PositiveNumber);
    s_sketch->callback([&] { action = [&] { cmd_sketch(sketch, out, err); }; });

    EstimateArgs estimate;
    auto* s_est = app.add_subcommand("estimate", "Estimate similarities between stored and query sketches");
    add_common(s_est, estimate.common, false, false);
    s_est->add_option("--store", estimate.store, "Stored sketch file (sign or full)")->required();
    s_est->add_option("--query", estimate.query, "Query sketch file (full)")->required();
    s_est->add_option("--estimators", estimate.estimators, "Comma-separated estimator names")->delimiter(',');
    s_est->callback([&] { action = [&] { cmd_estimate(estimate, out, err); }; });

    VarianceArgs variance;
    auto* s_var = app.add_subcommand("variance-table", "Tabulate asymptotic variance factors over a rho grid");
    add_common(s_var, variance.common, true, false);
    s_var->add_option("--estimators", variance.estimators, "Comma-separated estimator names")->delimiter(',');
    s_var->add_option("--rho-grid", variance.rho_grid, "Grid a:b:step");
    s_var->add_option("--fisher-samples", variance.fisher_samples, "Monte Carlo samples for mle");
    s_var->callback([&] { action = [&] { cmd_variance(variance, out, err); }; });

    SimulateArgs simulate;
    auto* s_sim = app.add_subcommand("simulate", "Empirical bias, variance and MSE on bivariate normal data");
    add_common(s_sim, simulate.common, true, true);
    s_sim->add_option("--rho", simulate.rho, "True correlation")->required();
    s_sim->add_option("--k", simulate.k, "Sample size per trial")->check(CLI::PositiveNumber);
    s_sim->add_option("--trials", simulate.trials, "Number of trials")->check(CLI::PositiveNumber);
    s_sim->add_option("--estimators", simulate.estimators, "Comma-separated estimator names")->delimiter(',');
    s_sim->callback([&] { action = [&] { cmd_simulate(simulate, out, err); }; });

    RatioArgs ratio;
    auto* s_ratio = app.add_subcommand("mse-ratio", "MSE of sign-sign over MSE of the normalized sign-full estimators");
    add_common(s_ratio, ratio.common, true, true);
    s_ratio->add_option("--rho", ratio.rho, "True correlation");
    s_ratio->add_option("--k-grid", ratio.k_grid, "Comma-separated k values")->delimiter(',');
    s_ratio->add_option("--trials", ratio.trials, "Number of trials")->check(CLI::PositiveNumber);
    s_ratio->callback([&] { action = [&] { cmd_mse_ratio(ratio, out, err); }; });

    HistogramArgs hist;
    auto* s_hist = app.add_subcommand("histogram", "Histogram of raw estimates");
    add_common(s_hist, hist.common, true, true);
    s_hist->add_option("--rho", hist.cfg.rho, "True correlation")->required();
    s_hist->add_option("--k", hist.cfg.k, "Sample size per trial")->check(CLI::PositiveNumber);
    s_hist->add_option("--trials", hist.cfg.trials, "Number of trials")->check(CLI::PositiveNumber);
    s_hist->add_option("--estimator", hist.estimator, "Estimator name");
    s_hist->add_option("--bins", hist.cfg.bins, "Number of bins")->check(CLI::Range(2u, 1'000'000u));
    s_hist->add_option("--lo", hist.cfg.lo, "Lower edge");
    s_hist->add_option("--hi", hist.cfg.hi, "Upper edge");
    s_hist->callback([&] { action = [&] { cmd_histogram(hist, out, err); }; });

    BenchArgs bench;
    auto* s_bench = app.add_subcommand("bench", "Precision-recall curves for near-neighbor ranking");
    add_common(s_bench, bench.common, true, true);
    s_bench->add_option("--train", bench.train, "Training corpus (sparse text)")->required();
    s_bench->add_option("--query", bench.query, "Query corpus (sparse text)")->required();
    s_bench->add_option("--k", bench.k_grid, "Comma-separated k values")->delimiter(',');
    s_bench->add_option("--rho0", bench.rho0, "Comma-separated relevance thresholds")->delimiter(',');
    s_bench->add_option("--estimators", bench.estimators, "Comma-separated estimator names")->delimiter(',');
    s_bench->add_option("--L", bench.l_grid, "Comma-separated cutoffs (default: every L)")->delimiter(',');
    s_bench->add_option("--dim", bench.dim, "Override the inferred dimensionality")->check(CLI::PositiveNumber);
    s_bench->callback([&] { action = [&] { cmd_bench(bench, out, err); }; });

    SynthArgs synth;
    auto* s_synth = app.add_subcommand("synth", "Write a planted-cluster corpus in sparse text format");
    add_common(s_synth, synth.common, true, true);
    s_synth->add_option("--train-out", synth.train_out, "Training corpus path")->required();
    s_synth->add_option("--query-out", synth.query_out, "Query corpus path")->required();
    s_synth->add_option("--n-train", synth.cfg.n_train, "Training points")->check(CLI::PositiveNumber);
    s_synth->add_option("--n-query", synth.cfg.n_query, "Query points")->check(CLI::PositiveNumber);
    s_synth->add_option("--dim", synth.cfg.dim, "Dimensionality")->check(CLI::Range(2ul, 100'000'000ul));
    s_synth->add_option("--clusters", synth.cfg.clusters, "Number of clusters")->check(CLI::PositiveNumber);
    s_synth->add_option("--cos-lo", synth.cfg.cos_lo, "Lowest cosine to the cluster center");
    s_synth->add_option("--cos-hi", synth.cfg.cos_hi, "Highest cosine to the cluster center");
    s_synth->callback([&] { action = [&] { cmd_synth(synth, out, err); }; });

    if (args.empty()) {
        err << app.help();
        return kExitUsage;
    }
    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        action();
        return kExitOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ContractError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

}  // namespace signfull
