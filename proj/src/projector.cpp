#include "signfull/projector.hpp"

#include "signfull/errors.hpp"
#include "signfull/parallel.hpp"
#include "signfull/rng.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace signfull {

namespace {

double sum_of_squares(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

// Materialize the projection matrix when it fits in this many entries.
constexpr std::size_t kMaterializeLimit = std::size_t{1} << 22;

}  // namespace

FullSketch::FullSketch(std::vector<double> values) : values_(std::move(values)) {
    sumsq_ = sum_of_squares(values_);
}

FullSketch::FullSketch(std::vector<double> values, double sumsq) : values_(std::move(values)) {
    const double recomputed = sum_of_squares(values_);
    if (!(std::fabs(recomputed - sumsq) <= 1e-9 * std::max(1e-300, std::fabs(recomputed)))) {
        throw FormatError("stored sum of squares disagrees with sketch values");
    }
    sumsq_ = sumsq;
}

FullSketch FullSketch::prefix(std::size_t k) const {
    if (k > values_.size()) throw ShapeError("prefix longer than sketch");
    return FullSketch(std::vector<double>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(k)));
}

SignSketch::SignSketch(std::size_t k, std::vector<std::uint8_t> bytes) : k_(k), bytes_(std::move(bytes)) {
    if (bytes_.size() != bytes_for(k)) throw ShapeError("sign sketch byte count does not match k");
    if (k % 8 != 0 && !bytes_.empty() && (bytes_.back() >> (k % 8)) != 0) {
        throw FormatError("sign sketch pad bits must be zero");
    }
}

SignSketch SignSketch::prefix(std::size_t k) const {
    if (k > k_) throw ShapeError("prefix longer than sketch");
    std::vector<std::uint8_t> bytes(bytes_.begin(), bytes_.begin() + static_cast<std::ptrdiff_t>(bytes_for(k)));
    if (k % 8 != 0) bytes.back() &= static_cast<std::uint8_t>((1u << (k % 8)) - 1u);
    return SignSketch(k, std::move(bytes));
}

std::size_t matching_bits(const SignSketch& a, const SignSketch& b) {
    if (a.k() != b.k()) throw ShapeError("sign sketches differ in k");
    const auto x = a.bytes();
    const auto y = b.bytes();
    std::size_t differing = 0;
    std::size_t n = 0;
    for (; n + 8 <= x.size(); n += 8) {
        std::uint64_t wa, wb;
        std::memcpy(&wa, x.data() + n, 8);
        std::memcpy(&wb, y.data() + n, 8);
        differing += static_cast<std::size_t>(std::popcount(wa ^ wb));
    }
    for (; n < x.size(); ++n) {
        differing += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(x[n] ^ y[n])));
    }
    return a.k() - differing;
}

double gaussian_entry(std::uint64_t seed, std::uint64_t row, std::uint32_t col) noexcept {
    // One Philox block covers two adjacent columns.
    const auto bits = rng::bits128(seed, row, col >> 1, rng::Stream::Projection);
    return rng::normal_quantile(rng::uniform_open(bits[col & 1u]));
}

FullSketch project(const DataVector& u, const ProjectionConfig& cfg) {
    if (cfg.k == 0) throw ConfigError("k must be at least 1");
    if (u.empty()) throw DomainError("cannot project an empty vector");
    std::vector<double> values(cfg.k, 0.0);
    const auto idx = u.indices();
    const auto val = u.values();
    for (std::size_t n = 0; n < idx.size(); ++n) {
        const double w = val[n];
        for (std::uint32_t j = 0; j < cfg.k; ++j) values[j] += w * gaussian_entry(cfg.seed, idx[n], j);
    }
    return FullSketch(std::move(values));
}

std::vector<FullSketch> project_corpus(const Corpus& corpus, const ProjectionConfig& cfg, unsigned threads) {
    if (cfg.k == 0) throw ConfigError("k must be at least 1");
    std::vector<FullSketch> out(corpus.size());
    const std::size_t dim = corpus.dim;
    if (dim == 0 || dim * cfg.k > kMaterializeLimit) {
        parallel_for_chunks(corpus.size(), threads, [&](std::size_t n) { out[n] = project(corpus.vectors[n], cfg); });
        return out;
    }
    std::vector<double> matrix(dim * cfg.k);
    parallel_for_chunks(dim, threads, [&](std::size_t i) {
        for (std::uint32_t j = 0; j < cfg.k; ++j) matrix[i * cfg.k + j] = gaussian_entry(cfg.seed, i, j);
    });
    parallel_for_chunks(corpus.size(), threads, [&](std::size_t n) {
        const auto& u = corpus.vectors[n];
        if (u.empty()) throw DomainError("cannot project an empty vector");
        std::vector<double> values(cfg.k, 0.0);
        for (std::size_t e = 0; e < u.nnz(); ++e) {
            const double w = u.values()[e];
            const double* row = matrix.data() + static_cast<std::size_t>(u.indices()[e]) * cfg.k;
            for (std::uint32_t j = 0; j < cfg.k; ++j) values[j] += w * row[j];
        }
        out[n] = FullSketch(std::move(values));
    });
    return out;
}

SignSketch sign_quantize(std::span<const double> values) {
    std::vector<std::uint8_t> bytes(SignSketch::bytes_for(values.size()), 0);
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (values[j] >= 0.0) bytes[j >> 3] |= static_cast<std::uint8_t>(1u << (j & 7));
    }
    return SignSketch(values.size(), std::move(bytes));
}

SignSketch sign_quantize(const FullSketch& s) { return sign_quantize(s.values()); }

namespace {

constexpr char kMagic[4] = {'S', 'F', 'R', 'P'};
constexpr std::uint8_t kVersion = 0x01;

template <typename T>
void put_le(std::ostream& out, T value) {
    std::uint8_t buf[sizeof(T)];
    for (std::size_t b = 0; b < sizeof(T); ++b) buf[b] = static_cast<std::uint8_t>(value >> (8 * b));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

void read_exact(std::istream& in, void* dst, std::size_t n) {
    in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) throw FormatError("truncated sketch file");
}

template <typename T>
T get_le(std::istream& in) {
    std::uint8_t buf[sizeof(T)];
    read_exact(in, buf, sizeof(T));
    T v = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) v |= static_cast<T>(buf[b]) << (8 * b);
    return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

}  // namespace

void write_sketches(std::ostream& out, const SketchSet& set) {
    const std::uint64_t count = set.size();
    out.write(kMagic, 4);
    put_le<std::uint8_t>(out, kVersion);
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(set.kind));
    put_le<std::uint32_t>(out, set.k);
    put_le<std::uint64_t>(out, count);
    if (set.kind == SketchKind::Sign) {
        for (const auto& s : set.signs) {
            if (s.k() != set.k) throw ShapeError("sketch collection is not homogeneous in k");
            out.write(reinterpret_cast<const char*>(s.bytes().data()), static_cast<std::streamsize>(s.bytes().size()));
        }
    } else {
        for (const auto& s : set.full) {
            if (s.k() != set.k) throw ShapeError("sketch collection is not homogeneous in k");
            for (double v : s.values()) put_f64(out, v);
        }
        for (const auto& s : set.full) put_f64(out, s.sumsq());
    }
    if (!out) throw Error("failed writing sketch data");
}

SketchSet read_sketches(std::istream& in) {
    char magic[4];
    read_exact(in, magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("bad magic; not a sketch file");
    if (get_le<std::uint8_t>(in) != kVersion) throw FormatError("unsupported sketch file version");
    const auto kind = get_le<std::uint8_t>(in);
    if (kind > 1) throw FormatError("unknown sketch kind");
    SketchSet set;
    set.kind = static_cast<SketchKind>(kind);
    set.k = get_le<std::uint32_t>(in);
    const auto count = get_le<std::uint64_t>(in);
    if (set.kind == SketchKind::Sign) {
        const std::size_t nbytes = SignSketch::bytes_for(set.k);
        for (std::uint64_t n = 0; n < count; ++n) {
            std::vector<std::uint8_t> bytes(nbytes);
            read_exact(in, bytes.data(), nbytes);
            set.signs.emplace_back(set.k, std::move(bytes));
        }
    } else {
        std::vector<std::vector<double>> values;
        for (std::uint64_t n = 0; n < count; ++n) {
            std::vector<double> v(set.k);
            for (auto& x : v) x = get_f64(in);
            values.push_back(std::move(v));
        }
        for (std::uint64_t n = 0; n < count; ++n) {
            const double sumsq = get_f64(in);
            set.full.emplace_back(std::move(values[n]), sumsq);
        }
    }
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after sketch payload");
    return set;
}

void save_sketches(const std::filesystem::path& path, const SketchSet& set) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_sketches(out, set);
}

SketchSet load_sketches(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return read_sketches(in);
}

}  // namespace signfull
