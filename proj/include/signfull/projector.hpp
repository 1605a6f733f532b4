#pragma once

#include "signfull/corevec.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace signfull {

struct ProjectionConfig {
    std::uint32_t k = 0;
    std::uint64_t seed = 0;
};

/// k projected coordinates plus their stored sum of squares.
class FullSketch {
public:
    FullSketch() = default;
    explicit FullSketch(std::vector<double> values);
    /// For deserialization; `sumsq` must agree with the values to 1e-9 relative.
    FullSketch(std::vector<double> values, double sumsq);

    std::size_t k() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double sumsq() const noexcept { return sumsq_; }

    /// First `k` coordinates; sketches built by `project` with the same seed
    /// and a smaller k are identical to this prefix.
    FullSketch prefix(std::size_t k) const;

private:
    std::vector<double> values_;
    double sumsq_ = 0.0;
};

/// k sign bits, bit j stored at bit (j % 8) of byte j / 8; 1 means x_j >= 0.
/// Pad bits of the final byte are always zero.
class SignSketch {
public:
    SignSketch() = default;
    SignSketch(std::size_t k, std::vector<std::uint8_t> bytes);

    static std::size_t bytes_for(std::size_t k) noexcept { return (k + 7) / 8; }

    std::size_t k() const noexcept { return k_; }
    std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }
    bool bit(std::size_t j) const noexcept { return (bytes_[j >> 3] >> (j & 7)) & 1u; }

    SignSketch prefix(std::size_t k) const;

    friend bool operator==(const SignSketch&, const SignSketch&) = default;

private:
    std::size_t k_ = 0;
    std::vector<std::uint8_t> bytes_;
};

/// Number of positions where two equal-length sign sketches agree.
std::size_t matching_bits(const SignSketch& a, const SignSketch& b);

/// Entry (row, col) of the implicit D x k standard normal projection matrix.
double gaussian_entry(std::uint64_t seed, std::uint64_t row, std::uint32_t col) noexcept;

FullSketch project(const DataVector& u, const ProjectionConfig& cfg);

/// Projects every vector of a corpus. Small matrices are materialized once;
/// the result is bitwise identical to calling `project` per vector.
std::vector<FullSketch> project_corpus(const Corpus& corpus, const ProjectionConfig& cfg,
                                       unsigned threads = 1);

SignSketch sign_quantize(const FullSketch& s);
SignSketch sign_quantize(std::span<const double> values);

enum class SketchKind : std::uint8_t { Sign = 0x00, Full = 0x01 };

/// A homogeneous collection of sketches as stored on disk.
struct SketchSet {
    SketchKind kind = SketchKind::Sign;
    std::uint32_t k = 0;
    std::vector<SignSketch> signs;
    std::vector<FullSketch> full;

    std::size_t size() const noexcept { return kind == SketchKind::Sign ? signs.size() : full.size(); }
};

// File layout: "SFRP", version 0x01, kind byte, u32 k, u64 count (little-endian),
// then count * ceil(k/8) packed bytes (sign) or count * k doubles followed by
// count sumsq doubles (full).
void write_sketches(std::ostream& out, const SketchSet& set);
SketchSet read_sketches(std::istream& in);
void save_sketches(const std::filesystem::path& path, const SketchSet& set);
SketchSet load_sketches(const std::filesystem::path& path);

}  // namespace signfull
