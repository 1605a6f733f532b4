#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace signfull {

/// Sparse real vector in R^dim with strictly increasing 0-based indices and
/// no stored zeros. Immutable once built.
class DataVector {
public:
    struct Entry {
        std::uint32_t index;
        double value;
    };

    DataVector() = default;

    /// Validates ordering and range; zero values are dropped.
    static DataVector from_entries(std::size_t dim, std::span<const Entry> entries);
    static DataVector from_dense(std::span<const double> values);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t nnz() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }

    std::span<const std::uint32_t> indices() const noexcept { return indices_; }
    std::span<const double> values() const noexcept { return values_; }

    double squared_norm() const noexcept;
    std::vector<double> to_dense() const;

private:
    std::size_t dim_ = 0;
    std::vector<std::uint32_t> indices_;
    std::vector<double> values_;
};

struct Corpus {
    std::vector<DataVector> vectors;
    std::size_t dim = 0;
    // Lines skipped because they held no nonzero entry.
    std::size_t skipped_lines = 0;

    std::size_t size() const noexcept { return vectors.size(); }
};

double dot(const DataVector& u, const DataVector& v);

/// Exact cosine similarity, clamped into [-1, 1]. cosine(u, u) == 1 exactly.
double cosine(const DataVector& u, const DataVector& v);

DataVector normalize(const DataVector& u);

/// Reads the line-per-vector sparse text format: an optional leading label
/// token followed by 1-based `index:value` pairs. Every vector is normalized.
/// If `declared_dim` is set it overrides the inferred dimensionality.
Corpus load_sparse_text(const std::filesystem::path& path,
                        std::optional<std::size_t> declared_dim = std::nullopt);
Corpus parse_sparse_text(std::istream& in,
                         std::optional<std::size_t> declared_dim = std::nullopt);

/// Writes vectors with 1-based indices and round-trip precision, no labels.
void write_sparse_text(std::ostream& out, std::span<const DataVector> vectors);
void save_sparse_text(const std::filesystem::path& path, std::span<const DataVector> vectors);

}  // namespace signfull
