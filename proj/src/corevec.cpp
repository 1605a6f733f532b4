#include "signfull/corevec.hpp"

#include "signfull/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>

namespace signfull {

DataVector DataVector::from_entries(std::size_t dim, std::span<const Entry> entries) {
    DataVector out;
    out.dim_ = dim;
    out.indices_.reserve(entries.size());
    out.values_.reserve(entries.size());
    for (std::size_t n = 0; n < entries.size(); ++n) {
        const auto& e = entries[n];
        if (e.index >= dim) {
            throw ShapeError("index " + std::to_string(e.index) + " out of range for dim " +
                             std::to_string(dim));
        }
        if (n > 0 && e.index <= entries[n - 1].index) {
            throw ShapeError("indices must be strictly increasing");
        }
        if (!std::isfinite(e.value)) {
            throw DomainError("non-finite vector entry");
        }
        if (e.value == 0.0) continue;
        out.indices_.push_back(e.index);
        out.values_.push_back(e.value);
    }
    return out;
}

DataVector DataVector::from_dense(std::span<const double> values) {
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] != 0.0) entries.push_back({static_cast<std::uint32_t>(i), values[i]});
    }
    return from_entries(values.size(), entries);
}

double DataVector::squared_norm() const noexcept {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return s;
}

std::vector<double> DataVector::to_dense() const {
    std::vector<double> out(dim_, 0.0);
    for (std::size_t n = 0; n < indices_.size(); ++n) out[indices_[n]] = values_[n];
    return out;
}

double dot(const DataVector& u, const DataVector& v) {
    if (u.dim() != v.dim()) {
        throw ShapeError("dimension mismatch: " + std::to_string(u.dim()) + " vs " +
                         std::to_string(v.dim()));
    }
    const auto ui = u.indices();
    const auto vi = v.indices();
    const auto uv = u.values();
    const auto vv = v.values();
    double s = 0.0;
    std::size_t a = 0, b = 0;
    while (a < ui.size() && b < vi.size()) {
        if (ui[a] == vi[b]) {
            s += uv[a++] * vv[b++];
        } else if (ui[a] < vi[b]) {
            ++a;
        } else {
            ++b;
        }
    }
    return s;
}

double cosine(const DataVector& u, const DataVector& v) {
    const double d = dot(u, v);
    const double nu = u.squared_norm();
    const double nv = v.squared_norm();
    if (nu == 0.0 || nv == 0.0) throw DomainError("cosine of a zero vector");
    // sqrt(a * a) == a in IEEE arithmetic, so identical vectors give exactly 1.
    return std::clamp(d / std::sqrt(nu * nv), -1.0, 1.0);
}

DataVector normalize(const DataVector& u) {
    const double n2 = u.squared_norm();
    if (n2 == 0.0) throw DomainError("cannot normalize a zero vector");
    const double norm = std::sqrt(n2);
    std::vector<DataVector::Entry> entries;
    entries.reserve(u.nnz());
    for (std::size_t n = 0; n < u.nnz(); ++n) {
        entries.push_back({u.indices()[n], u.values()[n] / norm});
    }
    return DataVector::from_entries(u.dim(), entries);
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        const std::size_t start = pos;
        while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos > start) tokens.push_back(line.substr(start, pos - start));
    }
    return tokens;
}

double parse_value(std::string_view text, std::size_t line_no) {
    const std::string s(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw ParseError(line_no, "non-numeric value '" + s + "'");
    }
    return v;
}

}  // namespace

Corpus parse_sparse_text(std::istream& in, std::optional<std::size_t> declared_dim) {
    struct Row {
        std::vector<DataVector::Entry> entries;
        std::size_t line_no;
    };
    std::vector<Row> rows;
    Corpus corpus;
    std::size_t max_index = 0;  // 1-based
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        std::size_t first = 0;
        if (!tokens.empty() && tokens[0].find(':') == std::string_view::npos) first = 1;  // label

        Row row{{}, line_no};
        std::uint64_t prev = 0;
        for (std::size_t t = first; t < tokens.size(); ++t) {
            const auto tok = tokens[t];
            const auto colon = tok.find(':');
            if (colon == std::string_view::npos || colon == 0 || colon + 1 == tok.size()) {
                throw ParseError(line_no, "malformed pair '" + std::string(tok) + "'");
            }
            std::uint64_t idx = 0;
            const auto idx_text = tok.substr(0, colon);
            const auto [ptr, ec] =
                std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
            if (ec != std::errc{} || ptr != idx_text.data() + idx_text.size()) {
                throw ParseError(line_no, "malformed index '" + std::string(idx_text) + "'");
            }
            if (idx == 0) throw ParseError(line_no, "indices are 1-based; got 0");
            if (idx > 0xFFFFFFFFull) throw ParseError(line_no, "index too large");
            if (idx <= prev) {
                throw ParseError(line_no, idx == prev ? "duplicate index " + std::to_string(idx)
                                                      : "non-increasing index " + std::to_string(idx));
            }
            prev = idx;
            const double value = parse_value(tok.substr(colon + 1), line_no);
            max_index = std::max<std::size_t>(max_index, idx);
            if (value != 0.0) row.entries.push_back({static_cast<std::uint32_t>(idx - 1), value});
        }
        if (row.entries.empty()) {
            ++corpus.skipped_lines;
            continue;
        }
        rows.push_back(std::move(row));
    }

    if (declared_dim) {
        if (*declared_dim < max_index) {
            throw ParseError(line_no, "index " + std::to_string(max_index) +
                                          " exceeds declared dim " + std::to_string(*declared_dim));
        }
        corpus.dim = *declared_dim;
    } else {
        corpus.dim = max_index;
    }
    corpus.vectors.reserve(rows.size());
    for (const auto& row : rows) {
        corpus.vectors.push_back(normalize(DataVector::from_entries(corpus.dim, row.entries)));
    }
    return corpus;
}

Corpus load_sparse_text(const std::filesystem::path& path, std::optional<std::size_t> declared_dim) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return parse_sparse_text(in, declared_dim);
}

void write_sparse_text(std::ostream& out, std::span<const DataVector> vectors) {
    std::ostringstream line;
    line << std::setprecision(17);
    for (const auto& v : vectors) {
        line.str({});
        for (std::size_t n = 0; n < v.nnz(); ++n) {
            if (n) line << ' ';
            line << (v.indices()[n] + 1) << ':' << v.values()[n];
        }
        out << line.str() << '\n';
    }
}

void save_sparse_text(const std::filesystem::path& path, std::span<const DataVector> vectors) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    write_sparse_text(out, vectors);
}

}  // namespace signfull
