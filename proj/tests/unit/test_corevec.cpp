#include "signfull/corevec.hpp"
#include "signfull/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

using namespace signfull;

namespace {

Corpus parse(const std::string& text, std::optional<std::size_t> dim = std::nullopt) {
    std::istringstream in(text);
    return parse_sparse_text(in, dim);
}

std::size_t error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST(Parse, LabelAndPairs) {
    const Corpus c = parse("1 3:0.6 4:0.8\n");
    ASSERT_EQ(c.size(), 1u);
    const auto& v = c.vectors[0];
    EXPECT_EQ(c.dim, 4u);
    ASSERT_EQ(v.nnz(), 2u);
    EXPECT_EQ(v.indices()[0], 2u);
    EXPECT_EQ(v.indices()[1], 3u);
    EXPECT_NEAR(v.values()[0], 0.6, 1e-15);
    EXPECT_NEAR(v.values()[1], 0.8, 1e-15);
}

TEST(Parse, NormalizesEveryVector) {
    const Corpus c = parse("0 1:2\n");
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c.vectors[0].indices()[0], 0u);
    EXPECT_EQ(c.vectors[0].values()[0], 1.0);
}

TEST(Parse, UnlabelledLines) {
    const Corpus c = parse("2:1 5:1\n1:3\n");
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c.dim, 5u);
}

TEST(Parse, BlankLinesAreSkippedAndCounted) {
    const Corpus c = parse("1 1:1 2:1\n\n0 3:4\n");
    EXPECT_EQ(c.size(), 2u);
    EXPECT_EQ(c.skipped_lines, 1u);
}

TEST(Parse, DeclaredDimension) {
    EXPECT_EQ(parse("1:1\n", 10).dim, 10u);
    EXPECT_THROW(parse("7:1\n", 5), ParseError);
}

TEST(Parse, ErrorsCarryLineNumbers) {
    EXPECT_EQ(error_line("1:1\n2:x\n"), 2u);
    EXPECT_EQ(error_line("1:1\n\n1 3:1 3:2\n"), 3u);
    EXPECT_EQ(error_line("1 4:1 2:1\n"), 1u);
    EXPECT_EQ(error_line("1:1 junk\n"), 1u);
    EXPECT_EQ(error_line("0:1\n"), 1u);
    EXPECT_EQ(error_line("1:\n"), 1u);
}

TEST(Parse, ErrorMessageNamesLine) {
    try {
        parse("1:1\n1:1 1:2\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(DataVector, RejectsBadEntries) {
    const std::vector<DataVector::Entry> unordered{{3, 1.0}, {1, 1.0}};
    EXPECT_THROW(DataVector::from_entries(5, unordered), ShapeError);
    const std::vector<DataVector::Entry> out_of_range{{5, 1.0}};
    EXPECT_THROW(DataVector::from_entries(5, out_of_range), ShapeError);
    const std::vector<DataVector::Entry> nan{{0, std::nan("")}};
    EXPECT_THROW(DataVector::from_entries(5, nan), DomainError);
}

TEST(DataVector, DropsZeros) {
    const std::vector<double> dense{0.0, 2.0, 0.0, -1.0};
    const auto v = DataVector::from_dense(dense);
    EXPECT_EQ(v.nnz(), 2u);
    EXPECT_EQ(v.to_dense(), dense);
}

TEST(Cosine, SelfIsExactlyOne) {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> z;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> d(17);
        for (auto& x : d) x = z(gen);
        const auto u = DataVector::from_dense(d);
        EXPECT_EQ(cosine(u, u), 1.0);
        EXPECT_EQ(cosine(normalize(u), normalize(u)), 1.0);
    }
}

TEST(Cosine, SymmetricAndScaleInvariant) {
    std::mt19937_64 gen(6);
    std::normal_distribution<double> z;
    std::uniform_real_distribution<double> alpha(0.01, 100.0);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> a(9), b(9);
        for (auto& x : a) x = z(gen);
        for (auto& x : b) x = z(gen);
        const auto u = DataVector::from_dense(a);
        const auto v = DataVector::from_dense(b);
        EXPECT_EQ(cosine(u, v), cosine(v, u));
        const double s = alpha(gen);
        for (auto& x : a) x *= s;
        EXPECT_NEAR(cosine(DataVector::from_dense(a), v), cosine(u, v), 1e-12);
    }
}

TEST(Cosine, DimensionMismatchAndZero) {
    const std::vector<double> a{1.0, 0.0}, b{1.0, 0.0, 0.0};
    EXPECT_THROW(cosine(DataVector::from_dense(a), DataVector::from_dense(b)), ShapeError);
    const std::vector<double> zero{0.0, 0.0};
    EXPECT_THROW(cosine(DataVector::from_dense(a), DataVector::from_dense(zero)), DomainError);
}

TEST(SparseText, WriteLoadMatchesDenseDot) {
    std::mt19937_64 gen(7);
    std::normal_distribution<double> z;
    std::bernoulli_distribution keep(0.3);
    std::vector<std::vector<double>> dense(20, std::vector<double>(50, 0.0));
    std::vector<DataVector> vecs;
    for (auto& d : dense) {
        d[gen() % 50] = 1.0;
        for (auto& x : d) {
            if (keep(gen)) x = z(gen);
        }
        d[49] = d[49] == 0.0 ? 0.5 : d[49];  // pin the inferred dim
        vecs.push_back(DataVector::from_dense(d));
    }
    const auto path = std::filesystem::temp_directory_path() / "signfull_corevec_roundtrip.txt";
    save_sparse_text(path, vecs);
    const Corpus c = load_sparse_text(path);
    std::filesystem::remove(path);
    ASSERT_EQ(c.size(), dense.size());
    ASSERT_EQ(c.dim, 50u);
    for (std::size_t a = 0; a < dense.size(); ++a) {
        for (std::size_t b = 0; b < dense.size(); ++b) {
            double ab = 0, aa = 0, bb = 0;
            for (std::size_t i = 0; i < 50; ++i) {
                ab += dense[a][i] * dense[b][i];
                aa += dense[a][i] * dense[a][i];
                bb += dense[b][i] * dense[b][i];
            }
            EXPECT_NEAR(cosine(c.vectors[a], c.vectors[b]), ab / std::sqrt(aa * bb), 1e-10);
        }
    }
}

TEST(SparseText, MissingFile) {
    EXPECT_THROW(load_sparse_text("/nonexistent/signfull.txt"), Error);
}
