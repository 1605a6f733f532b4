#include "signfull/errors.hpp"
#include "signfull/projector.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace signfull;

namespace {

DataVector unit(std::vector<double> d) { return normalize(DataVector::from_dense(d)); }

// Two unit vectors in R^2 with cosine rho.
std::pair<DataVector, DataVector> pair_with_cosine(double rho) {
    return {unit({1.0, 0.0}), unit({rho, std::sqrt(1.0 - rho * rho)})};
}

}  // namespace

TEST(GaussianEntry, DeterministicAndSeparated) {
    EXPECT_EQ(gaussian_entry(9, 3, 4), gaussian_entry(9, 3, 4));
    EXPECT_NE(gaussian_entry(9, 0, 0), gaussian_entry(9, 0, 1));
    EXPECT_NE(gaussian_entry(9, 0, 0), gaussian_entry(9, 1, 0));
    EXPECT_NE(gaussian_entry(9, 0, 0), gaussian_entry(10, 0, 0));
}

TEST(GaussianEntry, Moments) {
    const std::size_t n = 1'000'000;
    double s1 = 0, s2 = 0;
    for (std::size_t i = 0; i < 1000; ++i) {
        for (std::uint32_t j = 0; j < 1000; ++j) {
            const double g = gaussian_entry(123, i, j);
            s1 += g;
            s2 += g * g;
        }
    }
    const double mean = s1 / n;
    EXPECT_NEAR(mean, 0.0, 4e-3);
    EXPECT_NEAR(s2 / n - mean * mean, 1.0, 6e-3);
}

TEST(Project, AxisVectorReadsMatrixRow) {
    std::vector<double> d(10, 0.0);
    d[7] = 1.0;
    const auto s = project(DataVector::from_dense(d), {33, 5});
    ASSERT_EQ(s.k(), 33u);
    double sumsq = 0;
    for (std::uint32_t j = 0; j < 33; ++j) {
        EXPECT_EQ(s.values()[j], gaussian_entry(5, 7, j));
        sumsq += s.values()[j] * s.values()[j];
    }
    EXPECT_NEAR(s.sumsq(), sumsq, 1e-12 * sumsq);
}

TEST(Project, Errors) {
    EXPECT_THROW(project(DataVector{}, {4, 1}), DomainError);
    EXPECT_THROW(project(unit({1.0}), {0, 1}), ConfigError);
}

TEST(Project, Linearity) {
    std::mt19937_64 gen(1);
    std::normal_distribution<double> z;
    std::vector<double> a(30), b(30), sum(30);
    for (std::size_t i = 0; i < 30; ++i) {
        a[i] = z(gen);
        b[i] = z(gen);
        sum[i] = a[i] + b[i];
    }
    const ProjectionConfig cfg{64, 77};
    const auto pa = project(DataVector::from_dense(a), cfg);
    const auto pb = project(DataVector::from_dense(b), cfg);
    const auto ps = project(DataVector::from_dense(sum), cfg);
    for (std::size_t j = 0; j < 64; ++j) EXPECT_NEAR(pa.values()[j] + pb.values()[j], ps.values()[j], 1e-9);
}

TEST(Project, PrefixEqualsSmallerK) {
    const auto u = unit({0.3, -1.0, 2.0, 0.0, 0.5});
    const auto big = project(u, {100, 8});
    const auto small = project(u, {37, 8});
    const auto pre = big.prefix(37);
    ASSERT_EQ(pre.k(), 37u);
    for (std::size_t j = 0; j < 37; ++j) EXPECT_EQ(pre.values()[j], small.values()[j]);
    EXPECT_THROW(big.prefix(101), ShapeError);
}

TEST(Project, CorpusMatchesPerVector) {
    std::mt19937_64 gen(2);
    std::normal_distribution<double> z;
    // Small and large dim exercise both the materialized and on-the-fly paths.
    for (std::size_t dim : {40u, 6000u}) {
        Corpus c;
        c.dim = dim;
        for (int n = 0; n < 5; ++n) {
            std::vector<DataVector::Entry> e;
            for (std::uint32_t i = static_cast<std::uint32_t>(gen() % 7); i < dim; i += 1 + gen() % 900) {
                e.push_back({i, z(gen)});
            }
            c.vectors.push_back(normalize(DataVector::from_entries(dim, e)));
        }
        const ProjectionConfig cfg{1000, 3};
        for (unsigned threads : {1u, 3u}) {
            const auto all = project_corpus(c, cfg, threads);
            for (std::size_t n = 0; n < c.size(); ++n) {
                const auto one = project(c.vectors[n], cfg);
                ASSERT_EQ(all[n].k(), one.k());
                for (std::size_t j = 0; j < one.k(); ++j) ASSERT_EQ(all[n].values()[j], one.values()[j]);
                EXPECT_EQ(all[n].sumsq(), one.sumsq());
            }
        }
    }
}

TEST(Project, InnerProductIsUnbiased) {
    const double rho = 0.6;
    const auto [u, v] = pair_with_cosine(rho);
    const std::size_t n = 100'000;
    double s = 0;
    for (std::size_t seed = 0; seed < n; ++seed) {
        s += project(u, {1, seed}).values()[0] * project(v, {1, seed}).values()[0];
    }
    EXPECT_NEAR(s / n, rho, 4.0 * std::sqrt(1.0 + rho * rho) / std::sqrt(double(n)));
}

TEST(SignQuantize, PackingOrder) {
    const std::vector<double> v{-1.0, 2.0, -3.0};
    const auto s = sign_quantize(v);
    ASSERT_EQ(s.bytes().size(), 1u);
    EXPECT_EQ(s.bytes()[0], 0x02);
    const std::vector<double> zero{0.0};
    EXPECT_TRUE(sign_quantize(zero).bit(0));
    const std::vector<double> neg_zero{-0.0};
    EXPECT_TRUE(sign_quantize(neg_zero).bit(0));
}

TEST(SignQuantize, AllPositivePadsWithZero) {
    const std::vector<double> v(13, 1.0);
    const auto s = sign_quantize(v);
    ASSERT_EQ(s.bytes().size(), 2u);
    EXPECT_EQ(s.bytes()[0], 0xFF);
    EXPECT_EQ(s.bytes()[1], 0x1F);
}

TEST(SignSketch, RejectsBadPadding) {
    EXPECT_THROW(SignSketch(3, {0x08}), FormatError);
    EXPECT_THROW(SignSketch(9, {0x00}), ShapeError);
    EXPECT_NO_THROW(SignSketch(3, {0x07}));
}

TEST(SignSketch, MatchingBits) {
    const std::vector<double> a{1, -1, 1, -1, 1, 1, 1, 1, -1, -1};
    const std::vector<double> b{1, 1, 1, -1, -1, 1, 1, 1, -1, 1};
    EXPECT_EQ(matching_bits(sign_quantize(a), sign_quantize(b)), 7u);
    EXPECT_THROW(matching_bits(sign_quantize(a), sign_quantize(std::vector<double>{1.0})), ShapeError);
}

TEST(FullSketch, SumsqValidation) {
    EXPECT_NO_THROW(FullSketch({3.0, 4.0}, 25.0 * (1 + 1e-12)));
    EXPECT_THROW(FullSketch({3.0, 4.0}, 26.0), FormatError);
}

TEST(Serialization, SignRoundTrip) {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> z;
    SketchSet set;
    set.kind = SketchKind::Sign;
    set.k = 64;
    for (int n = 0; n < 100; ++n) {
        std::vector<double> v(64);
        for (auto& x : v) x = z(gen);
        set.signs.push_back(sign_quantize(v));
    }
    std::stringstream buf;
    write_sketches(buf, set);
    EXPECT_EQ(buf.str().size(), 4u + 1 + 1 + 4 + 8 + 100 * 8);
    const auto back = read_sketches(buf);
    EXPECT_EQ(back.kind, SketchKind::Sign);
    EXPECT_EQ(back.k, 64u);
    EXPECT_EQ(back.signs, set.signs);
}

TEST(Serialization, FullRoundTripIsBitExact) {
    SketchSet set;
    set.kind = SketchKind::Full;
    set.k = 5;
    for (int n = 0; n < 3; ++n) set.full.push_back(project(unit({1.0, double(n), -2.0}), {5, 11}));
    std::stringstream buf;
    write_sketches(buf, set);
    const auto back = read_sketches(buf);
    ASSERT_EQ(back.full.size(), 3u);
    for (int n = 0; n < 3; ++n) {
        for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(back.full[n].values()[j], set.full[n].values()[j]);
        EXPECT_EQ(back.full[n].sumsq(), set.full[n].sumsq());
    }
}

TEST(Serialization, LittleEndianHeader) {
    SketchSet set;
    set.k = 0x01020304;
    std::stringstream buf;
    write_sketches(buf, set);
    const std::string s = buf.str();
    ASSERT_EQ(s.size(), 18u);
    EXPECT_EQ(s.substr(0, 4), "SFRP");
    EXPECT_EQ(s[4], '\x01');
    EXPECT_EQ(s[5], '\x00');
    EXPECT_EQ(s.substr(6, 4), std::string("\x04\x03\x02\x01", 4));
    EXPECT_EQ(s.substr(10, 8), std::string(8, '\0'));
    const auto back = read_sketches(buf);
    EXPECT_EQ(back.size(), 0u);
}

TEST(Serialization, CorruptInputs) {
    SketchSet set;
    set.k = 16;
    set.signs.push_back(sign_quantize(std::vector<double>(16, 1.0)));
    std::stringstream good;
    write_sketches(good, set);
    const std::string bytes = good.str();

    auto read = [](std::string b) {
        std::stringstream in(b);
        return read_sketches(in);
    };
    std::string bad_magic = bytes;
    bad_magic[0] = 'X';
    EXPECT_THROW(read(bad_magic), FormatError);
    std::string bad_version = bytes;
    bad_version[4] = 2;
    EXPECT_THROW(read(bad_version), FormatError);
    std::string bad_kind = bytes;
    bad_kind[5] = 7;
    EXPECT_THROW(read(bad_kind), FormatError);
    EXPECT_THROW(read(bytes.substr(0, bytes.size() - 1)), FormatError);
    EXPECT_THROW(read(bytes.substr(0, 9)), FormatError);
    EXPECT_THROW(read(bytes + "x"), FormatError);
}

TEST(Serialization, HeterogeneousKRejected) {
    SketchSet set;
    set.k = 8;
    set.signs.push_back(sign_quantize(std::vector<double>(8, 1.0)));
    set.signs.push_back(sign_quantize(std::vector<double>(9, 1.0)));
    std::stringstream buf;
    EXPECT_THROW(write_sketches(buf, set), ShapeError);
}
