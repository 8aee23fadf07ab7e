#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kuramem/memory.hpp"
#include "oracles.hpp"

using namespace kuramem;

namespace {

struct TableRow {
    double drop1, drop2;
    WindingVector k;
    std::uint64_t index;
    const char* bits;
};

// Five-node cycles, two of them.
const TableRow table1[] = {
    {-2 * pi / 5, -2 * pi / 5, {-1, -1}, 1, "0001"}, {-2 * pi / 5, 0, {-1, 0}, 2, "0010"},
    {-2 * pi / 5, 2 * pi / 5, {-1, 1}, 3, "0011"},   {0, -2 * pi / 5, {0, -1}, 4, "0100"},
    {0, 0, {0, 0}, 5, "0101"},                       {0, 2 * pi / 5, {0, 1}, 6, "0110"},
    {2 * pi / 5, -2 * pi / 5, {1, -1}, 7, "0111"},   {2 * pi / 5, 0, {1, 0}, 8, "1000"},
    {2 * pi / 5, 2 * pi / 5, {1, 1}, 9, "1001"},
};

} // namespace

TEST(BinaryPattern, ParseAndFormat) {
    const auto p = BinaryPattern::parse("0110");
    EXPECT_EQ(p.value(), 6u);
    EXPECT_EQ(p.str(), "0110");
    EXPECT_EQ(BinaryPattern::from_value(6, 4), p);
    EXPECT_THROW(BinaryPattern::parse("01a0"), DomainError);
    EXPECT_THROW(BinaryPattern::parse(""), DomainError);
    EXPECT_THROW(BinaryPattern::from_value(16, 4), DomainError);
}

TEST(Codec, Parameters) {
    const PatternCodec c(5, 2);
    EXPECT_EQ(c.base(), 3);
    EXPECT_EQ(c.offset(), 1);
    EXPECT_EQ(c.n_patterns(), 9u);
    EXPECT_EQ(c.bit_width(), 4);
    EXPECT_EQ(PatternCodec(9, 2).n_patterns(), 25u);
    EXPECT_EQ(PatternCodec(9, 2).bit_width(), 5);
    EXPECT_EQ(PatternCodec(5, 1).bit_width(), 2);
    EXPECT_EQ(PatternCodec(5, 3).bit_width(), 5); // 27 -> 5 bits
    EXPECT_EQ(PatternCodec(13, 1).n_patterns(), 7u);
    EXPECT_EQ(PatternCodec(17, 1).n_patterns(), 9u);
    EXPECT_EQ(PatternCodec(5, 40).n_patterns(), 12157665459056928801ULL);
    EXPECT_THROW(PatternCodec(5, 41), DomainError);
}

TEST(Codec, ReproducesMappingTable) {
    const PatternCodec c(5, 2);
    for (const auto& row : table1) {
        EXPECT_EQ(c.index_of(row.k), row.index);
        EXPECT_EQ(c.encode(row.k).str(), row.bits);
        EXPECT_EQ(c.decode(BinaryPattern::parse(row.bits)), row.k);
        const Phases t = store(BinaryPattern::parse(row.bits), c);
        EXPECT_NEAR(wrap_angle(t(0) - t(1)), row.drop1, 1e-12);
        EXPECT_NEAR(wrap_angle(t(4) - t(5)), row.drop2, 1e-12);
    }
}

TEST(Codec, DecodeRejectsOutOfRange) {
    const PatternCodec c(5, 2);
    EXPECT_THROW(c.decode(BinaryPattern::parse("0000")), DomainError);
    EXPECT_THROW(c.decode(BinaryPattern::parse("1010")), DomainError);
    EXPECT_THROW(c.decode(BinaryPattern::parse("101")), DomainError);
    const int bad[] = {2, 0};
    EXPECT_THROW(c.encode(bad), DomainError);
}

TEST(Codec, BijectionOverIndexRange) {
    for (auto [nc, m] : std::vector<std::pair<int, int>>{{5, 1}, {5, 2}, {5, 6}, {9, 3}, {13, 2}, {6, 4}}) {
        const PatternCodec c(nc, m);
        for (std::uint64_t i = 1; i <= c.n_patterns(); ++i) {
            const auto k = c.winding_of(i);
            const auto bits = c.encode(k);
            EXPECT_EQ(static_cast<int>(bits.size()), c.bit_width());
            EXPECT_EQ(bits.value(), i);
            EXPECT_EQ(c.decode(bits), k);
        }
    }
}

TEST(Capacity, Formula) {
    EXPECT_EQ(num_patterns(5, 1), 3u);
    EXPECT_DOUBLE_EQ(capacity(5, 1), 3.0 / 5.0);
    EXPECT_EQ(num_patterns(5, 2), 9u);
    EXPECT_DOUBLE_EQ(capacity(5, 2), 1.0);
    EXPECT_EQ(num_patterns(9, 2), 25u);
    EXPECT_THROW(capacity(4, 1), DomainError);
    EXPECT_THROW(num_patterns(5, 0), DomainError);
}

TEST(Capacity, GrowsWithCycles) {
    for (int nc : {5, 6, 9, 13}) {
        double last = capacity(nc, 2);
        for (int m = 3; m <= 30; ++m) {
            const double c = capacity(nc, m);
            EXPECT_GT(c, last) << nc << "," << m;
            last = c;
        }
    }
}

TEST(Store, FigureFiveConfigurations) {
    const PatternCodec c(5, 2);
    EXPECT_EQ(store(BinaryPattern::parse("0101"), c).cwiseAbs().maxCoeff(), 0.0);
    const int a[] = {0, -1};
    EXPECT_EQ(store(BinaryPattern::parse("0100"), c), construct_config(a, 5, 2));
    const int b[] = {-1, 1};
    EXPECT_EQ(store(BinaryPattern::parse("0011"), c), construct_config(b, 5, 2));
}

TEST(Retrieve, FixedPointForEveryPattern) {
    for (auto [nc, m] : std::vector<std::pair<int, int>>{{5, 2}, {5, 4}, {9, 2}, {6, 3}}) {
        const PatternCodec c(nc, m);
        const auto g = build_honeycomb(nc, m);
        for (std::uint64_t i = 1; i <= c.n_patterns(); ++i) {
            const auto bits = BinaryPattern::from_value(i, c.bit_width());
            const auto r = retrieve(store(bits, c), c, g);
            EXPECT_EQ(r.pattern, bits);
            EXPECT_EQ(r.diagnostics.t_converged, 0.0);
            EXPECT_TRUE(r.diagnostics.cohesive);
        }
    }
}

TEST(Retrieve, RecoversUnderSmallNoise) {
    const PatternCodec c(5, 2);
    const auto g = build_honeycomb(5, 2);
    Rng rng(314);
    int recovered = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto bits = BinaryPattern::from_value(1 + rng.below(9), 4);
        Phases t = store(bits, c);
        for (Eigen::Index i = 0; i < t.size(); ++i) t(i) += rng.uniform(-0.1, 0.1);
        recovered += retrieve(t, c, g).pattern == bits;
    }
    EXPECT_EQ(recovered, 100);
}

TEST(Retrieve, RandomStartsAlwaysDecode) {
    const PatternCodec c(5, 2);
    const auto g = build_honeycomb(5, 2);
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const auto r = retrieve(oracle::random_phases(g.n(), rng), c, g);
        EXPECT_GE(r.pattern.value(), 1u);
        EXPECT_LE(r.pattern.value(), 9u);
        EXPECT_TRUE(r.diagnostics.cohesive);
    }
}

TEST(Retrieve, FailsWithoutConvergence) {
    const PatternCodec c(5, 2);
    const auto g = build_honeycomb(5, 2);
    IntegrateOptions opt;
    opt.t_max = 0.1;
    Phases t = Phases::Zero(9);
    t(3) = 1.0;
    EXPECT_THROW(retrieve(t, c, g, opt), RetrievalFailure);
    // Graph whose basis does not match the codec.
    EXPECT_THROW(retrieve(Phases::Zero(6), c, build_hex_array(1, 1)), RetrievalFailure);
}
