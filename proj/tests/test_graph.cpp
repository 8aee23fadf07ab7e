#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "kuramem/graph.hpp"
#include "oracles.hpp"

using namespace kuramem;

namespace {

void expect_valid_basis(const Graph& g) {
    EXPECT_EQ(static_cast<long>(g.cycle_basis().size()), static_cast<long>(g.edges().size()) - g.n() + 1);
    const Eigen::MatrixXd b = g.incidence();
    for (std::size_t s = 0; s < g.cycle_basis().size(); ++s) {
        const auto& c = g.cycle_basis()[s];
        for (std::size_t i = 0; i < c.size(); ++i) EXPECT_TRUE(g.has_edge(c[i], c[(i + 1) % c.size()]));
        // Basis cycles lie in the cycle space: B z = 0.
        EXPECT_LT((b * g.cycle_edge_vector(s)).cwiseAbs().maxCoeff(), 1e-15);
    }
    for (Eigen::Index k = 0; k < b.cols(); ++k) {
        EXPECT_EQ(b.col(k).sum(), 0.0);
        EXPECT_EQ(b.col(k).cwiseAbs().sum(), 2.0);
        EXPECT_EQ(b.col(k).minCoeff(), -1.0);
    }
}

} // namespace

TEST(Honeycomb, FigureThreeSingleCycle) {
    const auto g = build_honeycomb(5, 1);
    EXPECT_EQ(g.n(), 5);
    EXPECT_EQ(g.edges().size(), 5u);
    EXPECT_EQ(g.cycle_basis().size(), 1u);
    for (int d : degrees(g)) EXPECT_EQ(d, 2);
}

TEST(Honeycomb, TwoPentagons) {
    const auto g = build_honeycomb(5, 2);
    EXPECT_EQ(g.n(), 9);
    EXPECT_EQ(g.edges().size(), 10u);
    EXPECT_EQ(g.cycle_basis().size(), 2u);
    EXPECT_EQ(degrees(g)[4], 4); // node n_c = 5 joins the two pentagons
}

TEST(Honeycomb, FiveHexagons) {
    const auto g = build_honeycomb(6, 5);
    EXPECT_EQ(g.n(), 26);
    EXPECT_EQ(g.edges().size(), 30u);
    EXPECT_EQ(g.cycle_basis().size(), 5u);
}

TEST(Honeycomb, EdgeSetMatchesPathPlusChords) {
    for (int nc = 5; nc <= 10; ++nc) {
        for (int m = 1; m <= 6; ++m) {
            const auto g = build_honeycomb(nc, m);
            std::set<std::pair<int, int>> want;
            for (int i = 1; i <= m * (nc - 1); ++i) want.insert({i, i + 1});
            for (int p = 0; p < m; ++p) want.insert({p * (nc - 1) + 1, p * (nc - 1) + nc});
            std::set<std::pair<int, int>> got;
            for (const auto& e : g.edges()) got.insert({e.u + 1, e.v + 1});
            EXPECT_EQ(got, want) << nc << "," << m;
            EXPECT_EQ(g.n(), m * (nc - 1) + 1);
            EXPECT_EQ(static_cast<int>(g.edges().size()), m * nc);
            expect_valid_basis(g);
            // Cycle p runs along the path then back over its chord.
            for (int p = 0; p < m; ++p) {
                const auto& c = g.cycle_basis()[p];
                ASSERT_EQ(static_cast<int>(c.size()), nc);
                for (int i = 0; i < nc; ++i) EXPECT_EQ(c[i], p * (nc - 1) + i);
            }
        }
    }
}

TEST(Honeycomb, RejectsSmallParameters) {
    EXPECT_THROW(build_honeycomb(4, 1), DomainError);
    EXPECT_THROW(build_honeycomb(5, 0), DomainError);
    EXPECT_THROW(build_honeycomb_chain(3, 2), DomainError);
    EXPECT_THROW(build_honeycomb_chain(5, -1), DomainError);
}

TEST(HoneycombChain, SingleCycleMatchesHoneycomb) { EXPECT_EQ(build_honeycomb_chain(5, 1), build_honeycomb(5, 1)); }

TEST(HoneycombChain, TwoPentagonDegrees) {
    const auto g = build_honeycomb_chain(5, 2);
    EXPECT_EQ(g.n(), 9);
    EXPECT_EQ(g.edges().size(), 10u);
    int fours = 0, twos = 0;
    for (int v = 0; v < g.n(); ++v) {
        const int d = oracle::edge_scan_degree(g, v);
        fours += d == 4;
        twos += d == 2;
    }
    EXPECT_EQ(fours, 1);
    EXPECT_EQ(twos, 8);
}

TEST(HoneycombChain, EveryEdgeTouchesDegreeTwo) {
    for (int nc = 5; nc <= 10; ++nc) {
        for (int m = 1; m <= 7; ++m) {
            const auto g = build_honeycomb_chain(nc, m);
            EXPECT_EQ(g.n(), m * (nc - 1) + 1);
            for (const auto& e : g.edges())
                EXPECT_TRUE(oracle::edge_scan_degree(g, e.u) == 2 || oracle::edge_scan_degree(g, e.v) == 2)
                    << nc << "," << m << " edge " << e.u << "-" << e.v;
            expect_valid_basis(g);
        }
    }
}

TEST(HoneycombChain, PlainHoneycombHasAdjacentJunctions) {
    // The path-and-chord layout joins junctions by an edge once m >= 3.
    const auto g = build_honeycomb(5, 3);
    const auto d = degrees(g);
    bool adjacent = false;
    for (const auto& e : g.edges()) adjacent |= (d[e.u] == 4 && d[e.v] == 4);
    EXPECT_TRUE(adjacent);
}

TEST(Arrays, SingleHexagon) {
    const auto g = build_hex_array(1, 1);
    EXPECT_EQ(g.n(), 6);
    EXPECT_EQ(g.edges().size(), 6u);
    EXPECT_EQ(g.cycle_basis().size(), 1u);
    for (int d : degrees(g)) EXPECT_EQ(d, 2);
}

TEST(Arrays, SquareTwoByTwo) {
    const auto g = build_square_array(2, 2);
    EXPECT_EQ(g.n(), 9);
    EXPECT_EQ(g.edges().size(), 12u);
    EXPECT_EQ(g.cycle_basis().size(), 4u);
}

TEST(Arrays, HexTwoByTwoFaceCount) {
    const auto g = build_hex_array(2, 2);
    // Planar face count: four hexagons, 16 corners, 19 sides.
    EXPECT_EQ(g.n(), 16);
    EXPECT_EQ(g.edges().size(), 19u);
    EXPECT_EQ(static_cast<long>(g.edges().size()) - g.n() + 1, 4);
}

TEST(Arrays, TriangularFaces) {
    const auto g = build_tri_array(2, 2);
    EXPECT_EQ(g.n(), 9);
    EXPECT_EQ(g.cycle_basis().size(), 8u);
    for (const auto& c : g.cycle_basis()) EXPECT_EQ(c.size(), 3u);
}

TEST(Arrays, EulerIdentityAcrossSizes) {
    for (int r = 1; r <= 5; ++r) {
        for (int c = 1; c <= 5; ++c) {
            for (const auto& g : {build_hex_array(r, c), build_square_array(r, c), build_tri_array(r, c)}) {
                expect_valid_basis(g);
                for (int d : degrees(g)) EXPECT_GE(d, 2);
            }
            EXPECT_EQ(static_cast<int>(build_hex_array(r, c).cycle_basis().size()), r * c);
            EXPECT_EQ(static_cast<int>(build_square_array(r, c).cycle_basis().size()), r * c);
            EXPECT_EQ(static_cast<int>(build_tri_array(r, c).cycle_basis().size()), 2 * r * c);
            EXPECT_EQ(build_square_array(r, c).n(), (r + 1) * (c + 1));
            // Offset hex layout: 2(r+1)(c+1) - 2 corners.
            EXPECT_EQ(build_hex_array(r, c).n(), 2 * (r + 1) * (c + 1) - 2);
        }
    }
}

TEST(Arrays, RejectEmpty) {
    EXPECT_THROW(build_hex_array(0, 1), DomainError);
    EXPECT_THROW(build_square_array(1, 0), DomainError);
    EXPECT_THROW(build_tri_array(-1, 3), DomainError);
}

TEST(GraphInvariants, RejectsMalformedInput) {
    EXPECT_THROW(Graph(3, {{0, 0}, {0, 1}, {1, 2}}, {}), DomainError);             // self loop
    EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}, {1, 2}}, {}), DomainError);             // duplicate
    EXPECT_THROW(Graph(3, {{0, 1}, {1, 2}, {0, 2}}, {}), DomainError);             // basis too small
    EXPECT_THROW(Graph(4, {{0, 1}, {2, 3}}, {}), DomainError);                     // disconnected
    EXPECT_THROW(Graph(3, {{0, 1}, {1, 2}, {0, 2}}, {{0, 2, 1, 0}}), DomainError); // 0 -> 0 is not an edge
    EXPECT_NO_THROW(Graph(3, {{0, 1}, {1, 2}, {0, 2}}, {{0, 1, 2}}));
    EXPECT_THROW(Graph(3, {{0, 1}, {1, 2}, {0, 2}}, {{0, 1, 2}}, 0.0), DomainError);
}

TEST(GraphInvariants, EdgesSortedAndOriented) {
    const auto g = build_hex_array(3, 2);
    EXPECT_TRUE(std::is_sorted(g.edges().begin(), g.edges().end()));
    for (const auto& e : g.edges()) EXPECT_LT(e.u, e.v);
}

TEST(Topology, ParseAndBuild) {
    EXPECT_EQ(parse_topology("hex"), Topology::hex_array);
    EXPECT_EQ(parse_topology("honeycomb_chain"), Topology::honeycomb_chain);
    EXPECT_THROW(parse_topology("torus"), DomainError);
    EXPECT_EQ(build(TopologySpec{Topology::tri_array, 2, 2}), build_tri_array(2, 2));
    EXPECT_THROW(build(TopologySpec{Topology::honeycomb, 4, 2}), DomainError);
}
