// Oscillator network topologies: 1D honeycombs and planar lattice arrays.
//
// Nodes are 0-based inside the library; the JSON interchange format shifts
// them to 1-based ids (see io.hpp).

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kuramem/errors.hpp"

namespace kuramem {

/// Undirected edge stored with u < v. Orientation for the incidence matrix is u -> v.
struct Edge {
    int u = 0;
    int v = 0;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Closed walk through the listed nodes; the last node connects back to the first.
using Cycle = std::vector<int>;

enum class Topology { honeycomb, honeycomb_chain, hex_array, square_array, tri_array };

inline std::string_view to_string(Topology t) {
    switch (t) {
    case Topology::honeycomb: return "honeycomb";
    case Topology::honeycomb_chain: return "honeycomb_chain";
    case Topology::hex_array: return "hex";
    case Topology::square_array: return "square";
    case Topology::tri_array: return "tri";
    }
    return "?";
}

inline Topology parse_topology(std::string_view s) {
    if (s == "honeycomb") return Topology::honeycomb;
    if (s == "honeycomb_chain" || s == "chain") return Topology::honeycomb_chain;
    if (s == "hex" || s == "hex_array") return Topology::hex_array;
    if (s == "square" || s == "square_array") return Topology::square_array;
    if (s == "tri" || s == "tri_array") return Topology::tri_array;
    throw DomainError("unknown topology '" + std::string(s) + "'");
}

/// Topology family plus its two size parameters: (n_c, m) for honeycombs,
/// (rows, cols) for arrays.
struct TopologySpec {
    Topology kind = Topology::honeycomb;
    int p1 = 5;
    int p2 = 1;

    void validate() const {
        if (kind == Topology::honeycomb || kind == Topology::honeycomb_chain) {
            if (p1 < 5) throw DomainError("honeycomb requires n_c >= 5, got " + std::to_string(p1));
            if (p2 < 1) throw DomainError("honeycomb requires m >= 1, got " + std::to_string(p2));
        } else if (p1 < 1 || p2 < 1) {
            throw DomainError("array requires rows, cols >= 1");
        }
    }
};

/// Immutable uniformly weighted oscillator network with an ordered cycle basis.
class Graph {
public:
    Graph(int n, std::vector<Edge> edges, std::vector<Cycle> cycle_basis, double coupling = 1.0)
        : n_(n), coupling_(coupling), edges_(std::move(edges)), basis_(std::move(cycle_basis)) {
        if (n_ < 1) throw DomainError("graph needs at least one node");
        if (!(coupling_ > 0.0)) throw DomainError("coupling must be positive");
        for (auto& e : edges_) {
            if (e.u == e.v) throw DomainError("self-loop at node " + std::to_string(e.u + 1));
            if (e.u > e.v) std::swap(e.u, e.v);
            if (e.u < 0 || e.v >= n_) throw DomainError("edge endpoint out of range");
        }
        std::sort(edges_.begin(), edges_.end());
        if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
            throw DomainError("duplicate edge");

        neighbors_.assign(static_cast<std::size_t>(n_), {});
        for (const auto& e : edges_) {
            neighbors_[e.u].push_back(e.v);
            neighbors_[e.v].push_back(e.u);
        }
        for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());

        if (!connected()) throw DomainError("graph is not connected");
        const auto expected = static_cast<long>(edges_.size()) - n_ + 1;
        if (static_cast<long>(basis_.size()) != expected)
            throw DomainError("cycle basis has " + std::to_string(basis_.size()) + " cycles, expected " +
                              std::to_string(expected));
        for (const auto& c : basis_) {
            if (c.size() < 3) throw DomainError("basis cycle shorter than 3");
            for (std::size_t i = 0; i < c.size(); ++i) {
                const int a = c[i];
                const int b = c[(i + 1) % c.size()];
                if (a < 0 || a >= n_ || b < 0 || b >= n_ || !has_edge(a, b))
                    throw DomainError("basis cycle step is not an edge");
            }
        }
    }

    int n() const { return n_; }
    double coupling() const { return coupling_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Cycle>& cycle_basis() const { return basis_; }
    const std::vector<int>& neighbors(int i) const { return neighbors_[static_cast<std::size_t>(i)]; }

    bool has_edge(int a, int b) const {
        if (a > b) std::swap(a, b);
        return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
    }

    /// Column index of edge {a,b} in edges(); -1 when absent.
    int edge_index(int a, int b) const {
        if (a > b) std::swap(a, b);
        auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{a, b});
        if (it == edges_.end() || *it != Edge{a, b}) return -1;
        return static_cast<int>(it - edges_.begin());
    }

    /// Oriented node x edge incidence: -1 at the smaller id, +1 at the larger.
    Eigen::MatrixXd incidence() const {
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n_, static_cast<Eigen::Index>(edges_.size()));
        for (std::size_t k = 0; k < edges_.size(); ++k) {
            b(edges_[k].u, static_cast<Eigen::Index>(k)) = -1.0;
            b(edges_[k].v, static_cast<Eigen::Index>(k)) = 1.0;
        }
        return b;
    }

    /// Signed edge vector of a basis cycle: +1 where traversal follows the
    /// edge orientation, -1 where it runs against it. Lies in ker(B).
    Eigen::VectorXd cycle_edge_vector(std::size_t cycle) const {
        Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(edges_.size()));
        const auto& c = basis_.at(cycle);
        for (std::size_t i = 0; i < c.size(); ++i) {
            const int a = c[i];
            const int b = c[(i + 1) % c.size()];
            z(edge_index(a, b)) += (a < b) ? 1.0 : -1.0;
        }
        return z;
    }

    bool operator==(const Graph& o) const {
        return n_ == o.n_ && coupling_ == o.coupling_ && edges_ == o.edges_ && basis_ == o.basis_;
    }

private:
    bool connected() const {
        std::vector<char> seen(static_cast<std::size_t>(n_), 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        int count = 1;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int v : neighbors_[u]) {
                if (!seen[v]) {
                    seen[v] = 1;
                    ++count;
                    q.push(v);
                }
            }
        }
        return count == n_;
    }

    int n_;
    double coupling_;
    std::vector<Edge> edges_;
    std::vector<Cycle> basis_;
    std::vector<std::vector<int>> neighbors_;
};

inline std::vector<int> degrees(const Graph& g) {
    std::vector<int> d(static_cast<std::size_t>(g.n()), 0);
    for (const auto& e : g.edges()) {
        ++d[e.u];
        ++d[e.v];
    }
    return d;
}

/// Chain of m cycles of n_c nodes where consecutive cycles share one node.
///
/// Node p(n_c-1) (0-based) starts cycle p; path edges (i, i+1) run along all
/// nodes and a chord closes each cycle. Cycle p is traversed along the path
/// and back over its chord.
inline Graph build_honeycomb(int n_c, int m, double coupling = 1.0) {
    TopologySpec{Topology::honeycomb, n_c, m}.validate();
    const int n = m * (n_c - 1) + 1;
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m * n_c));
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    std::vector<Cycle> basis;
    for (int p = 0; p < m; ++p) {
        const int s = p * (n_c - 1);
        edges.push_back({s, s + n_c - 1});
        Cycle c(static_cast<std::size_t>(n_c));
        std::iota(c.begin(), c.end(), s);
        basis.push_back(std::move(c));
    }
    return Graph(n, std::move(edges), std::move(basis), coupling);
}

/// Cycles glued at single nodes, each junction floor(n_c/2) steps around its
/// cycle from the previous one, so no two junctions are adjacent and every
/// edge has an endpoint of degree 2.
inline Graph build_honeycomb_chain(int n_c, int m, double coupling = 1.0) {
    TopologySpec{Topology::honeycomb_chain, n_c, m}.validate();
    const int offset = n_c / 2;
    std::vector<Edge> edges;
    std::vector<Cycle> basis;
    int next_id = 0;
    int junction = next_id++;
    for (int p = 0; p < m; ++p) {
        Cycle c{junction};
        for (int l = 1; l < n_c; ++l) c.push_back(next_id++);
        for (int l = 0; l < n_c; ++l) edges.push_back({c[l], c[(l + 1) % n_c]});
        junction = c[offset];
        basis.push_back(std::move(c));
    }
    return Graph(next_id, std::move(edges), std::move(basis), coupling);
}

namespace detail {

// Builds a graph from polygon faces given as integer lattice corner
// coordinates. Corners are deduplicated and numbered in (y, x) order.
inline Graph graph_from_faces(const std::vector<std::vector<std::array<int, 2>>>& faces, double coupling) {
    std::map<std::pair<int, int>, int> ids;
    for (const auto& f : faces)
        for (const auto& p : f) ids.emplace(std::pair{p[1], p[0]}, 0);
    int next = 0;
    for (auto& [key, id] : ids) id = next++;

    std::set<Edge> edge_set;
    std::vector<Cycle> basis;
    for (const auto& f : faces) {
        Cycle c;
        for (const auto& p : f) c.push_back(ids.at({p[1], p[0]}));
        for (std::size_t i = 0; i < c.size(); ++i) {
            int a = c[i], b = c[(i + 1) % c.size()];
            if (a > b) std::swap(a, b);
            edge_set.insert({a, b});
        }
        basis.push_back(std::move(c));
    }
    return Graph(next, {edge_set.begin(), edge_set.end()}, std::move(basis), coupling);
}

inline void check_array(int rows, int cols) {
    if (rows < 1 || cols < 1)
        throw DomainError("array requires rows, cols >= 1, got " + std::to_string(rows) + "x" +
                          std::to_string(cols));
}

} // namespace detail

/// Rows x cols pointy-top hexagons in offset layout (odd rows shifted right).
inline Graph build_hex_array(int rows, int cols, double coupling = 1.0) {
    detail::check_array(rows, cols);
    // x in units of sqrt(3)/2, y in units of 1/2; corners counter-clockwise.
    static constexpr std::array<std::array<int, 2>, 6> corner{
        {{1, -1}, {1, 1}, {0, 2}, {-1, 1}, {-1, -1}, {0, -2}}};
    std::vector<std::vector<std::array<int, 2>>> faces;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int cx = 2 * c + (r % 2);
            const int cy = 3 * r;
            std::vector<std::array<int, 2>> f;
            for (const auto& d : corner) f.push_back({cx + d[0], cy + d[1]});
            faces.push_back(std::move(f));
        }
    }
    return detail::graph_from_faces(faces, coupling);
}

inline Graph build_square_array(int rows, int cols, double coupling = 1.0) {
    detail::check_array(rows, cols);
    std::vector<std::vector<std::array<int, 2>>> faces;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            faces.push_back({{c, r}, {c + 1, r}, {c + 1, r + 1}, {c, r + 1}});
    return detail::graph_from_faces(faces, coupling);
}

/// Square grid with every cell split along its (c,r)-(c+1,r+1) diagonal.
inline Graph build_tri_array(int rows, int cols, double coupling = 1.0) {
    detail::check_array(rows, cols);
    std::vector<std::vector<std::array<int, 2>>> faces;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            faces.push_back({{c, r}, {c + 1, r}, {c + 1, r + 1}});
            faces.push_back({{c, r}, {c + 1, r + 1}, {c, r + 1}});
        }
    }
    return detail::graph_from_faces(faces, coupling);
}

inline Graph build(const TopologySpec& spec, double coupling = 1.0) {
    spec.validate();
    switch (spec.kind) {
    case Topology::honeycomb: return build_honeycomb(spec.p1, spec.p2, coupling);
    case Topology::honeycomb_chain: return build_honeycomb_chain(spec.p1, spec.p2, coupling);
    case Topology::hex_array: return build_hex_array(spec.p1, spec.p2, coupling);
    case Topology::square_array: return build_square_array(spec.p1, spec.p2, coupling);
    case Topology::tri_array: return build_tri_array(spec.p1, spec.p2, coupling);
    }
    throw DomainError("unknown topology");
}

} // namespace kuramem
