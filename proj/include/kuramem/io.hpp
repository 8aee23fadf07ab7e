// File formats: graph / equilibria JSON, results and trajectory CSV,
// experiment configuration.
//
// JSON node ids are 1-based; everything in memory is 0-based.

#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "kuramem/capacity.hpp"
#include "kuramem/equilibria.hpp"
#include "kuramem/errors.hpp"
#include "kuramem/graph.hpp"

namespace kuramem {

/// Unreadable or unwritable file (CLI exit code 1).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using json = nlohmann::ordered_json;

inline json graph_to_json(const Graph& g) {
    json edges = json::array();
    for (const auto& e : g.edges()) edges.push_back({e.u + 1, e.v + 1});
    json basis = json::array();
    for (const auto& c : g.cycle_basis()) {
        json cyc = json::array();
        for (int v : c) cyc.push_back(v + 1);
        basis.push_back(std::move(cyc));
    }
    json j;
    j["n"] = g.n();
    j["coupling_c"] = g.coupling();
    j["edges"] = std::move(edges);
    j["cycle_basis"] = std::move(basis);
    return j;
}

inline Graph graph_from_json(const json& j) {
    try {
        const int n = j.at("n").get<int>();
        const double c = j.contains("coupling_c") ? j.at("coupling_c").get<double>() : 1.0;
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (e.size() != 2) throw DomainError("edge must have two endpoints");
            edges.push_back({e[0].get<int>() - 1, e[1].get<int>() - 1});
        }
        std::vector<Cycle> basis;
        for (const auto& cyc : j.at("cycle_basis")) {
            Cycle cy;
            for (const auto& v : cyc) cy.push_back(v.get<int>() - 1);
            basis.push_back(std::move(cy));
        }
        return Graph(n, std::move(edges), std::move(basis), c);
    } catch (const json::exception& e) {
        throw DomainError(std::string("malformed graph json: ") + e.what());
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DomainError("invalid json in " + path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

inline Graph read_graph(const std::string& path) { return graph_from_json(read_json_file(path)); }

inline void write_graph(const std::string& path, const Graph& g) { write_text_file(path, graph_to_json(g).dump(2) + "\n"); }

inline json phases_to_json(const Phases& theta) {
    json a = json::array();
    for (double x : theta) a.push_back(x);
    return a;
}

inline Phases phases_from_json(const json& j) {
    const json& arr = j.is_object() ? j.at("theta") : j;
    Phases theta(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) theta(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
    return theta;
}

inline json equilibria_to_json(const Graph& g, const std::vector<Equilibrium>& eqs) {
    json list = json::array();
    for (const auto& e : eqs) {
        json item;
        item["winding"] = e.winding;
        item["theta"] = phases_to_json(e.state);
        item["eigen_max_nonzero"] = e.verdict.max_nonzero();
        item["cohesive"] = e.cohesive;
        list.push_back(std::move(item));
    }
    json j;
    j["graph"] = graph_to_json(g);
    j["equilibria"] = std::move(list);
    return j;
}

namespace detail {
inline std::string fmt17(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}
} // namespace detail

inline constexpr const char* results_header = "topology,param1,param2,n_nodes,mode,count,ci_low,ci_high,samples,seed,wall_ms";

inline void write_results_csv(std::ostream& os, const std::vector<ExperimentRow>& rows) {
    os << results_header << '\n';
    for (const auto& r : rows) {
        os << to_string(r.kind) << ',' << r.param1 << ',' << r.param2 << ',' << r.n_nodes << ',' << r.mode << ',';
        if (r.mode == "error") {
            os << ",,," << ',' << r.result.seed << ',';
        } else {
            const auto& c = r.result;
            if (c.exact) os << *c.exact;
            else os << detail::fmt17(c.value());
            os << ',' << detail::fmt17(c.ci_low) << ',' << detail::fmt17(c.ci_high) << ',' << c.samples << ',' << c.seed
               << ',';
        }
        os << std::fixed << std::setprecision(3) << r.wall_ms << std::defaultfloat << '\n';
    }
}

/// A results row as read back for plotting.
struct ResultRecord {
    std::string topology;
    int param1 = 0;
    int param2 = 0;
    int n_nodes = 0;
    std::string mode;
    double count = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

inline std::vector<ResultRecord> read_results_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != results_header) throw DomainError("results csv has an unexpected header");
    std::vector<ResultRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() < 8) throw DomainError("short results row: " + line);
        ResultRecord r;
        r.topology = f[0];
        r.mode = f[4];
        try {
            r.param1 = std::stoi(f[1]);
            r.param2 = std::stoi(f[2]);
            r.n_nodes = std::stoi(f[3]);
            if (r.mode == "error") continue;
            r.count = std::stod(f[5]);
            r.ci_low = std::stod(f[6]);
            r.ci_high = std::stod(f[7]);
        } catch (const std::exception&) {
            throw DomainError("bad number in results row: " + line);
        }
        out.push_back(r);
    }
    return out;
}

/// Writes `t,theta_1,...,theta_n` rows.
class TrajectoryWriter {
public:
    TrajectoryWriter(std::ostream& os, int n, long stride) : os_(os), stride_(std::max(1L, stride)) {
        os_ << 't';
        for (int i = 1; i <= n; ++i) os_ << ",theta_" << i;
        os_ << '\n';
        os_ << std::setprecision(17);
    }

    void operator()(double t, const Phases& theta) {
        if (count_++ % stride_ != 0) return;
        os_ << t;
        for (double x : theta) os_ << ',' << x;
        os_ << '\n';
    }

private:
    std::ostream& os_;
    long stride_;
    long count_ = 0;
};

inline ExperimentConfig experiment_from_json(const json& j) {
    try {
        ExperimentConfig cfg;
        cfg.seed = j.value("seed", std::uint64_t{0});
        cfg.samples = j.value("samples", cfg.samples);
        cfg.exact_threshold = j.value("exact_threshold", cfg.exact_threshold);
        cfg.jobs = j.value("jobs", cfg.jobs);
        if (j.contains("retries")) cfg.solve.retries = j.at("retries").get<int>();
        for (const auto& f : j.at("families")) {
            ExperimentFamily fam;
            fam.kind = parse_topology(f.at("topology").get<std::string>());
            if (fam.kind == Topology::honeycomb || fam.kind == Topology::honeycomb_chain) {
                const int nc = f.at("nc").get<int>();
                if (f.contains("m_range")) {
                    const auto& r = f.at("m_range");
                    for (int m = r.at(0).get<int>(); m <= r.at(1).get<int>(); ++m) fam.sizes.emplace_back(nc, m);
                } else {
                    for (const auto& m : f.at("m")) fam.sizes.emplace_back(nc, m.get<int>());
                }
            } else {
                for (const auto& s : f.at("sizes")) fam.sizes.emplace_back(s.at(0).get<int>(), s.at(1).get<int>());
            }
            cfg.families.push_back(std::move(fam));
        }
        return cfg;
    } catch (const json::exception& e) {
        throw DomainError(std::string("malformed experiment config: ") + e.what());
    }
}

} // namespace kuramem
