// kuramem command-line front end.
//
// Exit codes: 1 I/O, 2 domain/invalid input, 3 enumeration budget exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "kuramem/io.hpp"
#include "kuramem/kuramem.hpp"
#include "kuramem/plot.hpp"

using namespace kuramem;

namespace {

struct Common {
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned jobs = 1;
    std::string solver = "flow";

    std::uint64_t resolved_seed() const {
        if (seed_given) return seed;
        if (const char* env = std::getenv("KURAMEM_SEED")) {
            try {
                std::size_t used = 0;
                const auto v = std::stoull(env, &used);
                if (used != std::string(env).size()) throw std::invalid_argument("trailing");
                return v;
            } catch (const std::exception&) {
                throw DomainError(std::string("KURAMEM_SEED is not an unsigned integer: ") + env);
            }
        }
        return 0;
    }

    SolveOptions solve() const {
        SolveOptions s;
        s.flow_solve = solver == "flow";
        s.seed = resolved_seed();
        return s;
    }
};

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else write_text_file(path, text);
}

// Recovers (n_c, m) from a graph file that holds a 1D honeycomb.
std::pair<int, int> honeycomb_shape(const Graph& g) {
    const auto& basis = g.cycle_basis();
    if (basis.empty()) throw DomainError("graph has no cycles; expected a 1D honeycomb");
    const int n_c = static_cast<int>(basis.front().size());
    const int m = static_cast<int>(basis.size());
    if (n_c < 5 || g.n() != m * (n_c - 1) + 1) throw DomainError("graph is not a 1D honeycomb");
    const Graph ref = build_honeycomb(n_c, m, g.coupling());
    if (!(ref == g)) throw DomainError("graph is not a 1D honeycomb in standard numbering");
    return {n_c, m};
}

std::string capacity_csv(const std::string& kind, int p1, int p2, int n, const std::string& mode,
                         const CapacityEstimate& c, double wall_ms) {
    ExperimentRow row;
    row.n_nodes = n;
    row.param1 = p1;
    row.param2 = p2;
    row.mode = mode;
    row.result = c;
    row.wall_ms = wall_ms;
    std::ostringstream os;
    write_results_csv(os, {row});
    // write_results_csv writes the enum topology name; patch in the label we were given.
    std::string text = os.str();
    const auto nl = text.find('\n');
    const auto comma = text.find(',', nl + 1);
    return text.substr(0, nl + 1) + kind + text.substr(comma);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kuramoto oscillator associative memory"};
    app.require_subcommand(1);
    Common common;
    app.add_option_function<std::uint64_t>(
           "--seed", [&](const std::uint64_t& s) { common.seed = s, common.seed_given = true; },
           "random seed (overrides KURAMEM_SEED)")
        ->type_name("UINT");
    app.add_option("--jobs", common.jobs, "worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--solver", common.solver, "winding solver")
        ->check(CLI::IsMember({"flow", "descent"}))
        ->capture_default_str();
    app.fallthrough();

    // build
    auto* build_cmd = app.add_subcommand("build", "write a graph JSON file");
    std::string topology = "honeycomb", out_path;
    int nc = 5, m = 1, rows = 1, cols = 1;
    double coupling = 1.0;
    build_cmd->add_option("--topology", topology, "honeycomb|honeycomb_chain|hex|square|tri")->capture_default_str();
    build_cmd->add_option("--nc", nc, "nodes per cycle")->capture_default_str();
    build_cmd->add_option("--m", m, "number of cycles")->capture_default_str();
    build_cmd->add_option("--rows", rows, "array rows")->capture_default_str();
    build_cmd->add_option("--cols", cols, "array columns")->capture_default_str();
    build_cmd->add_option("--coupling", coupling, "coupling strength c > 0")->capture_default_str();
    build_cmd->add_option("-o,--output", out_path, "output path (stdout if omitted)");

    // enumerate
    auto* enum_cmd = app.add_subcommand("enumerate", "all stable phase-cohesive equilibria of a graph");
    std::string graph_path;
    std::uint64_t budget = EnumerateOptions{}.budget;
    enum_cmd->add_option("--graph", graph_path, "graph JSON")->required();
    enum_cmd->add_option("--budget", budget, "largest winding box to enumerate")->capture_default_str();
    enum_cmd->add_option("-o,--output", out_path, "output path (stdout if omitted)");

    // capacity
    auto* cap_cmd = app.add_subcommand("capacity", "count stable configurations (CSV row)");
    bool exact = false;
    std::uint64_t samples = 0;
    cap_cmd->add_option("--topology", topology, "honeycomb|honeycomb_chain|hex|square|tri");
    cap_cmd->add_option("--nc", nc, "nodes per cycle");
    cap_cmd->add_option("--m", m, "number of cycles");
    cap_cmd->add_option("--rows", rows, "array rows");
    cap_cmd->add_option("--cols", cols, "array columns");
    auto* cap_graph = cap_cmd->add_option("--graph", graph_path, "graph JSON instead of topology flags");
    auto* exact_flag = cap_cmd->add_flag("--exact", exact, "enumerate the whole winding box");
    auto* sample_opt = cap_cmd->add_option("--sample", samples, "estimate from N uniform winding samples");
    exact_flag->excludes(sample_opt);
    cap_cmd->add_option("--budget", budget, "largest winding box to enumerate")->capture_default_str();
    cap_cmd->add_option("-o,--output", out_path, "output path (stdout if omitted)");

    // store
    auto* store_cmd = app.add_subcommand("store", "phase configuration for a bit pattern");
    std::string pattern;
    store_cmd->add_option("--nc", nc, "nodes per cycle")->capture_default_str();
    store_cmd->add_option("--m", m, "number of cycles")->capture_default_str();
    store_cmd->add_option("--pattern", pattern, "bits, most significant first")->required();
    store_cmd->add_option("-o,--output", out_path, "output path (stdout if omitted)");

    // retrieve
    auto* ret_cmd = app.add_subcommand("retrieve", "recall a stored pattern from a perturbed state");
    double noise = 0.0;
    std::string init_path;
    ret_cmd->add_option("--graph", graph_path, "honeycomb graph JSON")->required();
    auto* ret_pattern = ret_cmd->add_option("--pattern", pattern, "stored pattern to perturb");
    auto* ret_init = ret_cmd->add_option("--init", init_path, "initial phases JSON instead of a pattern");
    ret_pattern->excludes(ret_init);
    ret_cmd->add_option("--noise", noise, "uniform perturbation amplitude (rad)")->capture_default_str();

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "integrate the phase dynamics and dump a trajectory");
    std::string init = "random";
    IntegrateOptions iopt;
    long stride = 100;
    sim_cmd->add_option("--graph", graph_path, "graph JSON")->required();
    sim_cmd->add_option("--init", init, "phases JSON file, or 'random'")->capture_default_str();
    sim_cmd->add_option("--dt", iopt.dt, "RK4 step")->capture_default_str();
    sim_cmd->add_option("--tmax", iopt.t_max, "time limit")->capture_default_str();
    sim_cmd->add_option("--stride", stride, "write every N-th step")->capture_default_str();
    sim_cmd->add_option("-o,--output", out_path, "trajectory CSV (stdout if omitted)");

    // audit
    auto* audit_cmd = app.add_subcommand("audit", "search for stable states outside the enumerated set");
    int trials = 1000;
    audit_cmd->add_option("--graph", graph_path, "graph JSON")->required();
    audit_cmd->add_option("--trials", trials, "random initial states")->capture_default_str();
    audit_cmd->add_option("-o,--output", out_path, "report path (stdout if omitted)");

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "capacity sweep over topology families");
    std::string config_path;
    exp_cmd->add_option("--config", config_path, "experiment JSON")->required();
    exp_cmd->add_option("-o,--output", out_path, "results CSV (stdout if omitted)");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "log-scale capacity plot from results CSV");
    std::string results_path;
    plot_cmd->add_option("--results", results_path, "results CSV")->required();
    plot_cmd->add_option("-o,--output", out_path, "SVG path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const SolveOptions solve = common.solve();
        const std::uint64_t seed = solve.seed;

        if (*build_cmd) {
            const Topology kind = parse_topology(topology);
            const bool cyc = kind == Topology::honeycomb || kind == Topology::honeycomb_chain;
            TopologySpec spec{kind, cyc ? nc : rows, cyc ? m : cols};
            Graph g = build(spec);
            if (coupling != 1.0) g = Graph(g.n(), g.edges(), g.cycle_basis(), coupling);
            emit(out_path, graph_to_json(g).dump(2) + "\n");
        } else if (*enum_cmd) {
            const Graph g = read_graph(graph_path);
            EnumerateOptions eo{budget, common.jobs, solve};
            emit(out_path, equilibria_to_json(g, enumerate_exact(g, eo)).dump(2) + "\n");
        } else if (*cap_cmd) {
            if (exact == (samples > 0)) throw DomainError("capacity needs exactly one of --exact or --sample N");
            std::string label;
            int p1 = 0, p2 = 0;
            std::optional<Graph> g;
            if (*cap_graph) {
                g = read_graph(graph_path);
                label = "graph";
            } else {
                const Topology kind = parse_topology(topology);
                const bool cyc = kind == Topology::honeycomb || kind == Topology::honeycomb_chain;
                p1 = cyc ? nc : rows;
                p2 = cyc ? m : cols;
                g = build(TopologySpec{kind, p1, p2});
                label = std::string(to_string(kind));
            }
            EnumerateOptions eo{budget, common.jobs, solve};
            const auto start = std::chrono::steady_clock::now();
            const auto c = exact ? count_exact(*g, eo) : sample_estimate(*g, samples, seed, eo);
            const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            emit(out_path, capacity_csv(label, p1, p2, g->n(), exact ? "exact" : "sampled", c, ms));
        } else if (*store_cmd) {
            const PatternCodec codec(nc, m);
            const auto bits = BinaryPattern::parse(pattern);
            json j;
            j["nc"] = nc;
            j["m"] = m;
            j["pattern"] = bits.str();
            j["winding"] = codec.decode(bits);
            j["theta"] = phases_to_json(store(bits, codec));
            emit(out_path, j.dump(2) + "\n");
        } else if (*ret_cmd) {
            const Graph g = read_graph(graph_path);
            const auto [n_c, mm] = honeycomb_shape(g);
            const PatternCodec codec(n_c, mm);
            Phases theta0;
            if (!init_path.empty()) {
                theta0 = phases_from_json(read_json_file(init_path));
                if (theta0.size() != g.n()) throw DomainError("initial phases do not match graph size");
            } else if (!pattern.empty()) {
                theta0 = store(BinaryPattern::parse(pattern), codec);
            } else {
                throw DomainError("retrieve needs --pattern or --init");
            }
            if (noise < 0) throw DomainError("noise amplitude must be >= 0");
            Rng rng(seed);
            for (Eigen::Index i = 0; i < theta0.size(); ++i) theta0(i) += rng.uniform(-noise, noise);
            const auto r = retrieve(theta0, codec, g);
            std::cout << r.pattern.str() << '\n';
            const auto& d = r.diagnostics;
            std::cout << std::setprecision(17);
            std::cout << "t_converged: " << d.t_converged << '\n';
            std::cout << "residual: " << d.residual << '\n';
            std::cout << "cohesive: " << (d.cohesive ? "true" : "false") << '\n';
            std::cout << "winding:";
            for (int k : d.winding) std::cout << ' ' << k;
            std::cout << '\n';
        } else if (*sim_cmd) {
            const Graph g = read_graph(graph_path);
            Phases theta0(g.n());
            if (init == "random") {
                Rng rng(seed);
                for (Eigen::Index i = 0; i < theta0.size(); ++i) theta0(i) = pi - two_pi * rng.uniform01();
            } else {
                theta0 = phases_from_json(read_json_file(init));
                if (theta0.size() != g.n()) throw DomainError("initial phases do not match graph size");
            }
            if (!(iopt.dt > 0) || !(iopt.t_max > 0)) throw DomainError("dt and tmax must be positive");
            std::ostringstream os;
            TrajectoryWriter writer(os, g.n(), stride);
            const auto run = integrate(theta0, g, {}, iopt, std::ref(writer));
            emit(out_path, os.str());
            std::cerr << "converged: " << (run.converged ? "true" : "false") << " t: " << run.t_elapsed
                      << " residual: " << run.residual << '\n';
        } else if (*audit_cmd) {
            const Graph g = read_graph(graph_path);
            EnumerateOptions eo{budget, common.jobs, solve};
            const auto known = enumerate_exact(g, eo);
            AuditOptions ao;
            ao.jobs = common.jobs;
            const auto rep = audit_spurious(g, known, trials, seed, ao);
            std::ostringstream os;
            os << "trials: " << rep.trials << '\n';
            os << "known: " << known.size() << '\n';
            os << "matched: " << rep.total_matched() << '\n';
            os << "nonconverged: " << rep.nonconverged << '\n';
            os << "unstable: " << rep.unstable.size() << '\n';
            os << "unmatched: " << rep.unmatched.size() << '\n';
            for (const auto& u : rep.unmatched) {
                os << "  spurious winding:";
                for (int k : u.winding) os << ' ' << k;
                os << '\n';
            }
            emit(out_path, os.str());
        } else if (*exp_cmd) {
            auto cfg = experiment_from_json(read_json_file(config_path));
            if (common.seed_given || std::getenv("KURAMEM_SEED")) cfg.seed = seed;
            if (app.get_option("--jobs")->count() > 0) cfg.jobs = common.jobs;
            cfg.solve.flow_solve = solve.flow_solve;
            std::ostringstream os;
            const auto rows_out = run_experiment(cfg);
            write_results_csv(os, rows_out);
            emit(out_path, os.str());
            for (const auto& r : rows_out)
                if (r.mode == "error")
                    std::cerr << "row " << to_string(r.kind) << ' ' << r.param1 << ' ' << r.param2 << ": " << r.error
                              << '\n';
        } else if (*plot_cmd) {
            std::ifstream in(results_path);
            if (!in) throw IoError("cannot open " + results_path);
            emit(out_path, render_capacity_svg(read_results_csv(in)));
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
