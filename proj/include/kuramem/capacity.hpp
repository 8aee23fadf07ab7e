// Counting stable phase-cohesive configurations: exhaustive over the winding
// box, or by uniform sampling with a Wilson score interval.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kuramem/equilibria.hpp"
#include "kuramem/graph.hpp"
#include "kuramem/parallel.hpp"
#include "kuramem/random.hpp"

namespace kuramem {

/// Two-sided 95% normal quantile.
inline constexpr double z95 = 1.959963984540054;

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// Wilson score interval for a binomial proportion hits/samples.
inline Interval wilson_interval(std::uint64_t hits, std::uint64_t samples, double z = z95) {
    if (samples == 0 || hits > samples) throw DomainError("wilson interval needs 0 <= hits <= samples, samples >= 1");
    const double n = static_cast<double>(samples);
    const double p = static_cast<double>(hits) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::clamp(std::min(center - half, p), 0.0, 1.0), std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

/// Winding box cardinality as a double, usable beyond 64-bit range.
inline double box_volume(const Graph& g) {
    double v = 1.0;
    for (int k : winding_bounds(g)) v *= 2.0 * k + 1.0;
    return v;
}

struct CapacityEstimate {
    std::optional<std::uint64_t> exact;
    std::optional<double> estimate;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
    double box_size = 0.0; // exact for boxes below 2^53
    std::uint64_t seed = 0;

    /// Exact count when known, else the sampled estimate.
    double value() const { return exact ? static_cast<double>(*exact) : estimate.value_or(0.0); }
};

inline CapacityEstimate count_exact(const Graph& g, const EnumerateOptions& opt = {}) {
    const auto found = enumerate_exact(g, opt);
    CapacityEstimate c;
    c.exact = found.size();
    c.estimate = static_cast<double>(found.size());
    c.ci_low = c.ci_high = static_cast<double>(found.size());
    c.box_size = box_volume(g);
    c.samples = static_cast<std::uint64_t>(c.box_size);
    c.hits = found.size();
    c.seed = opt.solve.seed;
    return c;
}

/// Draws `samples` winding vectors uniformly with replacement from the box
/// and tests each with winding_constrained_solve. Sample i uses a generator
/// seeded by mix_seed(seed, i); repeated vectors are solved once.
inline CapacityEstimate sample_estimate(const Graph& g, std::uint64_t samples, std::uint64_t seed,
                                        const EnumerateOptions& opt = {}) {
    if (samples < 1) throw DomainError("sample count must be >= 1");
    const auto bounds = winding_bounds(g);
    std::vector<WindingVector> draws(samples);
    for (std::uint64_t i = 0; i < samples; ++i) {
        Rng rng(mix_seed(seed, i));
        WindingVector w(bounds.size());
        for (std::size_t s = 0; s < bounds.size(); ++s)
            w[s] = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * bounds[s] + 1))) - bounds[s];
        draws[i] = std::move(w);
    }

    std::map<WindingVector, char> hit_of;
    for (const auto& w : draws) hit_of.emplace(w, 0);
    std::vector<const WindingVector*> unique;
    for (auto& [w, h] : hit_of) unique.push_back(&w);
    std::vector<char> hit(unique.size(), 0);
    parallel_for(unique.size(), opt.jobs, [&](std::size_t i) {
        hit[i] = winding_constrained_solve(g, *unique[i], opt.solve).has_value();
    });
    for (std::size_t i = 0; i < unique.size(); ++i) hit_of[*unique[i]] = hit[i];

    CapacityEstimate c;
    for (const auto& w : draws) c.hits += static_cast<std::uint64_t>(hit_of[w]);
    c.samples = samples;
    c.seed = seed;
    c.box_size = box_volume(g);
    c.estimate = c.box_size * static_cast<double>(c.hits) / static_cast<double>(samples);
    const auto ci = wilson_interval(c.hits, samples);
    c.ci_low = c.box_size * ci.low;
    c.ci_high = c.box_size * ci.high;
    return c;
}

struct ExperimentFamily {
    Topology kind = Topology::honeycomb;
    std::vector<std::pair<int, int>> sizes; // (n_c, m) or (rows, cols)
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::uint64_t samples = 2000;
    double exact_threshold = 1e5; // largest box enumerated exhaustively
    unsigned jobs = 1;
    std::vector<ExperimentFamily> families;
    SolveOptions solve{};
};

struct ExperimentRow {
    Topology kind = Topology::honeycomb;
    int param1 = 0;
    int param2 = 0;
    int n_nodes = 0;
    std::string mode; // exact | sampled | error
    CapacityEstimate result;
    std::string error;
    double wall_ms = 0.0;
};

/// One row per (family, size). Row r samples with seed mix_seed(config.seed, r).
/// A failing row is recorded with mode "error" and the sweep continues.
inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
    std::vector<ExperimentRow> rows;
    for (const auto& fam : cfg.families) {
        for (const auto& [a, b] : fam.sizes) {
            ExperimentRow row;
            row.kind = fam.kind;
            row.param1 = a;
            row.param2 = b;
            const std::uint64_t row_seed = mix_seed(cfg.seed, rows.size());
            const auto start = std::chrono::steady_clock::now();
            try {
                const Graph g = build(TopologySpec{fam.kind, a, b});
                row.n_nodes = g.n();
                EnumerateOptions eo;
                eo.jobs = cfg.jobs;
                eo.solve = cfg.solve;
                if (box_volume(g) <= cfg.exact_threshold) {
                    row.mode = "exact";
                    row.result = count_exact(g, eo);
                    row.result.seed = row_seed;
                } else {
                    row.mode = "sampled";
                    eo.solve.seed = row_seed;
                    row.result = sample_estimate(g, cfg.samples, row_seed, eo);
                }
            } catch (const std::exception& e) {
                row.mode = "error";
                row.error = e.what();
                row.result = CapacityEstimate{};
                row.result.seed = row_seed;
            }
            row.wall_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

} // namespace kuramem
