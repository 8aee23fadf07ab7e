// Phase-locked configurations: analytic construction on honeycombs, winding
// vectors, per-winding equilibrium solve, exhaustive enumeration and the
// random-restart audit for spurious attractors.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kuramem/dynamics.hpp"
#include "kuramem/errors.hpp"
#include "kuramem/graph.hpp"
#include "kuramem/parallel.hpp"
#include "kuramem/random.hpp"

namespace kuramem {

/// One winding number per basis cycle, in cycle_basis() order.
using WindingVector = std::vector<int>;

struct Equilibrium {
    Phases state; // canonical form
    WindingVector winding;
    StabilityVerdict verdict;
    bool cohesive = false;
    double residual = 0.0;
};

/// Largest admissible |w| on a cycle with `cycle_edges` edges: ceil(n/4) - 1.
inline int winding_bound(int cycle_edges) { return (cycle_edges + 3) / 4 - 1; }

inline std::vector<int> winding_bounds(const Graph& g) {
    std::vector<int> k;
    for (const auto& c : g.cycle_basis()) k.push_back(winding_bound(static_cast<int>(c.size())));
    return k;
}

/// Number of winding vectors in the admissible box, saturating at UINT64_MAX.
inline std::uint64_t box_size(const Graph& g) {
    std::uint64_t total = 1;
    for (int k : winding_bounds(g)) {
        const auto b = static_cast<std::uint64_t>(2 * k + 1);
        if (total > std::numeric_limits<std::uint64_t>::max() / b) return std::numeric_limits<std::uint64_t>::max();
        total *= b;
    }
    return total;
}

inline bool in_box(std::span<const int> w, std::span<const int> bounds) {
    if (w.size() != bounds.size()) return false;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (std::abs(w[i]) > bounds[i]) return false;
    return true;
}

/// Mixed-radix decoding of a box index; the first cycle is the most significant digit.
inline WindingVector box_element(std::uint64_t index, std::span<const int> bounds) {
    WindingVector w(bounds.size());
    for (std::size_t i = bounds.size(); i-- > 0;) {
        const auto b = static_cast<std::uint64_t>(2 * bounds[i] + 1);
        w[i] = static_cast<int>(index % b) - bounds[i];
        index /= b;
    }
    return w;
}

/// Every edge difference satisfies |wrap(theta_u - theta_v)| < pi/2.
inline bool is_phase_cohesive(const Phases& theta, const Graph& g) {
    detail::check_size(theta, g);
    constexpr double limit = pi / 2 - 1e-12;
    for (const auto& e : g.edges())
        if (!(std::abs(wrap_angle(theta(e.u) - theta(e.v))) < limit)) return false;
    return true;
}

/// Winding number of each basis cycle: the wrapped phase drop
/// wrap(theta_a - theta_b) summed over traversal steps a -> b, over 2*pi.
/// With this sign, a cycle whose phases decrease by 2*pi*k/n_c per step
/// along its stored order has winding k.
inline WindingVector winding_vector(const Phases& theta, const Graph& g) {
    detail::check_size(theta, g);
    if (!theta.allFinite()) throw DomainError("non-finite phases");
    WindingVector w;
    w.reserve(g.cycle_basis().size());
    for (const auto& c : g.cycle_basis()) {
        double sum = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) sum += wrap_angle(theta(c[i]) - theta(c[(i + 1) % c.size()]));
        const double turns = sum / two_pi;
        const double rounded = std::round(turns);
        if (std::abs(turns - rounded) >= 1e-6) throw WindingError("non-integer winding number " + std::to_string(turns));
        w.push_back(static_cast<int>(rounded));
    }
    return w;
}

/// The honeycomb(n_c, m) configuration in which every path edge of cycle p
/// carries the drop theta_i - theta_{i+1} = 2*pi*k_p/n_c.
inline Phases construct_config(std::span<const int> k, int n_c, int m) {
    TopologySpec{Topology::honeycomb, n_c, m}.validate();
    if (static_cast<int>(k.size()) != m)
        throw DomainError("winding vector has " + std::to_string(k.size()) + " entries, expected " + std::to_string(m));
    const int bound = winding_bound(n_c);
    for (int kp : k)
        if (std::abs(kp) > bound)
            throw DomainError("winding entry " + std::to_string(kp) + " outside [-" + std::to_string(bound) + ", " +
                              std::to_string(bound) + "]");
    Phases theta(m * (n_c - 1) + 1);
    theta(0) = 0.0;
    for (int p = 0; p < m; ++p) {
        const int s = p * (n_c - 1);
        const double drop = two_pi * k[p] / n_c;
        for (int i = 1; i < n_c; ++i) theta(s + i) = theta(s) - i * drop;
    }
    return canonical(theta);
}

/// Energy change f(to) - f(from) written with sum-to-product identities so
/// that tiny decreases near a minimum are not lost to cancellation.
inline double energy_delta(const Phases& from, const Phases& to, const Graph& g) {
    double d = 0.0;
    for (const auto& e : g.edges()) {
        const double a = from(e.u) - from(e.v);
        const double b = to(e.u) - to(e.v);
        // -cos(b) + cos(a) = 2 sin((a+b)/2) sin((b-a)/2)
        d += 2.0 * std::sin(0.5 * (a + b)) * std::sin(0.5 * (b - a));
    }
    return g.coupling() * d;
}

struct SolveOptions {
    int retries = 5;
    double perturbation = 0.1;
    double initial_step = 0.1;
    double shrink = 0.5;
    double armijo = 1e-4;
    long max_iterations = 200000;
    IntegrateOptions integrate{};
    StabilityOptions stability{};
    std::uint64_t seed = 0;
    bool flow_solve = true;
    bool descent_fallback = false;
};

namespace detail {

/// Phases realizing edge drops d_e = theta_u - theta_v along a BFS tree.
inline Phases phases_from_drops(const Graph& g, const Eigen::VectorXd& drops) {
    Phases theta = Phases::Zero(g.n());
    std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
        const int a = q.front();
        q.pop();
        for (int b : g.neighbors(a)) {
            if (seen[b]) continue;
            seen[b] = 1;
            const double d = drops(g.edge_index(a, b));
            theta(b) = theta(a) - (a < b ? d : -d);
            q.push(b);
        }
    }
    return theta;
}

inline Eigen::MatrixXd cycle_matrix(const Graph& g) {
    const auto nb = static_cast<Eigen::Index>(g.cycle_basis().size());
    Eigen::MatrixXd cyc(nb, static_cast<Eigen::Index>(g.edges().size()));
    for (Eigen::Index s = 0; s < nb; ++s) cyc.row(s) = g.cycle_edge_vector(static_cast<std::size_t>(s)).transpose();
    return cyc;
}

/// Phases whose basis-cycle drops carry 2*pi*w, from the minimum-norm edge
/// drops satisfying the cycle constraints, laid out over a BFS spanning tree.
inline Phases winding_seed_state(const Graph& g, std::span<const int> w) {
    const Eigen::MatrixXd cyc = cycle_matrix(g);
    if (cyc.rows() == 0) return Phases::Zero(g.n());
    Eigen::VectorXd target(cyc.rows());
    for (Eigen::Index s = 0; s < cyc.rows(); ++s) target(s) = two_pi * w[static_cast<std::size_t>(s)];
    const Eigen::MatrixXd gram = cyc * cyc.transpose();
    return phases_from_drops(g, cyc.transpose() * gram.ldlt().solve(target));
}

/// Cohesive equilibria as cycle flows: edge flows sin(d) must lie in the
/// cycle space, sin(d) = C^T y, and the drops must wind as prescribed,
/// C arcsin(C^T y) = 2 pi w. That is the stationarity condition of the
/// strictly convex F(y) = sum_e G((C^T y)_e) - 2 pi w.y with
/// G(x) = x asin(x) + sqrt(1 - x^2), minimized by damped Newton inside
/// |C^T y| < 1. An interior minimizer exists iff a cohesive equilibrium with
/// winding w does; otherwise the iterates pin against the boundary.
inline std::optional<Phases> cycle_flow_solve(const Graph& g, std::span<const int> w, int max_iterations = 100) {
    const Eigen::MatrixXd cyc = cycle_matrix(g);
    const auto nb = cyc.rows();
    if (nb == 0) return Phases::Zero(g.n());
    Eigen::VectorXd target(nb);
    for (Eigen::Index s = 0; s < nb; ++s) target(s) = two_pi * w[static_cast<std::size_t>(s)];

    auto objective = [&](const Eigen::VectorXd& f, const Eigen::VectorXd& y) {
        double v = -target.dot(y);
        for (double x : f) v += x * std::asin(x) + std::sqrt(1.0 - x * x);
        return v;
    };
    constexpr double edge_limit = 1.0 - 1e-13;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(nb);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(cyc.cols());
    double value = objective(f, y);
    for (int it = 0; it < max_iterations; ++it) {
        const Eigen::VectorXd drops = f.array().asin().matrix();
        const Eigen::VectorXd grad = cyc * drops - target;
        if (grad.cwiseAbs().maxCoeff() < 1e-12) return phases_from_drops(g, drops);
        const Eigen::VectorXd curvature = (1.0 - f.array().square()).rsqrt().matrix();
        const Eigen::MatrixXd hess = cyc * curvature.asDiagonal() * cyc.transpose();
        const Eigen::VectorXd step = -hess.ldlt().solve(grad);
        const double decrement = -grad.dot(step);
        if (!(decrement > 0.0)) return std::nullopt;
        double t = 1.0;
        for (;; t *= 0.5) {
            if (t < 1e-12) return std::nullopt;
            const Eigen::VectorXd y_new = y + t * step;
            const Eigen::VectorXd f_new = cyc.transpose() * y_new;
            if (f_new.cwiseAbs().maxCoeff() >= edge_limit) continue;
            const double v_new = objective(f_new, y_new);
            // Relative slack absorbs round-off once the decrement is tiny.
            if (v_new <= value - 0.25 * t * decrement + 1e-14 * std::abs(value)) {
                y = y_new;
                f = f_new;
                value = v_new;
                break;
            }
        }
    }
    return std::nullopt;
}

/// Armijo-backtracking gradient descent on the energy. Returns true when
/// ||rhs||_inf < tol; false if a line search collapses or iterations run out.
inline bool descend(Phases& theta, const Graph& g, const SolveOptions& opt) {
    Eigen::VectorXd flow = rhs(theta, g); // = -grad
    for (long it = 0; it < opt.max_iterations; ++it) {
        if (flow.cwiseAbs().maxCoeff() < opt.integrate.conv_tol) return true;
        const double slope = flow.squaredNorm();
        double step = opt.initial_step;
        Phases trial;
        for (;;) {
            trial = theta + step * flow;
            if (energy_delta(theta, trial, g) <= -opt.armijo * step * slope) break;
            step *= opt.shrink;
            if (step < 1e-14) return false;
        }
        theta = std::move(trial);
        flow = rhs(theta, g);
    }
    return false;
}

} // namespace detail

namespace detail {

/// Polishes a candidate to conv_tol by descent and applies the acceptance
/// checks: cohesive, winding exactly w, stable.
inline std::optional<Equilibrium> accept_candidate(Phases theta, const Graph& g, std::span<const int> w,
                                                   const SolveOptions& opt) {
    if (!descend(theta, g, opt)) {
        const auto run = integrate(theta, g, {}, opt.integrate);
        if (!run.converged) return std::nullopt;
        theta = run.state;
    }
    theta = canonical(theta);
    Equilibrium eq;
    eq.residual = residual(theta, g);
    if (!(eq.residual < opt.stability.residual_tol)) return std::nullopt;
    eq.cohesive = is_phase_cohesive(theta, g);
    if (!eq.cohesive) return std::nullopt;
    eq.winding = winding_vector(theta, g);
    if (!std::equal(eq.winding.begin(), eq.winding.end(), w.begin(), w.end())) return std::nullopt;
    eq.verdict = classify_stability(theta, g, opt.stability);
    if (eq.verdict.kind != Stability::stable) return std::nullopt;
    eq.state = std::move(theta);
    return eq;
}

} // namespace detail

/// Looks for the stable phase-cohesive equilibrium with winding vector w.
///
/// The cycle-flow Newton solve is tried first. If it finds no interior
/// solution and descent_fallback is set, energy descent runs from the
/// minimum-norm winding seed and from `retries` perturbations of it. Absent
/// when no candidate passes the acceptance checks.
inline std::optional<Equilibrium> winding_constrained_solve(const Graph& g, std::span<const int> w,
                                                            const SolveOptions& opt = {}) {
    const auto bounds = winding_bounds(g);
    if (!in_box(w, bounds)) return std::nullopt;

    if (opt.flow_solve) {
        if (auto start = detail::cycle_flow_solve(g, w)) {
            if (auto eq = detail::accept_candidate(std::move(*start), g, w, opt)) return eq;
        }
        if (!opt.descent_fallback) return std::nullopt;
    }

    const Phases seed_state = detail::winding_seed_state(g, w);
    std::uint64_t key = 0;
    for (int x : w) key = key * 1315423911ULL + static_cast<std::uint64_t>(x + 1024);
    for (int attempt = 0; attempt <= opt.retries; ++attempt) {
        Phases theta = seed_state;
        if (attempt > 0) {
            Rng rng(mix_seed(mix_seed(opt.seed, key), static_cast<std::uint64_t>(attempt)));
            for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) += rng.uniform(-opt.perturbation, opt.perturbation);
        }
        if (auto eq = detail::accept_candidate(std::move(theta), g, w, opt)) return eq;
    }
    return std::nullopt;
}

struct EnumerateOptions {
    std::uint64_t budget = 10'000'000;
    unsigned jobs = 1;
    SolveOptions solve{};
};

/// Every stable phase-cohesive equilibrium, one per admissible winding
/// vector that admits one, ordered by winding vector.
inline std::vector<Equilibrium> enumerate_exact(const Graph& g, const EnumerateOptions& opt = {}) {
    const std::uint64_t size = box_size(g);
    if (size > opt.budget)
        throw BudgetExceeded("winding box holds " +
                             (size == std::numeric_limits<std::uint64_t>::max() ? std::string("more than 2^64")
                                                                               : std::to_string(size)) +
                             " vectors, budget is " + std::to_string(opt.budget) + "; use the sampling estimator");
    const auto bounds = winding_bounds(g);
    std::vector<std::optional<Equilibrium>> found(static_cast<std::size_t>(size));
    parallel_for(found.size(), opt.jobs, [&](std::size_t i) {
        found[i] = winding_constrained_solve(g, box_element(i, bounds), opt.solve);
    });
    std::vector<Equilibrium> out;
    for (auto& f : found)
        if (f) out.push_back(std::move(*f));
    // Box order is lexicographic in the winding vector already.
    return out;
}

struct AuditOptions {
    IntegrateOptions integrate{};
    StabilityOptions stability{};
    double match_tol = 1e-5;
    unsigned jobs = 1;
};

struct AuditLimit {
    Phases state;
    WindingVector winding;
    Stability kind = Stability::marginal;
};

struct AuditReport {
    int trials = 0;
    std::vector<int> matched; // per entry of `known`
    int nonconverged = 0;
    std::vector<AuditLimit> unstable; // converged onto a saddle or marginal point
    std::vector<AuditLimit> unmatched; // stable limits not in `known`: spurious memories
    int total_matched() const {
        int s = 0;
        for (int x : matched) s += x;
        return s;
    }
};

/// Integrates `trials` uniform random initial states and checks every stable
/// limit against `known` (same winding vector and canonical distance below
/// match_tol). Trial t draws from a generator seeded by mix_seed(seed, t).
inline AuditReport audit_spurious(const Graph& g, const std::vector<Equilibrium>& known, int trials,
                                  std::uint64_t seed, const AuditOptions& opt = {}) {
    AuditReport report;
    report.matched.assign(known.size(), 0);
    if (trials <= 0) return report;
    report.trials = trials;

    std::map<WindingVector, std::size_t> by_winding;
    for (std::size_t i = 0; i < known.size(); ++i) by_winding.emplace(known[i].winding, i);

    enum class Outcome { matched, nonconverged, unstable, unmatched };
    struct Trial {
        Outcome outcome = Outcome::nonconverged;
        std::size_t match = 0;
        AuditLimit limit;
    };
    std::vector<Trial> results(static_cast<std::size_t>(trials));
    parallel_for(results.size(), opt.jobs, [&](std::size_t t) {
        Rng rng(mix_seed(seed, t));
        Phases theta0(g.n());
        for (Eigen::Index i = 0; i < theta0.size(); ++i) theta0(i) = pi - two_pi * rng.uniform01(); // (-pi, pi]
        auto& r = results[t];
        const auto run = integrate(theta0, g, {}, opt.integrate);
        if (!run.converged) return;
        r.limit.state = run.state;
        r.limit.winding = winding_vector(run.state, g);
        r.limit.kind = classify_stability(run.state, g, opt.stability).kind;
        if (r.limit.kind != Stability::stable) {
            r.outcome = Outcome::unstable;
            return;
        }
        const auto it = by_winding.find(r.limit.winding);
        if (it != by_winding.end() && canonical_distance(known[it->second].state, run.state) < opt.match_tol) {
            r.outcome = Outcome::matched;
            r.match = it->second;
        } else {
            r.outcome = Outcome::unmatched;
        }
    });
    for (auto& r : results) {
        switch (r.outcome) {
        case Outcome::matched: ++report.matched[r.match]; break;
        case Outcome::nonconverged: ++report.nonconverged; break;
        case Outcome::unstable: report.unstable.push_back(std::move(r.limit)); break;
        case Outcome::unmatched: report.unmatched.push_back(std::move(r.limit)); break;
        }
    }
    return report;
}

/// Largest violation of the degree-2 node conditions at an equilibrium: for
/// node i with neighbours j, k, wrap(theta_i - theta_j) must equal
/// wrap(theta_k - theta_i) and both must lie strictly inside (-pi/2, pi/2).
/// Returns +inf when some difference leaves that interval.
inline double degree_two_violation(const Phases& theta, const Graph& g) {
    double worst = 0.0;
    for (int i = 0; i < g.n(); ++i) {
        const auto& nb = g.neighbors(i);
        if (nb.size() != 2) continue;
        const double a = wrap_angle(theta(i) - theta(nb[0]));
        const double b = wrap_angle(theta(nb[1]) - theta(i));
        if (!(std::abs(a) < pi / 2) || !(std::abs(b) < pi / 2)) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(wrap_angle(a - b)));
    }
    return worst;
}

/// Spread of consecutive path drops within each cycle of a honeycomb(n_c, m)
/// state; zero when every cycle's path carries one common difference.
inline double equal_drop_violation(const Phases& theta, int n_c, int m) {
    double worst = 0.0;
    for (int p = 0; p < m; ++p) {
        const int s = p * (n_c - 1);
        const double first = wrap_angle(theta(s) - theta(s + 1));
        for (int i = s + 1; i < s + n_c - 1; ++i)
            worst = std::max(worst, std::abs(wrap_angle(wrap_angle(theta(i) - theta(i + 1)) - first)));
    }
    return worst;
}

} // namespace kuramem
