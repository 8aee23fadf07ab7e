// Kuramoto vector field, energy, Jacobian, stability and RK4 integration.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kuramem/errors.hpp"
#include "kuramem/graph.hpp"

namespace kuramem {

/// Oscillator phases in radians, one entry per node.
using Phases = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double x) {
    double r = std::remainder(x, two_pi); // [-pi, pi]
    if (r <= -pi) r += two_pi;
    return r;
}

/// Gauge theta_1 = 0, then wrap each entry into (-pi, pi].
inline Phases canonical(const Phases& theta) {
    Phases out(theta.size());
    if (theta.size() == 0) return out;
    const double ref = theta(0);
    for (Eigen::Index i = 0; i < theta.size(); ++i) out(i) = wrap_angle(theta(i) - ref);
    out(0) = 0.0;
    return out;
}

/// l-infinity distance between two states modulo global rotation.
inline double canonical_distance(const Phases& a, const Phases& b) {
    const Phases ca = canonical(a);
    const Phases cb = canonical(b);
    double d = 0.0;
    for (Eigen::Index i = 0; i < ca.size(); ++i) d = std::max(d, std::abs(wrap_angle(ca(i) - cb(i))));
    return d;
}

namespace detail {
inline void check_size(const Phases& theta, const Graph& g) {
    if (theta.size() != g.n())
        throw DomainError("phase vector has " + std::to_string(theta.size()) + " entries, graph has " +
                          std::to_string(g.n()) + " nodes");
}
} // namespace detail

/// d(theta_i)/dt = omega_i + sum_j a_ij sin(theta_j - theta_i).
/// An empty omega means all natural frequencies are zero.
inline Eigen::VectorXd rhs(const Phases& theta, const Graph& g, const Eigen::VectorXd& omega = {}) {
    detail::check_size(theta, g);
    Eigen::VectorXd out;
    if (omega.size() == 0) {
        out = Eigen::VectorXd::Zero(g.n());
    } else {
        if (omega.size() != g.n()) throw DomainError("omega length does not match node count");
        out = omega;
    }
    const double c = g.coupling();
    for (const auto& e : g.edges()) {
        const double s = c * std::sin(theta(e.v) - theta(e.u));
        out(e.u) += s;
        out(e.v) -= s;
    }
    return out;
}

/// -c * sum over edges of cos(theta_u - theta_v); rhs(theta, g) = -grad energy.
inline double energy(const Phases& theta, const Graph& g) {
    detail::check_size(theta, g);
    double f = 0.0;
    for (const auto& e : g.edges()) f -= std::cos(theta(e.u) - theta(e.v));
    return g.coupling() * f;
}

/// J = -B diag(c cos(theta_u - theta_v)) B^T, assembled edge by edge.
inline Eigen::MatrixXd jacobian(const Phases& theta, const Graph& g) {
    detail::check_size(theta, g);
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(g.n(), g.n());
    for (const auto& e : g.edges()) {
        const double w = g.coupling() * std::cos(theta(e.u) - theta(e.v));
        j(e.u, e.u) -= w;
        j(e.v, e.v) -= w;
        j(e.u, e.v) += w;
        j(e.v, e.u) += w;
    }
    return j;
}

inline double residual(const Phases& theta, const Graph& g, const Eigen::VectorXd& omega = {}) {
    return rhs(theta, g, omega).cwiseAbs().maxCoeff();
}

enum class Stability { stable, unstable, marginal };

inline std::string_view to_string(Stability s) {
    switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
    }
    return "?";
}

struct StabilityVerdict {
    Stability kind = Stability::marginal;
    Eigen::VectorXd eigenvalues; // ascending
    double zero_tol = 1e-7;

    int zero_count() const {
        int z = 0;
        for (double v : eigenvalues) z += (std::abs(v) <= zero_tol);
        return z;
    }
    /// Largest eigenvalue once the single rotational zero mode is set aside.
    double max_nonzero() const {
        const auto n = eigenvalues.size();
        return n >= 2 ? eigenvalues(n - 2) : 0.0;
    }
};

struct StabilityOptions {
    double zero_tol = 1e-7;
    double residual_tol = 1e-8;
};

/// Stable iff exactly one eigenvalue lies in [-tol, tol] and all others are below -tol.
inline StabilityVerdict classify_spectrum(Eigen::VectorXd eigenvalues, double zero_tol) {
    std::sort(eigenvalues.begin(), eigenvalues.end());
    StabilityVerdict v{Stability::marginal, std::move(eigenvalues), zero_tol};
    int zeros = 0, positive = 0;
    for (double x : v.eigenvalues) {
        if (x > zero_tol) ++positive;
        else if (x >= -zero_tol) ++zeros;
    }
    if (positive > 0) v.kind = Stability::unstable;
    else if (zeros == 1) v.kind = Stability::stable;
    return v;
}

inline StabilityVerdict classify_stability(const Phases& theta, const Graph& g, const StabilityOptions& opt = {}) {
    const double r = residual(theta, g);
    if (!(r <= opt.residual_tol))
        throw NotEquilibrium("state is not an equilibrium: residual " + std::to_string(r));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobian(theta, g), Eigen::EigenvaluesOnly);
    return classify_spectrum(es.eigenvalues(), opt.zero_tol);
}

struct IntegrateOptions {
    double dt = 0.01;
    double t_max = 1000.0;
    double conv_tol = 1e-9;
};

struct IntegrateResult {
    Phases state; // canonical form
    bool converged = false;
    double t_elapsed = 0.0;
    double residual = 0.0;
};

/// Called with (t, theta) before the first step and after every step.
using TrajectoryObserver = std::function<void(double, const Phases&)>;

/// Fixed-step classical RK4 on the Kuramoto flow. Identical natural
/// frequencies are removed by integrating in the frame rotating with their
/// mean. Stops as soon as ||rhs||_inf < conv_tol.
inline IntegrateResult integrate(const Phases& theta0, const Graph& g, const Eigen::VectorXd& omega = {},
                                 const IntegrateOptions& opt = {}, const TrajectoryObserver& observe = {}) {
    detail::check_size(theta0, g);
    if (!(opt.dt > 0.0) || !(opt.t_max > 0.0)) throw DomainError("dt and t_max must be positive");
    Eigen::VectorXd w;
    if (omega.size() != 0) {
        if (omega.size() != g.n()) throw DomainError("omega length does not match node count");
        w = omega.array() - omega.mean();
        if (w.cwiseAbs().maxCoeff() == 0.0) w.resize(0);
    }

    Phases x = theta0;
    double t = 0.0;
    Eigen::VectorXd k1 = rhs(x, g, w);
    if (observe) observe(t, x);
    const auto max_steps = static_cast<long>(std::ceil(opt.t_max / opt.dt - 1e-9));
    for (long step = 0;; ++step) {
        const double r = k1.cwiseAbs().maxCoeff();
        if (!std::isfinite(r) || !x.allFinite()) throw IntegrationError("non-finite state during integration");
        if (r < opt.conv_tol) return {canonical(x), true, t, residual(canonical(x), g, w)};
        if (step >= max_steps) return {canonical(x), false, t, r};
        const double h = opt.dt;
        const Eigen::VectorXd k2 = rhs(x + 0.5 * h * k1, g, w);
        const Eigen::VectorXd k3 = rhs(x + 0.5 * h * k2, g, w);
        const Eigen::VectorXd k4 = rhs(x + h * k3, g, w);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = static_cast<double>(step + 1) * h;
        k1 = rhs(x, g, w);
        if (observe) observe(t, x);
    }
}

} // namespace kuramem
