// Associative memory on a 1D honeycomb: binary patterns <-> winding vectors
// <-> stable phase-locked configurations.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kuramem/dynamics.hpp"
#include "kuramem/equilibria.hpp"
#include "kuramem/errors.hpp"
#include "kuramem/graph.hpp"

namespace kuramem {

/// Most significant bit first.
class BinaryPattern {
public:
    BinaryPattern() = default;
    explicit BinaryPattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        for (auto b : bits_)
            if (b > 1) throw DomainError("pattern bits must be 0 or 1");
    }

    static BinaryPattern parse(std::string_view s) {
        if (s.empty()) throw DomainError("empty bit pattern");
        std::vector<std::uint8_t> bits;
        for (char ch : s) {
            if (ch != '0' && ch != '1') throw DomainError("bit pattern may only contain 0 and 1: '" + std::string(s) + "'");
            bits.push_back(static_cast<std::uint8_t>(ch - '0'));
        }
        return BinaryPattern(std::move(bits));
    }

    static BinaryPattern from_value(std::uint64_t value, int width) {
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(width));
        for (int i = width - 1; i >= 0; --i, value >>= 1) bits[static_cast<std::size_t>(i)] = value & 1U;
        if (value != 0) throw DomainError("value does not fit in " + std::to_string(width) + " bits");
        return BinaryPattern(std::move(bits));
    }

    std::uint64_t value() const {
        if (bits_.size() > 64) throw DomainError("pattern wider than 64 bits");
        std::uint64_t v = 0;
        for (auto b : bits_) v = (v << 1) | b;
        return v;
    }

    std::string str() const {
        std::string s;
        for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
        return s;
    }

    const std::vector<std::uint8_t>& bits() const { return bits_; }
    std::size_t size() const { return bits_.size(); }
    friend bool operator==(const BinaryPattern&, const BinaryPattern&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// (2*ceil(n_c/4) - 1)^m.
inline std::uint64_t num_patterns(int n_c, int m) {
    TopologySpec{Topology::honeycomb, n_c, m}.validate();
    const auto base = static_cast<std::uint64_t>(2 * winding_bound(n_c) + 1);
    std::uint64_t p = 1;
    for (int i = 0; i < m; ++i) {
        if (p > std::numeric_limits<std::uint64_t>::max() / base)
            throw DomainError("pattern count overflows 64 bits");
        p *= base;
    }
    return p;
}

/// Patterns per oscillator: num_patterns / (m (n_c - 1) + 1).
inline double capacity(int n_c, int m) {
    TopologySpec{Topology::honeycomb, n_c, m}.validate();
    const double base = 2.0 * winding_bound(n_c) + 1.0;
    return std::pow(base, m) / static_cast<double>((n_c - 1) * m + 1);
}

/// Index = 1 + sum_p (k_p + K) b^(m-1-p), written in bit_width bits.
class PatternCodec {
public:
    PatternCodec(int n_c, int m)
        : n_c_(n_c), m_(m), offset_(winding_bound(n_c)), base_(2 * offset_ + 1), n_patterns_(num_patterns(n_c, m)) {
        bit_width_ = 0;
        while (bit_width_ < 64 && (n_patterns_ >> bit_width_) != 0) ++bit_width_; // ceil(log2(n_patterns + 1))
    }

    int n_c() const { return n_c_; }
    int m() const { return m_; }
    int base() const { return base_; }
    int offset() const { return offset_; }
    std::uint64_t n_patterns() const { return n_patterns_; }
    int bit_width() const { return bit_width_; }

    std::uint64_t index_of(std::span<const int> k) const {
        if (static_cast<int>(k.size()) != m_)
            throw DomainError("winding vector has " + std::to_string(k.size()) + " entries, expected " + std::to_string(m_));
        std::uint64_t index = 0;
        for (int kp : k) {
            if (std::abs(kp) > offset_) throw DomainError("winding entry " + std::to_string(kp) + " out of range");
            index = index * static_cast<std::uint64_t>(base_) + static_cast<std::uint64_t>(kp + offset_);
        }
        return index + 1;
    }

    WindingVector winding_of(std::uint64_t index) const {
        if (index == 0 || index > n_patterns_)
            throw DomainError("pattern index " + std::to_string(index) + " outside 1.." + std::to_string(n_patterns_));
        WindingVector k(static_cast<std::size_t>(m_));
        std::uint64_t rest = index - 1;
        for (int p = m_ - 1; p >= 0; --p) {
            k[static_cast<std::size_t>(p)] = static_cast<int>(rest % static_cast<std::uint64_t>(base_)) - offset_;
            rest /= static_cast<std::uint64_t>(base_);
        }
        return k;
    }

    BinaryPattern encode(std::span<const int> k) const { return BinaryPattern::from_value(index_of(k), bit_width_); }

    WindingVector decode(const BinaryPattern& bits) const {
        if (static_cast<int>(bits.size()) != bit_width_)
            throw DomainError("pattern has " + std::to_string(bits.size()) + " bits, expected " + std::to_string(bit_width_));
        return winding_of(bits.value());
    }

private:
    int n_c_;
    int m_;
    int offset_;
    int base_;
    std::uint64_t n_patterns_;
    int bit_width_ = 0;
};

/// The phase configuration representing `bits`.
inline Phases store(const BinaryPattern& bits, const PatternCodec& codec) {
    return construct_config(codec.decode(bits), codec.n_c(), codec.m());
}

struct RetrievalDiagnostics {
    double t_converged = 0.0;
    double residual = 0.0;
    bool cohesive = false;
    WindingVector winding;
    Phases state;
};

struct Retrieval {
    BinaryPattern pattern;
    RetrievalDiagnostics diagnostics;
};

/// Lets the network settle from theta0 and reads the pattern off the winding
/// vector of the limit.
inline Retrieval retrieve(const Phases& theta0, const PatternCodec& codec, const Graph& g,
                          const IntegrateOptions& opt = {}) {
    const auto run = integrate(theta0, g, {}, opt);
    if (!run.converged)
        throw RetrievalFailure("integration did not converge within t_max (residual " + std::to_string(run.residual) + ")");
    Retrieval r;
    auto& d = r.diagnostics;
    d.t_converged = run.t_elapsed;
    d.residual = run.residual;
    d.cohesive = is_phase_cohesive(run.state, g);
    d.winding = winding_vector(run.state, g);
    d.state = run.state;
    const std::vector<int> bounds(static_cast<std::size_t>(codec.m()), codec.offset());
    if (!in_box(d.winding, bounds)) throw RetrievalFailure("converged winding vector lies outside the admissible box");
    r.pattern = codec.encode(d.winding);
    return r;
}

} // namespace kuramem
