#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nbaa/errors.hpp"

namespace nbaa {

using Complex = std::complex<double>;

// n work qubits plus one ancilla. Combined qubit 0 is the ancilla and
// combined qubit j+1 is work qubit j, so the basis state |x>(x)|a> lives at
// amplitude index 2x + a. Every module indexes the register through this
// layout.
struct RegisterLayout {
    int n;

    explicit RegisterLayout(int work_qubits) : n(work_qubits) {
        if (n < 1 || n > 27)
            throw std::invalid_argument("work-qubit count must be in [1, 27], got " +
                                        std::to_string(work_qubits));
    }

    static constexpr int ancilla = 0;
    int total_qubits() const { return n + 1; }
    int work_qubit(int j) const { return j + 1; }
    std::uint64_t dim() const { return std::uint64_t{1} << (n + 1); }
    std::uint64_t work_dim() const { return std::uint64_t{1} << n; }

    friend bool operator==(const RegisterLayout&, const RegisterLayout&) = default;
};

struct StateVector {
    RegisterLayout layout;
    std::vector<Complex> amps;

    double norm_sq() const {
        double acc = 0.0;
        for (const Complex& a : amps) acc += std::norm(a);
        return acc;
    }
};

enum class GateKind { X, P, CNOT, H };

struct GateOp {
    GateKind kind;
    int target = 0;
    int control = -1;   // CNOT only
    double alpha = 0.0; // P only

    static GateOp x(int target) { return {GateKind::X, target, -1, 0.0}; }
    static GateOp p(int target, double alpha) { return {GateKind::P, target, -1, alpha}; }
    static GateOp cnot(int control, int target) { return {GateKind::CNOT, target, control, 0.0}; }
    static GateOp h(int target) { return {GateKind::H, target, -1, 0.0}; }
};

inline void check_gate(const GateOp& g, const RegisterLayout& layout) {
    if (g.target < 0 || g.target >= layout.total_qubits())
        throw std::invalid_argument("gate target " + std::to_string(g.target) +
                                    " outside register of " + std::to_string(layout.total_qubits()) +
                                    " qubits");
    if (g.kind == GateKind::CNOT) {
        if (g.control < 0 || g.control >= layout.total_qubits())
            throw std::invalid_argument("gate control " + std::to_string(g.control) +
                                        " outside register");
        if (g.control == g.target)
            throw std::invalid_argument("CNOT control equals target (" +
                                        std::to_string(g.target) + ")");
    }
    if (g.kind == GateKind::P && !std::isfinite(g.alpha))
        throw std::invalid_argument("phase angle is not finite");
}

struct Circuit {
    RegisterLayout layout;
    std::vector<GateOp> gates;

    explicit Circuit(RegisterLayout l) : layout(l) {}

    std::size_t size() const { return gates.size(); }

    void append(const GateOp& g) {
        check_gate(g, layout);
        gates.push_back(g);
    }

    void extend(const Circuit& other) {
        if (!(other.layout == layout))
            throw width_mismatch_error("circuit layouts differ");
        gates.insert(gates.end(), other.gates.begin(), other.gates.end());
    }
};

// |0...0> on the combined register.
inline StateVector prepare_zero(const RegisterLayout& layout) {
    StateVector s{layout, std::vector<Complex>(layout.dim(), Complex{0.0, 0.0})};
    s.amps[0] = Complex{1.0, 0.0};
    return s;
}

// In-place action on amplitude pairs selected by the target bit.
inline void apply_gate(StateVector& state, const GateOp& gate) {
    check_gate(gate, state.layout);
    const std::uint64_t dim = state.amps.size();
    const std::uint64_t t = std::uint64_t{1} << gate.target;
    switch (gate.kind) {
        case GateKind::X:
            for (std::uint64_t i = 0; i < dim; ++i)
                if (!(i & t)) std::swap(state.amps[i], state.amps[i | t]);
            break;
        case GateKind::P: {
            const Complex phase = std::polar(1.0, gate.alpha);
            for (std::uint64_t i = 0; i < dim; ++i)
                if (i & t) state.amps[i] *= phase;
            break;
        }
        case GateKind::CNOT: {
            const std::uint64_t c = std::uint64_t{1} << gate.control;
            for (std::uint64_t i = 0; i < dim; ++i)
                if ((i & c) && !(i & t)) std::swap(state.amps[i], state.amps[i | t]);
            break;
        }
        case GateKind::H: {
            const double r = 1.0 / std::numbers::sqrt2;
            for (std::uint64_t i = 0; i < dim; ++i) {
                if (i & t) continue;
                const Complex a = state.amps[i];
                const Complex b = state.amps[i | t];
                state.amps[i] = (a + b) * r;
                state.amps[i | t] = (a - b) * r;
            }
            break;
        }
    }
}

inline void apply_circuit(StateVector& state, const Circuit& circuit) {
    if (!(circuit.layout == state.layout))
        throw width_mismatch_error("circuit layout does not match state layout");
    for (const GateOp& g : circuit.gates) apply_gate(state, g);
}

// One H per qubit of the combined register.
inline Circuit hadamard_all(const RegisterLayout& layout) {
    Circuit c(layout);
    for (int q = 0; q < layout.total_qubits(); ++q) c.append(GateOp::h(q));
    return c;
}

// Marginal distribution over the work register: entry x is
// |amp(2x)|^2 + |amp(2x+1)|^2.
inline std::vector<double> work_probabilities(const StateVector& state) {
    std::vector<double> p(state.layout.work_dim());
    for (std::uint64_t x = 0; x < p.size(); ++x)
        p[x] = std::norm(state.amps[2 * x]) + std::norm(state.amps[2 * x + 1]);
    return p;
}

// Uniform double in [0, 1) from the top 53 bits of the generator, so draws
// are identical wherever mt19937_64 is.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Born-rule measurement of one qubit; collapses and renormalizes in place.
inline int measure_qubit(StateVector& state, int qubit, std::mt19937_64& rng) {
    if (qubit < 0 || qubit >= state.layout.total_qubits())
        throw std::invalid_argument("measured qubit " + std::to_string(qubit) +
                                    " outside register");
    const std::uint64_t q = std::uint64_t{1} << qubit;
    const double total = state.norm_sq();
    if (total < 1e-12) throw simulation_error("measure_qubit: state has zero norm");
    double p1 = 0.0;
    for (std::uint64_t i = 0; i < state.amps.size(); ++i)
        if (i & q) p1 += std::norm(state.amps[i]);
    const double p0 = 1.0 - p1 / total;
    const int outcome = uniform_unit(rng) < p0 ? 0 : 1;
    double kept = 0.0;
    for (std::uint64_t i = 0; i < state.amps.size(); ++i) {
        const bool bit = (i & q) != 0;
        if (bit != (outcome == 1))
            state.amps[i] = Complex{0.0, 0.0};
        else
            kept += std::norm(state.amps[i]);
    }
    const double inv = 1.0 / std::sqrt(kept);
    for (Complex& a : state.amps) a *= inv;
    return outcome;
}

inline std::pair<int, StateVector> measure_qubit(const StateVector& state, int qubit,
                                                 std::uint64_t rng_seed) {
    StateVector collapsed = state;
    std::mt19937_64 rng(rng_seed);
    const int outcome = measure_qubit(collapsed, qubit, rng);
    return {outcome, std::move(collapsed)};
}

}  // namespace nbaa
