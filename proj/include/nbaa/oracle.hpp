#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "nbaa/fourier.hpp"
#include "nbaa/statevector.hpp"

namespace nbaa {

// CNOT cascade that folds the parity of the S-qubits onto work qubit j_1
// (the smallest element of S): controls run j_|S| -> j_{|S|-1} first, down
// to j_2 -> j_1 last, so after application work qubit j_1 carries S.x.
// Empty for |S| <= 1. Work qubit j sits at combined index j+1.
inline Circuit build_R_S(const SubsetMask& s, const RegisterLayout& layout) {
    if (s.n != layout.n)
        throw width_mismatch_error("build_R_S: subset width " + std::to_string(s.n) +
                                   " does not match layout n=" + std::to_string(layout.n));
    Circuit c(layout);
    const std::vector<int> js = s.elements();
    for (std::size_t l = js.size(); l >= 2; --l)
        c.append(GateOp::cnot(layout.work_qubit(js[l - 1]), layout.work_qubit(js[l - 2])));
    return c;
}

// Copies work qubit j_1 into the ancilla: CNOT with control j_1 + 1 and
// target 0. Empty for S = empty set.
inline Circuit build_V_S(const SubsetMask& s, const RegisterLayout& layout) {
    if (s.n != layout.n)
        throw width_mismatch_error("build_V_S: subset width does not match layout");
    Circuit c(layout);
    const std::vector<int> js = s.elements();
    if (!js.empty()) c.append(GateOp::cnot(layout.work_qubit(js.front()), RegisterLayout::ancilla));
    return c;
}

// U_{S.} = R_S^dagger V_S R_S, sending |x>|a> to |x>|a xor S.x>. CNOTs are
// involutions, so R^dagger is just the reversed gate list.
inline Circuit build_U_parity(const SubsetMask& s, const RegisterLayout& layout) {
    Circuit c = build_R_S(s, layout);
    c.extend(build_V_S(s, layout));
    const Circuit r = build_R_S(s, layout);
    for (auto it = r.gates.rbegin(); it != r.gates.rend(); ++it) c.append(*it);
    return c;
}

// Ancilla-conditioned phase multiplications:
//   CM0(alpha) = X P(alpha) X  -> phase e^{i alpha (1-a)}
//   CM1(alpha) = P(-alpha)     -> phase e^{-i alpha a}
// Composed they multiply |x>|a> by e^{i alpha (1-2a)}.
inline Circuit build_CM0(double alpha, const RegisterLayout& layout) {
    Circuit c(layout);
    c.append(GateOp::x(RegisterLayout::ancilla));
    c.append(GateOp::p(RegisterLayout::ancilla, alpha));
    c.append(GateOp::x(RegisterLayout::ancilla));
    return c;
}

inline Circuit build_CM1(double alpha, const RegisterLayout& layout) {
    Circuit c(layout);
    c.append(GateOp::p(RegisterLayout::ancilla, -alpha));
    return c;
}

// U_S(alpha) = U_{S.} CM1(alpha) CM0(alpha) U_{S.}; multiplies |x>|a> by
// e^{i alpha chi_S(x)} on a=0 and e^{-i alpha chi_S(x)} on a=1.
inline Circuit build_U_S(const SubsetMask& s, double alpha, const RegisterLayout& layout) {
    Circuit c = build_U_parity(s, layout);
    c.extend(build_CM0(alpha, layout));
    c.extend(build_CM1(alpha, layout));
    c.extend(build_U_parity(s, layout));
    return c;
}

struct OracleBuild {
    FourierSpectrum spectrum;
    Circuit circuit;
    std::size_t gate_count = 0;
    std::vector<SubsetMask> subset_order;  // U_S block emission order
};

// Oracle circuit for the function the spectrum encodes: one U_S(coeff) block
// per stored coefficient, ascending mask order. The blocks commute, so the
// order is a determinism choice, not a correctness one.
inline OracleBuild build_U_f(const FourierSpectrum& spectrum, const RegisterLayout& layout) {
    if (spectrum.n != layout.n)
        throw width_mismatch_error("build_U_f: spectrum width " + std::to_string(spectrum.n) +
                                   " does not match layout n=" + std::to_string(layout.n));
    OracleBuild build{spectrum, Circuit(layout)};
    for (const auto& [mask, coeff] : spectrum.coeffs) {
        const SubsetMask s(spectrum.n, mask);
        build.circuit.extend(build_U_S(s, coeff, layout));
        build.subset_order.push_back(s);
    }
    build.gate_count = build.circuit.size();
    return build;
}

// U_f^dagger is U_f of the negated spectrum.
inline OracleBuild build_U_f_dagger(const FourierSpectrum& spectrum, const RegisterLayout& layout) {
    return build_U_f(spectrum.negated(), layout);
}

// Diagonal reference oracle: multiplies the amplitude at (x, a) by
// e^{i sign (1-2a) f(x)} directly, no gate synthesis. sign +1 is U_f,
// sign -1 is U_f^dagger.
inline void reference_oracle_apply(const FunctionTable& f, StateVector& state, int sign = +1) {
    if (f.n != state.layout.n)
        throw width_mismatch_error("reference_oracle_apply: table width does not match layout");
    for (std::uint64_t x = 0; x < f.size(); ++x) {
        const Complex phase = std::polar(1.0, sign * f.values[x]);
        state.amps[2 * x] *= phase;
        state.amps[2 * x + 1] *= std::conj(phase);
    }
}

// Plain-text gate list: header "layout n=<n> ancilla=0", then one gate per
// line (X q / P q alpha / CNOT c t / H q); angles carry 17 significant
// digits.
inline std::string export_gate_list(const Circuit& circuit) {
    std::string out = "layout n=" + std::to_string(circuit.layout.n) + " ancilla=0\n";
    char buf[64];
    for (const GateOp& g : circuit.gates) {
        switch (g.kind) {
            case GateKind::X:
                out += "X " + std::to_string(g.target) + "\n";
                break;
            case GateKind::P:
                std::snprintf(buf, sizeof buf, "P %d %.17g\n", g.target, g.alpha);
                out += buf;
                break;
            case GateKind::CNOT:
                out += "CNOT " + std::to_string(g.control) + " " + std::to_string(g.target) + "\n";
                break;
            case GateKind::H:
                out += "H " + std::to_string(g.target) + "\n";
                break;
        }
    }
    return out;
}

}  // namespace nbaa
