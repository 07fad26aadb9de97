#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numbers>
#include <random>

#include "nbaa/oracle.hpp"

#include "test_helpers.hpp"

using namespace nbaa;
using test_helpers::max_amp_deviation;
using test_helpers::random_state;
using test_helpers::random_table_values;

namespace {

StateVector basis_state(const RegisterLayout& layout, std::uint64_t index) {
    StateVector s{layout, std::vector<Complex>(layout.dim(), Complex{0, 0})};
    s.amps[index] = Complex{1.0, 0.0};
    return s;
}

// For circuits of X/CNOT gates a basis state maps to a basis state exactly;
// returns its index.
std::uint64_t map_basis(const Circuit& c, std::uint64_t index) {
    StateVector s = basis_state(c.layout, index);
    apply_circuit(s, c);
    std::uint64_t found = c.layout.dim();
    for (std::uint64_t i = 0; i < s.amps.size(); ++i) {
        if (s.amps[i] == Complex{1.0, 0.0}) {
            REQUIRE(found == c.layout.dim());
            found = i;
        } else {
            REQUIRE(s.amps[i] == Complex{0.0, 0.0});
        }
    }
    REQUIRE(found < c.layout.dim());
    return found;
}

int popcount_parity(std::uint64_t v) { return std::popcount(v) & 1; }

}  // namespace

TEST_CASE("R_S is the descending CNOT cascade onto the smallest element") {
    const RegisterLayout layout(4);
    REQUIRE(build_R_S(SubsetMask(4, 0), layout).size() == 0);
    REQUIRE(build_R_S(SubsetMask(4, 0b0100), layout).size() == 0);

    const Circuit r = build_R_S(SubsetMask(4, 0b1011), layout);  // S = {0,1,3}
    REQUIRE(r.size() == 2);
    REQUIRE(r.gates[0].kind == GateKind::CNOT);
    REQUIRE(r.gates[0].control == 4);  // work 3
    REQUIRE(r.gates[0].target == 2);   // work 1
    REQUIRE(r.gates[1].control == 2);  // work 1
    REQUIRE(r.gates[1].target == 1);   // work 0

    // after R_S, work qubit 0 holds x3 xor x1 xor x0; ancilla untouched
    for (std::uint64_t i = 0; i < layout.dim(); ++i) {
        const std::uint64_t out = map_basis(r, i);
        const std::uint64_t x = i >> 1;
        const int want = popcount_parity(x & 0b1011);
        REQUIRE(int((out >> 1) & 1) == want);
        REQUIRE((out & 1) == (i & 1));
    }

    // self-inverse on basis states
    Circuit twice = r;
    twice.extend(r);
    for (std::uint64_t i = 0; i < layout.dim(); ++i) REQUIRE(map_basis(twice, i) == i);

    REQUIRE_THROWS_AS(build_R_S(SubsetMask(3, 1), layout), width_mismatch_error);
}

TEST_CASE("V_S copies the smallest S-qubit into the ancilla") {
    const RegisterLayout layout(4);
    REQUIRE(build_V_S(SubsetMask(4, 0), layout).size() == 0);

    const Circuit v = build_V_S(SubsetMask(4, 0b1011), layout);
    REQUIRE(v.size() == 1);
    REQUIRE(v.gates[0].control == 1);
    REQUIRE(v.gates[0].target == 0);

    const Circuit v2 = build_V_S(SubsetMask(4, 0b0100), layout);
    REQUIRE(v2.gates[0].control == 3);
    REQUIRE(v2.gates[0].target == 0);
}

TEST_CASE("U_parity writes S.x into the ancilla, exactly, for every basis state") {
    for (int n = 1; n <= 5; ++n) {
        const RegisterLayout layout(n);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            const Circuit u = build_U_parity(SubsetMask(n, mask), layout);
            for (std::uint64_t i = 0; i < layout.dim(); ++i) {
                const std::uint64_t x = i >> 1;
                const std::uint64_t a = i & 1;
                const std::uint64_t want = 2 * x + (a ^ std::uint64_t(popcount_parity(mask & x)));
                REQUIRE(map_basis(u, i) == want);
            }
        }
    }

    // the 4-qubit S = {0,1,3} instance: x = 1011, a = 0 flips the ancilla
    const RegisterLayout layout(4);
    const Circuit u = build_U_parity(SubsetMask(4, 0b1011), layout);
    REQUIRE(map_basis(u, 2 * 0b1011 + 0) == 2 * 0b1011 + 1);
}

TEST_CASE("controlled phase multiplications compose to e^{i alpha (1-2a)}") {
    const RegisterLayout layout(2);
    std::mt19937_64 rng(61);

    // alpha = 0: identity
    StateVector s = random_state(layout, rng);
    const StateVector before = s;
    apply_circuit(s, build_CM0(0.0, layout));
    apply_circuit(s, build_CM1(0.0, layout));
    REQUIRE(max_amp_deviation(s, before) < 1e-15);

    const double alpha = 1.1;
    Circuit both = build_CM0(alpha, layout);
    both.extend(build_CM1(alpha, layout));
    for (std::uint64_t i = 0; i < layout.dim(); ++i) {
        StateVector b = basis_state(layout, i);
        apply_circuit(b, both);
        const double expected_phase = (i & 1) ? -alpha : alpha;
        REQUIRE(std::abs(b.amps[i] - std::polar(1.0, expected_phase)) < 1e-12);
    }

    // X P(alpha) X equals the diagonal e^{i alpha (1-a)} on random states
    StateVector viacircuit = random_state(layout, rng);
    StateVector direct = viacircuit;
    apply_circuit(viacircuit, build_CM0(alpha, layout));
    for (std::uint64_t i = 0; i < direct.amps.size(); ++i)
        if (!(i & 1)) direct.amps[i] *= std::polar(1.0, alpha);
    REQUIRE(max_amp_deviation(viacircuit, direct) < 1e-12);
}

TEST_CASE("U_S applies the parity-conditioned phase") {
    const RegisterLayout layout(2);
    std::mt19937_64 rng(62);

    StateVector s = random_state(layout, rng);
    const StateVector before = s;
    apply_circuit(s, build_U_S(SubsetMask(2, 0b11), 0.0, layout));
    REQUIRE(max_amp_deviation(s, before) < 1e-12);

    // S = empty: chi is identically 1, so the phase only follows the ancilla
    const double c = 0.45;
    Circuit empty_block = build_U_S(SubsetMask(2, 0), c, layout);
    for (std::uint64_t i = 0; i < layout.dim(); ++i) {
        StateVector b = basis_state(layout, i);
        apply_circuit(b, empty_block);
        const double expected = (i & 1) ? -c : c;
        REQUIRE(std::abs(b.amps[i] - std::polar(1.0, expected)) < 1e-12);
    }

    // S = {0,1}, alpha = 0.7: |11>|0> picks up e^{+0.7 i}
    StateVector b11 = basis_state(layout, 2 * 0b11 + 0);
    apply_circuit(b11, build_U_S(SubsetMask(2, 0b11), 0.7, layout));
    REQUIRE(std::abs(b11.amps[2 * 0b11] - std::polar(1.0, 0.7)) < 1e-12);

    // against the diagonal on every basis state, a few subsets at n = 3
    const RegisterLayout l3(3);
    for (std::uint64_t mask : {std::uint64_t{0b001}, std::uint64_t{0b110}, std::uint64_t{0b111}}) {
        const double alpha = 0.9;
        const Circuit u = build_U_S(SubsetMask(3, mask), alpha, l3);
        for (std::uint64_t i = 0; i < l3.dim(); ++i) {
            StateVector b = basis_state(l3, i);
            apply_circuit(b, u);
            const double chi = popcount_parity(mask & (i >> 1)) ? -1.0 : 1.0;
            const double phase = (i & 1) ? -alpha * chi : alpha * chi;
            REQUIRE(std::abs(b.amps[i] - std::polar(1.0, phase)) < 1e-12);
        }
    }
}

TEST_CASE("U_f matches the diagonal reference oracle") {
    std::mt19937_64 rng(63);

    // empty spectrum: identity circuit
    const RegisterLayout l2(2);
    const OracleBuild trivial = build_U_f(FourierSpectrum(2), l2);
    REQUIRE(trivial.gate_count == 0);

    // constant function: a single conditional global phase
    FourierSpectrum constant(2);
    constant.set(0, 1.3);
    const OracleBuild cb = build_U_f(constant, l2);
    for (std::uint64_t i = 0; i < l2.dim(); ++i) {
        StateVector b = basis_state(l2, i);
        apply_circuit(b, cb.circuit);
        const double phase = (i & 1) ? -1.3 : 1.3;
        REQUIRE(std::abs(b.amps[i] - std::polar(1.0, phase)) < 1e-12);
    }

    for (int n = 1; n <= 6; ++n) {
        const RegisterLayout layout(n);
        for (int trial = 0; trial < 10; ++trial) {
            const FunctionTable f(n, random_table_values(n, rng, -2.0, 2.0));
            const OracleBuild build = build_U_f(fourier_fast(f), layout);

            StateVector via_circuit = random_state(layout, rng);
            StateVector via_diagonal = via_circuit;
            apply_circuit(via_circuit, build.circuit);
            reference_oracle_apply(spectrum_to_table(build.spectrum), via_diagonal, +1);
            REQUIRE(max_amp_deviation(via_circuit, via_diagonal) < 1e-10);
        }
    }
}

TEST_CASE("U_f gate count and block order follow the stored spectrum") {
    std::mt19937_64 rng(64);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + int(rng() % 4);
        const FunctionTable f(n, random_table_values(n, rng));
        const FourierSpectrum spec = fourier_fast(f);
        const OracleBuild build = build_U_f(spec, RegisterLayout(n));

        REQUIRE(build.subset_order.size() == spec.support_size());
        std::size_t expected = 0;
        std::uint64_t prev_mask = 0;
        bool first = true;
        for (const SubsetMask& s : build.subset_order) {
            if (!first) REQUIRE(s.mask > prev_mask);
            prev_mask = s.mask;
            first = false;
            const std::size_t card = std::size_t(s.cardinality());
            const std::size_t r_gates = card > 0 ? card - 1 : 0;
            expected += 2 * (2 * r_gates + (card >= 1 ? 1 : 0)) + 4;
        }
        REQUIRE(build.gate_count == expected);
        REQUIRE(build.gate_count == build.circuit.size());
    }
}

TEST_CASE("U_S blocks commute at the circuit level") {
    std::mt19937_64 rng(65);
    const int n = 4;
    const RegisterLayout layout(n);
    const FunctionTable f(n, random_table_values(n, rng, -1.5, 1.5));
    const FourierSpectrum spec = fourier_fast(f);

    std::vector<std::pair<std::uint64_t, double>> blocks(spec.coeffs.begin(), spec.coeffs.end());
    const StateVector input = random_state(layout, rng);

    StateVector ascending = input;
    apply_circuit(ascending, build_U_f(spec, layout).circuit);

    for (int shuffle = 0; shuffle < 5; ++shuffle) {
        std::shuffle(blocks.begin(), blocks.end(), rng);
        Circuit permuted(layout);
        for (const auto& [mask, coeff] : blocks)
            permuted.extend(build_U_S(SubsetMask(n, mask), coeff, layout));
        StateVector out = input;
        apply_circuit(out, permuted);
        REQUIRE(max_amp_deviation(out, ascending) < 1e-10);
    }
}

TEST_CASE("U_f dagger undoes U_f and equals the negated build") {
    std::mt19937_64 rng(66);
    const int n = 3;
    const RegisterLayout layout(n);
    const FunctionTable f(n, random_table_values(n, rng, -2.0, 2.0));
    const FourierSpectrum spec = fourier_fast(f);

    const OracleBuild forward = build_U_f(spec, layout);
    const OracleBuild backward = build_U_f_dagger(spec, layout);

    StateVector s = random_state(layout, rng);
    const StateVector before = s;
    apply_circuit(s, forward.circuit);
    apply_circuit(s, backward.circuit);
    REQUIRE(max_amp_deviation(s, before) < 1e-10);

    // gate-level: dagger is the forward build with negated phases
    const OracleBuild negated = build_U_f(spec.negated(), layout);
    REQUIRE(backward.gate_count == negated.gate_count);
    for (std::size_t g = 0; g < backward.circuit.gates.size(); ++g) {
        REQUIRE(backward.circuit.gates[g].kind == negated.circuit.gates[g].kind);
        REQUIRE(backward.circuit.gates[g].alpha == negated.circuit.gates[g].alpha);
    }
}

TEST_CASE("reference oracle reproduces Boolean phase kickback") {
    std::mt19937_64 rng(67);
    const int n = 4;
    const RegisterLayout layout(n);

    // f = pi * g for a random Boolean g: on |psi>(x)|->, amplitudes flip sign
    // exactly on the support of g
    std::vector<double> f_values(16, 0.0);
    std::vector<bool> g(16, false);
    for (std::uint64_t x = 0; x < 16; ++x) {
        g[x] = rng() % 2;
        f_values[x] = g[x] ? std::numbers::pi : 0.0;
    }
    const FunctionTable f(n, f_values);

    // psi (x) |-> : amp(2x) = c_x / sqrt2, amp(2x+1) = -c_x / sqrt2
    std::mt19937_64 rng2(68);
    std::vector<Complex> work(16);
    double norm = 0.0;
    for (auto& c : work) {
        c = Complex{test_helpers::uniform(rng2, -1.0, 1.0), test_helpers::uniform(rng2, -1.0, 1.0)};
        norm += std::norm(c);
    }
    for (auto& c : work) c /= std::sqrt(norm);
    StateVector s{layout, std::vector<Complex>(layout.dim())};
    for (std::uint64_t x = 0; x < 16; ++x) {
        s.amps[2 * x] = work[x] / std::numbers::sqrt2;
        s.amps[2 * x + 1] = -work[x] / std::numbers::sqrt2;
    }

    StateVector expected = s;
    for (std::uint64_t x = 0; x < 16; ++x)
        if (g[x]) {
            expected.amps[2 * x] = -expected.amps[2 * x];
            expected.amps[2 * x + 1] = -expected.amps[2 * x + 1];
        }

    StateVector via_reference = s;
    reference_oracle_apply(f, via_reference, +1);
    REQUIRE(max_amp_deviation(via_reference, expected) < 1e-12);

    StateVector via_circuit = s;
    apply_circuit(via_circuit, build_U_f(fourier_fast(f), layout).circuit);
    REQUIRE(max_amp_deviation(via_circuit, expected) < 1e-10);
}

TEST_CASE("gate list export format is stable") {
    const RegisterLayout layout(2);
    Circuit c(layout);
    c.append(GateOp::x(0));
    c.append(GateOp::p(0, 0.5));
    c.append(GateOp::cnot(2, 1));
    c.append(GateOp::h(1));
    REQUIRE(export_gate_list(c) ==
            "layout n=2 ancilla=0\n"
            "X 0\n"
            "P 0 0.5\n"
            "CNOT 2 1\n"
            "H 1\n");

    Circuit angle(layout);
    angle.append(GateOp::p(0, std::numbers::pi / 3.0));
    REQUIRE(export_gate_list(angle) ==
            "layout n=2 ancilla=0\n"
            "P 0 1.0471975511965976\n");
}
