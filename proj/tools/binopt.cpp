#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nbaa/nbaa.hpp"
#include "nbaa/problem_io.hpp"

namespace {

constexpr int exit_parse = 2;
constexpr int exit_degenerate = 3;
constexpr int exit_verify = 4;

double parse_scale(const std::string& s) {
    if (s == "pi/2") return nbaa::default_scale;
    if (s == "pi/4") return std::numbers::pi / 4.0;
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw nbaa::parse_error("--scale expects pi/2, pi/4 or a radian value, got '" + s + "'");
    }
}

// -1 means auto.
long parse_iterations(const std::string& s) {
    if (s == "auto") return -1;
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size() || v < 0) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw nbaa::parse_error("--iterations expects 'auto' or a non-negative integer, got '" +
                                s + "'");
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write to " + path);
    out << text;
}

// Deterministic pseudo-random input state for circuit verification.
nbaa::StateVector random_state(const nbaa::RegisterLayout& layout, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    nbaa::StateVector s{layout, std::vector<nbaa::Complex>(layout.dim())};
    for (auto& a : s.amps)
        a = nbaa::Complex{2.0 * nbaa::uniform_unit(rng) - 1.0,
                          2.0 * nbaa::uniform_unit(rng) - 1.0};
    const double inv = 1.0 / std::sqrt(s.norm_sq());
    for (auto& a : s.amps) a *= inv;
    return s;
}

struct Options {
    std::string problem_path;
    std::string json_out;
    std::string csv_out;
    std::string gate_out;
    std::string mode;
    std::string iterations = "auto";
    std::string scale = "pi/2";
    std::string oracle = "circuit";
    long shots = 0;
    bool shots_given = false;
    std::uint64_t seed = 0;
    bool verify = false;
    bool symmetrize = false;
    int max_qubits = 20;
};

int run_fourier(const Options& opt) {
    const nbaa::ProblemFile pf = nbaa::load_problem(opt.problem_path);
    const nbaa::CompiledProblem cp = nbaa::compile_problem(pf, opt.symmetrize);
    write_text(opt.json_out, nbaa::spectrum_to_json(cp.spectrum).dump(2) + "\n");
    return 0;
}

int run_amplify(const Options& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const nbaa::ProblemFile pf = nbaa::load_problem(opt.problem_path);
    if (pf.n > opt.max_qubits)
        throw std::runtime_error("problem has " + std::to_string(pf.n) +
                                 " work qubits, above the --max-qubits limit of " +
                                 std::to_string(opt.max_qubits));
    const nbaa::CompiledProblem cp = nbaa::compile_problem(pf, opt.symmetrize);

    nbaa::AAConfig cfg;
    cfg.scale = parse_scale(opt.scale);
    const long iters = parse_iterations(opt.iterations);
    if (iters >= 0) cfg.iterations = iters;
    if (opt.shots_given) {
        cfg.shots = opt.shots;
        cfg.seed = opt.seed;
    }
    const auto which =
        opt.mode == "min" ? nbaa::WhichExtremum::min : nbaa::WhichExtremum::max;
    const auto oracle =
        opt.oracle == "circuit" ? nbaa::OracleKind::circuit : nbaa::OracleKind::diagonal;

    const nbaa::AARunReport rep =
        nbaa::find_extrema(cp.spectrum, {cp.lower, cp.upper}, which, cfg, oracle);

    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    nbaa::json config_echo{{"mode", opt.mode},
                           {"iterations", opt.iterations},
                           {"scale", opt.scale},
                           {"oracle", opt.oracle},
                           {"symmetrize", opt.symmetrize}};
    if (opt.shots_given) {
        config_echo["shots"] = opt.shots;
        config_echo["seed"] = opt.seed;
    }
    write_text(opt.json_out,
               nbaa::report_to_json(rep, pf, config_echo, nbaa::version, wall_ms).dump(2) + "\n");
    if (!opt.csv_out.empty()) write_text(opt.csv_out, nbaa::report_csv(rep, pf.n));

    const auto& top = rep.ranked.front();
    std::cerr << "theta=" << rep.theta << " K=" << rep.K_used << " lambda_K=" << rep.lambda_K
              << " top=" << nbaa::format_bits_msb(top.x, pf.n) << " F=" << top.objective << "\n";
    return 0;
}

int run_oracle(const Options& opt) {
    const nbaa::ProblemFile pf = nbaa::load_problem(opt.problem_path);
    const nbaa::CompiledProblem cp = nbaa::compile_problem(pf, opt.symmetrize);

    nbaa::FourierSpectrum spectrum = cp.spectrum;
    if (!opt.mode.empty()) {
        const auto dir =
            opt.mode == "min" ? nbaa::Direction::plus : nbaa::Direction::minus;
        spectrum =
            nbaa::scale_objective(cp.spectrum, cp.lower, cp.upper, dir, parse_scale(opt.scale))
                .scaled;
    }

    const nbaa::RegisterLayout layout(cp.n);
    const nbaa::OracleBuild build = nbaa::build_U_f(spectrum, layout);
    write_text(opt.gate_out, nbaa::export_gate_list(build.circuit));

    if (opt.verify) {
        nbaa::StateVector circuit_state = random_state(layout, 0x5eed5eedULL);
        nbaa::StateVector reference_state = circuit_state;
        nbaa::apply_circuit(circuit_state, build.circuit);
        nbaa::reference_oracle_apply(nbaa::spectrum_to_table(spectrum), reference_state, +1);
        double dev = 0.0;
        for (std::uint64_t i = 0; i < circuit_state.amps.size(); ++i)
            dev = std::max(dev, std::abs(circuit_state.amps[i] - reference_state.amps[i]));
        std::cerr << "verify: max amplitude deviation " << dev << "\n";
        if (dev > 1e-9) {
            std::cerr << "error: synthesized circuit disagrees with the diagonal oracle\n";
            return exit_verify;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parity-basis Fourier analysis, phase-oracle synthesis and amplitude "
                 "amplification for binary optimization"};
    app.require_subcommand(1);

    Options opt;

    auto* fourier = app.add_subcommand("fourier", "Write the sparse parity-basis spectrum");
    fourier->add_option("problem", opt.problem_path, "problem file (JSON)")->required();
    fourier->add_option("--json", opt.json_out, "write the spectrum here instead of stdout");
    fourier->add_flag("--symmetrize", opt.symmetrize,
                      "average an asymmetric qubo matrix with its transpose");

    auto* amplify =
        app.add_subcommand("amplify", "Run amplitude amplification and rank extremum candidates");
    amplify->add_option("problem", opt.problem_path, "problem file (JSON)")->required();
    amplify->add_option("--mode", opt.mode, "which extremum to look for")
        ->required()
        ->check(CLI::IsMember({"min", "max"}));
    amplify->add_option("--iterations", opt.iterations, "iteration count, or 'auto'")
        ->capture_default_str();
    amplify->add_option("--scale", opt.scale, "scaled-objective range: pi/2, pi/4 or radians")
        ->capture_default_str();
    auto* shots_opt = amplify->add_option(
        "--shots", opt.shots, "sample the final state instead of reporting exact probabilities");
    auto* seed_opt =
        amplify->add_option("--seed", opt.seed, "measurement RNG seed (required with --shots)");
    shots_opt->needs(seed_opt);
    amplify->add_option("--csv", opt.csv_out, "write per-x histogram rows here");
    amplify->add_option("--json", opt.json_out, "write the report here instead of stdout");
    amplify->add_option("--oracle", opt.oracle, "oracle backend")
        ->check(CLI::IsMember({"circuit", "diagonal"}))
        ->capture_default_str();
    amplify->add_flag("--symmetrize", opt.symmetrize,
                      "average an asymmetric qubo matrix with its transpose");
    amplify->add_option("--max-qubits", opt.max_qubits, "refuse problems wider than this")
        ->capture_default_str();

    auto* oracle = app.add_subcommand("oracle", "Synthesize the oracle circuit gate list");
    oracle->add_option("problem", opt.problem_path, "problem file (JSON)")->required();
    oracle->add_option("--out", opt.gate_out, "write the gate list here instead of stdout");
    oracle
        ->add_option("--mode", opt.mode,
                     "synthesize the oracle of the min/max scaled objective instead of the raw one")
        ->check(CLI::IsMember({"min", "max"}));
    oracle->add_option("--scale", opt.scale, "scaled-objective range (with --mode)")
        ->capture_default_str();
    oracle->add_flag("--verify", opt.verify,
                     "simulate the circuit against the diagonal oracle and report the deviation");
    oracle->add_flag("--symmetrize", opt.symmetrize,
                     "average an asymmetric qubo matrix with its transpose");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_parse;
    }
    opt.shots_given = shots_opt->count() > 0;

    try {
        if (fourier->parsed()) return run_fourier(opt);
        if (amplify->parsed()) return run_amplify(opt);
        return run_oracle(opt);
    } catch (const nbaa::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_parse;
    } catch (const nbaa::degenerate_objective_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_degenerate;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_parse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
