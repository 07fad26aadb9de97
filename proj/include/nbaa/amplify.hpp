#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nbaa/fourier.hpp"
#include "nbaa/oracle.hpp"
#include "nbaa/statevector.hpp"

namespace nbaa {

inline constexpr double default_scale = std::numbers::pi / 2.0;

enum class Direction { plus, minus };
enum class WhichExtremum { min, max };
enum class OracleKind { circuit, diagonal };

// An objective F rescaled into [0, scale] so that the maxima of the scaled
// function sit on the requested extremum of F:
//   plus:  f(x) = (upper - F(x)) / (upper - lower) * scale, maximal at argmin F
//   minus: f(x) = (F(x) - lower) / (upper - lower) * scale, maximal at argmax F
// The scaled spectrum is the affine image of F's spectrum: the constant
// coefficient is shifted, every other coefficient picks up the factor
// -+ scale / (upper - lower).
struct ScaledObjective {
    int n;
    FourierSpectrum objective;  // spectrum of F
    double lower;               // lower <= F(x)
    double upper;               // F(x) <= upper
    Direction direction;
    double scale;
    FourierSpectrum scaled;     // spectrum of the rescaled function

    double objective_value(std::uint64_t x) const {
        return evaluate_spectrum(objective, BitString(n, x));
    }
    double scaled_value(std::uint64_t x) const {
        return evaluate_spectrum(scaled, BitString(n, x));
    }
    FunctionTable objective_table() const { return spectrum_to_table(objective); }
    FunctionTable scaled_table() const { return spectrum_to_table(scaled); }
};

inline ScaledObjective scale_objective(const FourierSpectrum& objective, double lower,
                                       double upper, Direction direction,
                                       double scale = default_scale) {
    if (!std::isfinite(lower) || !std::isfinite(upper))
        throw std::invalid_argument("objective bounds must be finite");
    if (!(upper > lower))
        throw degenerate_objective_error(
            "objective bounds coincide (" + std::to_string(lower) +
            "); a constant objective offers nothing to amplify");
    if (!(scale > 0.0) || scale > default_scale + 1e-12)
        throw std::invalid_argument("scale must lie in (0, pi/2], got " + std::to_string(scale));

    ScaledObjective out{objective.n, objective, lower, upper, direction, scale,
                        FourierSpectrum(objective.n)};
    const double sign = direction == Direction::plus ? 1.0 : -1.0;
    const double bound = direction == Direction::plus ? upper : lower;
    const double k = scale / (upper - lower);
    out.scaled.set(0, sign * k * (bound - objective.at(0)));
    for (const auto& [mask, c] : objective.coeffs)
        if (mask != 0) out.scaled.set(mask, -sign * k * c);

    // Desk-scale sanity: the affine image must land in [0, scale]. For wider
    // registers we trust the caller's bound arithmetic.
    if (objective.n <= 16) {
        const FunctionTable t = out.scaled_table();
        for (std::uint64_t x = 0; x < t.size(); ++x)
            if (t.values[x] < -1e-9 || t.values[x] > scale + 1e-9)
                throw std::invalid_argument(
                    "bounds [" + std::to_string(lower) + ", " + std::to_string(upper) +
                    "] do not contain the objective's range (scaled value " +
                    std::to_string(t.values[x]) + " at x=" + std::to_string(x) + ")");
    }
    return out;
}

inline ScaledObjective scale_objective(const FunctionTable& objective, double lower, double upper,
                                       Direction direction, double scale = default_scale) {
    return scale_objective(fourier_fast(objective), lower, upper, direction, scale);
}

struct AAConfig {
    std::optional<long> iterations;    // empty: auto, the lambda-maximizing count
    long iteration_cap = 1'000'000;
    std::optional<long> shots;         // empty: exact mode (analytic Born marginals)
    std::uint64_t seed = 0;            // sampled mode
    double scale = default_scale;      // used when this config drives the scaling
};

struct RankedCandidate {
    std::uint64_t x;
    double objective;    // F(x)
    double probability;  // pK(x)
};

struct AARunReport {
    double theta = 0.0;
    long K_used = 0;
    double lambda_K = 0.0;
    double lambda_opt = 0.0;
    bool iteration_capped = false;
    std::vector<double> p0;
    std::vector<double> pK;
    std::vector<double> predicted_pK;      // closed-form p0 (1 + lambda_K (cos theta - cos f))
    std::optional<int> ancilla_outcome;    // sampled mode
    std::vector<RankedCandidate> ranked;   // pK descending, ties by x ascending
    double ancilla_bias_max = 0.0;         // max |P(a=0) - 1/2| across iterations
    double branch_mismatch_max = 0.0;      // max gap between the two conditional work distributions
    std::optional<long> shots;
    std::uint64_t seed = 0;
    std::string rng_name;                  // sampled mode provenance
    OracleKind oracle = OracleKind::circuit;
};

// Uniform superposition with the ancilla in |+>: every amplitude is the real
// constant 2^{-(n+1)/2}. Set directly rather than via H gates so the
// conjugate-pair symmetry amp(2x+1) == conj(amp(2x)) holds exactly.
inline StateVector prepare_initial(const RegisterLayout& layout) {
    const double a = 1.0 / std::sqrt(static_cast<double>(layout.dim()));
    return StateVector{layout, std::vector<Complex>(layout.dim(), Complex{a, 0.0})};
}

// theta implicitly defined by cos(theta) = sum_x p0(x) cos(f(x)).
inline double compute_theta(const FunctionTable& scaled_values, const std::vector<double>& p0) {
    if (scaled_values.size() != p0.size())
        throw width_mismatch_error("compute_theta: table and distribution sizes differ");
    double mass = 0.0;
    for (double p : p0) mass += p;
    if (std::abs(mass - 1.0) > 1e-9)
        throw std::invalid_argument("compute_theta: p0 sums to " + std::to_string(mass));
    double c = 0.0;
    for (std::uint64_t x = 0; x < p0.size(); ++x)
        c += p0[x] * std::cos(scaled_values.values[x]);
    if (std::abs(c) > 1.0 + 1e-12)
        throw simulation_error("compute_theta: cos(theta) = " + std::to_string(c) +
                               " lies outside [-1, 1]");
    return std::acos(std::clamp(c, -1.0, 1.0));
}

inline void check_theta_domain(double theta) {
    if (!(theta > 0.0) || !(theta < std::numbers::pi))
        throw degenerate_objective_error("theta = " + std::to_string(theta) +
                                         " is degenerate (sin^2 theta vanishes)");
}

// Amplification factor after K iterations.
inline double lambda_K(double theta, long K) {
    check_theta_domain(theta);
    if (K < 0) throw std::invalid_argument("iteration count must be >= 0");
    const double s = std::sin(theta);
    return (std::cos(theta) - std::cos((2.0 * static_cast<double>(K) + 1.0) * theta)) / (s * s);
}

// Upper bound of lambda_K over all K.
inline double lambda_opt(double theta) {
    check_theta_domain(theta);
    return 1.0 / (1.0 - std::cos(theta));
}

// floor(pi / (2 theta)), the last K of the monotone regime and the
// lambda-maximizing iteration count.
inline long optimal_iterations(double theta) {
    check_theta_domain(theta);
    return static_cast<long>(std::floor(std::numbers::pi / (2.0 * theta)));
}

// Reflection about the uniform initial state: 2|Psi0><Psi0| - 1 applied
// directly to the amplitudes, i.e. amp <- 2*mean(amps) - amp.
inline void reflect_about_initial(StateVector& state) {
    Complex sum{0.0, 0.0};
    for (const Complex& a : state.amps) sum += a;
    const Complex m = sum * (2.0 / static_cast<double>(state.amps.size()));
    for (Complex& a : state.amps) a = m - a;
}

// Closed-form prediction p_K(x) = p0(x) (1 + lambda_K (cos theta - cos f(x))).
inline std::vector<double> predicted_probabilities(const FunctionTable& scaled_values,
                                                   double theta, long K,
                                                   const std::vector<double>& p0) {
    if (scaled_values.size() != p0.size())
        throw width_mismatch_error("predicted_probabilities: table and distribution sizes differ");
    const double lam = lambda_K(theta, K);
    const double ct = std::cos(theta);
    std::vector<double> out(p0.size());
    for (std::uint64_t x = 0; x < p0.size(); ++x)
        out[x] = p0[x] * (1.0 + lam * (ct - std::cos(scaled_values.values[x])));
    return out;
}

namespace detail {

struct AncillaStats {
    double bias;      // |P(a=0) - 1/2|
    double mismatch;  // max_x |P(x | a=0) - P(x | a=1)|
};

inline AncillaStats ancilla_stats(const StateVector& state) {
    const std::uint64_t wd = state.layout.work_dim();
    double p0 = 0.0, p1 = 0.0;
    for (std::uint64_t x = 0; x < wd; ++x) {
        p0 += std::norm(state.amps[2 * x]);
        p1 += std::norm(state.amps[2 * x + 1]);
    }
    double gap = 0.0;
    if (p0 > 0.0 && p1 > 0.0)
        for (std::uint64_t x = 0; x < wd; ++x)
            gap = std::max(gap, std::abs(std::norm(state.amps[2 * x]) / p0 -
                                         std::norm(state.amps[2 * x + 1]) / p1));
    return {std::abs(p0 - 0.5), gap};
}

}  // namespace detail

// Algorithm loop: starting from the uniform |Psi0> with j = 0, apply
// U_f^dagger on even j and U_f on odd j, each followed by the reflection
// about |Psi0>, for K iterations. Exact mode reports analytic Born
// marginals; sampled mode measures the ancilla once and then draws the
// requested number of work-register samples.
inline AARunReport run(const ScaledObjective& f, const AAConfig& cfg,
                       OracleKind oracle = OracleKind::circuit) {
    if (cfg.iteration_cap < 1) throw std::invalid_argument("iteration cap must be >= 1");
    if (cfg.shots && *cfg.shots < 1) throw std::invalid_argument("shots must be >= 1");

    const RegisterLayout layout(f.n);
    const FunctionTable scaled = f.scaled_table();
    StateVector psi = prepare_initial(layout);

    AARunReport rep;
    rep.oracle = oracle;
    rep.p0 = work_probabilities(psi);
    rep.theta = compute_theta(scaled, rep.p0);
    if (rep.theta < 1e-6)
        throw degenerate_objective_error(
            "theta = " + std::to_string(rep.theta) +
            " is below 1e-6; the objective has no amplifiable contrast");
    if (std::numbers::pi - rep.theta < 1e-6)
        throw degenerate_objective_error("theta = " + std::to_string(rep.theta) +
                                         " is degenerate (too close to pi)");

    if (cfg.iterations) {
        if (*cfg.iterations < 0) throw std::invalid_argument("iteration count must be >= 0");
        if (*cfg.iterations > cfg.iteration_cap)
            throw std::invalid_argument("requested " + std::to_string(*cfg.iterations) +
                                        " iterations exceeds the cap of " +
                                        std::to_string(cfg.iteration_cap));
        rep.K_used = *cfg.iterations;
    } else {
        rep.K_used = optimal_iterations(rep.theta);
        if (rep.K_used > cfg.iteration_cap) {
            rep.K_used = cfg.iteration_cap;
            rep.iteration_capped = true;
        }
    }
    rep.lambda_K = lambda_K(rep.theta, rep.K_used);
    rep.lambda_opt = lambda_opt(rep.theta);

    std::optional<OracleBuild> uf, uf_dagger;
    if (oracle == OracleKind::circuit) {
        uf = build_U_f(f.scaled, layout);
        uf_dagger = build_U_f_dagger(f.scaled, layout);
    }

    for (long j = 0; j < rep.K_used; ++j) {
        const bool dagger = (j % 2 == 0);
        if (oracle == OracleKind::circuit)
            apply_circuit(psi, dagger ? uf_dagger->circuit : uf->circuit);
        else
            reference_oracle_apply(scaled, psi, dagger ? -1 : +1);
        reflect_about_initial(psi);

        const double norm = psi.norm_sq();
        if (std::abs(norm - 1.0) > 1e-8)
            throw simulation_error("state norm drifted to " + std::to_string(norm) +
                                   " after iteration " + std::to_string(j));
        const auto stats = detail::ancilla_stats(psi);
        rep.ancilla_bias_max = std::max(rep.ancilla_bias_max, stats.bias);
        rep.branch_mismatch_max = std::max(rep.branch_mismatch_max, stats.mismatch);
    }

    rep.predicted_pK = predicted_probabilities(scaled, rep.theta, rep.K_used, rep.p0);

    if (!cfg.shots) {
        rep.pK = work_probabilities(psi);
    } else {
        rep.shots = cfg.shots;
        rep.seed = cfg.seed;
        rep.rng_name = "mt19937_64";
        std::mt19937_64 rng(cfg.seed);
        rep.ancilla_outcome = measure_qubit(psi, RegisterLayout::ancilla, rng);
        const std::vector<double> born = work_probabilities(psi);
        std::vector<double> cdf(born.size());
        double acc = 0.0;
        for (std::uint64_t x = 0; x < born.size(); ++x) cdf[x] = (acc += born[x]);
        std::vector<long> counts(born.size(), 0);
        for (long s = 0; s < *cfg.shots; ++s) {
            const double u = uniform_unit(rng) * acc;
            const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
            counts[static_cast<std::size_t>(it - cdf.begin())] += 1;
        }
        rep.pK.resize(born.size());
        for (std::uint64_t x = 0; x < born.size(); ++x)
            rep.pK[x] = static_cast<double>(counts[x]) / static_cast<double>(*cfg.shots);
    }

    const FunctionTable objective = f.objective_table();
    rep.ranked.resize(layout.work_dim());
    for (std::uint64_t x = 0; x < layout.work_dim(); ++x)
        rep.ranked[x] = {x, objective.values[x], rep.pK[x]};
    std::sort(rep.ranked.begin(), rep.ranked.end(),
              [](const RankedCandidate& a, const RankedCandidate& b) {
                  if (a.probability != b.probability) return a.probability > b.probability;
                  return a.x < b.x;
              });
    return rep;
}

// Extremum search: min runs the plus scaling, max the minus scaling; the
// head of the ranked list is the candidate.
inline AARunReport find_extrema(const FourierSpectrum& objective,
                                std::pair<double, double> bounds, WhichExtremum which,
                                const AAConfig& cfg, OracleKind oracle = OracleKind::circuit) {
    const Direction dir = which == WhichExtremum::min ? Direction::plus : Direction::minus;
    return run(scale_objective(objective, bounds.first, bounds.second, dir, cfg.scale), cfg,
               oracle);
}

inline AARunReport find_extrema(const FunctionTable& objective, std::pair<double, double> bounds,
                                WhichExtremum which, const AAConfig& cfg,
                                OracleKind oracle = OracleKind::circuit) {
    return find_extrema(fourier_fast(objective), bounds, which, cfg, oracle);
}

}  // namespace nbaa
