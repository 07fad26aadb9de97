#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nbaa/amplify.hpp"
#include "nbaa/pseudo_boolean.hpp"

namespace nbaa {

using json = nlohmann::json;

enum class ProblemKind { qubo, poly, table };

inline std::string to_string(ProblemKind k) {
    switch (k) {
        case ProblemKind::qubo: return "qubo";
        case ProblemKind::poly: return "poly";
        case ProblemKind::table: return "table";
    }
    return "?";
}

// One problem document: {"kind": "qubo"|"poly"|"table", "n": int,
// "payload": ..., "name": optional string}. Payloads: matrix rows (row i is
// variable i), a term list [{"indices": [...], "coeff": c}, ...], or the
// 2^n table values in index order.
struct ProblemFile {
    ProblemKind kind = ProblemKind::table;
    int n = 0;
    std::string name;
    std::vector<std::vector<double>> matrix;
    std::vector<std::pair<std::vector<int>, double>> terms;
    std::vector<double> values;
};

inline ProblemFile parse_problem(const json& doc, const std::string& context) {
    auto fail = [&](const std::string& what) -> void {
        throw parse_error(context + ": " + what);
    };
    if (!doc.is_object()) fail("document is not an object");
    if (!doc.contains("kind") || !doc["kind"].is_string()) fail("missing string field 'kind'");
    if (!doc.contains("n") || !doc["n"].is_number_integer()) fail("missing integer field 'n'");
    if (!doc.contains("payload")) fail("missing field 'payload'");

    ProblemFile p;
    const std::string kind = doc["kind"].get<std::string>();
    if (kind == "qubo")
        p.kind = ProblemKind::qubo;
    else if (kind == "poly")
        p.kind = ProblemKind::poly;
    else if (kind == "table")
        p.kind = ProblemKind::table;
    else
        fail("unknown kind '" + kind + "' (expected qubo, poly or table)");

    p.n = doc["n"].get<int>();
    if (p.n < 1 || p.n > 27) fail("n = " + std::to_string(p.n) + " outside [1, 27]");
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) fail("field 'name' must be a string");
        p.name = doc["name"].get<std::string>();
    }

    const json& payload = doc["payload"];
    switch (p.kind) {
        case ProblemKind::qubo: {
            if (!payload.is_array() || payload.size() != static_cast<std::size_t>(p.n))
                fail("qubo payload must be an array of " + std::to_string(p.n) + " rows");
            for (std::size_t i = 0; i < payload.size(); ++i) {
                const json& row = payload[i];
                if (!row.is_array() || row.size() != static_cast<std::size_t>(p.n))
                    fail("qubo row " + std::to_string(i) + " must hold " + std::to_string(p.n) +
                         " numbers");
                std::vector<double> r;
                for (std::size_t j = 0; j < row.size(); ++j) {
                    if (!row[j].is_number())
                        fail("qubo entry (" + std::to_string(i) + "," + std::to_string(j) +
                             ") is not a number");
                    r.push_back(row[j].get<double>());
                }
                p.matrix.push_back(std::move(r));
            }
            break;
        }
        case ProblemKind::poly: {
            if (!payload.is_array()) fail("poly payload must be an array of terms");
            for (std::size_t t = 0; t < payload.size(); ++t) {
                const json& term = payload[t];
                const std::string where = "poly term " + std::to_string(t);
                if (!term.is_object() || !term.contains("indices") || !term.contains("coeff"))
                    fail(where + " needs fields 'indices' and 'coeff'");
                if (!term["indices"].is_array()) fail(where + ": 'indices' must be an array");
                if (!term["coeff"].is_number()) fail(where + ": 'coeff' must be a number");
                std::vector<int> idx;
                for (const json& i : term["indices"]) {
                    if (!i.is_number_integer()) fail(where + ": index is not an integer");
                    const int v = i.get<int>();
                    if (v < 0 || v >= p.n)
                        fail(where + ": index " + std::to_string(v) + " outside [0, " +
                             std::to_string(p.n) + ")");
                    idx.push_back(v);
                }
                p.terms.emplace_back(std::move(idx), term["coeff"].get<double>());
            }
            break;
        }
        case ProblemKind::table: {
            const std::uint64_t want = std::uint64_t{1} << p.n;
            if (!payload.is_array() || payload.size() != want)
                fail("table payload must hold exactly 2^" + std::to_string(p.n) + " = " +
                     std::to_string(want) + " values");
            for (std::size_t x = 0; x < payload.size(); ++x) {
                if (!payload[x].is_number())
                    fail("table entry " + std::to_string(x) + " is not a number");
                p.values.push_back(payload[x].get<double>());
            }
            break;
        }
    }
    return p;
}

inline ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path + ": cannot open file");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
    return parse_problem(doc, path);
}

// A problem reduced to what the algorithms consume: the objective's spectrum
// and bounds lower <= F <= upper. Bounds come from the sign-split entry sums
// for qubo (q_-/q_+), from the signed coefficient sums for poly, and from
// the exact min/max for table.
struct CompiledProblem {
    ProblemKind kind = ProblemKind::table;
    int n = 0;
    std::string name;
    FourierSpectrum spectrum{1};
    double lower = 0.0;
    double upper = 0.0;
};

inline CompiledProblem compile_problem(const ProblemFile& p, bool symmetrize = false) {
    CompiledProblem out;
    out.kind = p.kind;
    out.n = p.n;
    out.name = p.name;
    switch (p.kind) {
        case ProblemKind::qubo: {
            QuboMatrix q = QuboMatrix::from_rows(p.matrix, symmetrize);
            const QuboBounds b = qubo_bounds(q);
            out.spectrum = qubo_to_fourier(q);
            out.lower = b.q_minus;
            out.upper = b.q_plus;
            break;
        }
        case ProblemKind::poly: {
            PseudoBooleanPolynomial poly = PseudoBooleanPolynomial::from_terms(p.n, p.terms);
            out.spectrum = poly_to_fourier(poly);
            std::tie(out.lower, out.upper) = poly.value_bounds();
            break;
        }
        case ProblemKind::table: {
            FunctionTable t(p.n, p.values);
            out.spectrum = fourier_fast(t);
            const auto [lo, hi] = std::minmax_element(t.values.begin(), t.values.end());
            out.lower = *lo;
            out.upper = *hi;
            break;
        }
    }
    return out;
}

// Most-significant bit first, matching how basis states are usually written.
inline std::string format_bits_msb(std::uint64_t x, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int j = 0; j < n; ++j)
        if ((x >> j) & 1) s[static_cast<std::size_t>(n - 1 - j)] = '1';
    return s;
}

inline json subset_indices(std::uint64_t mask, int n) {
    json out = json::array();
    for (int j = 0; j < n; ++j)
        if ((mask >> j) & 1) out.push_back(j);
    return out;
}

// Sparse spectrum document, entries sorted by mask.
inline json spectrum_to_json(const FourierSpectrum& s) {
    json entries = json::array();
    for (const auto& [mask, c] : s.coeffs)
        entries.push_back({{"mask", mask}, {"subset", subset_indices(mask, s.n)}, {"coeff", c}});
    return json{{"n", s.n}, {"entries", std::move(entries)}};
}

inline json problem_to_json(const ProblemFile& p) {
    json out{{"kind", to_string(p.kind)}, {"n", p.n}};
    if (!p.name.empty()) out["name"] = p.name;
    switch (p.kind) {
        case ProblemKind::qubo:
            out["payload"] = p.matrix;
            break;
        case ProblemKind::poly: {
            json terms = json::array();
            for (const auto& [idx, c] : p.terms)
                terms.push_back({{"indices", idx}, {"coeff", c}});
            out["payload"] = std::move(terms);
            break;
        }
        case ProblemKind::table:
            out["payload"] = p.values;
            break;
    }
    return out;
}

inline std::string iso_timestamp_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Full run document: the report plus problem echo, tool version, config echo
// and timing. Everything except the "timing" object is reproducible
// byte-for-byte for identical inputs and seed.
inline json report_to_json(const AARunReport& r, const ProblemFile& problem,
                           const json& config_echo, const std::string& tool_version,
                           double wall_ms) {
    const int n = problem.n;
    std::vector<double> objective(r.p0.size(), 0.0);
    for (const RankedCandidate& c : r.ranked) objective[c.x] = c.objective;
    json probs = json::array();
    for (std::uint64_t x = 0; x < r.p0.size(); ++x) {
        probs.push_back({{"x", format_bits_msb(x, n)},
                         {"index", x},
                         {"objective", objective[x]},
                         {"p0", r.p0[x]},
                         {"pK", r.pK[x]},
                         {"predicted_pK", r.predicted_pK[x]}});
    }
    json ranked = json::array();
    for (const RankedCandidate& c : r.ranked)
        ranked.push_back(
            {{"x", format_bits_msb(c.x, n)}, {"objective", c.objective}, {"pK", c.probability}});

    json out{{"tool", {{"name", "binopt"}, {"version", tool_version}}},
             {"problem", problem_to_json(problem)},
             {"config", config_echo},
             {"theta", r.theta},
             {"iterations", r.K_used},
             {"iteration_capped", r.iteration_capped},
             {"lambda_K", r.lambda_K},
             {"lambda_opt", r.lambda_opt},
             {"mode", r.shots ? "sampled" : "exact"},
             {"oracle", r.oracle == OracleKind::circuit ? "circuit" : "diagonal"},
             {"ancilla",
              {{"bias_max", r.ancilla_bias_max}, {"branch_mismatch_max", r.branch_mismatch_max}}},
             {"probabilities", std::move(probs)},
             {"ranked", std::move(ranked)},
             {"timing", {{"timestamp", iso_timestamp_utc()}, {"wall_ms", wall_ms}}}};
    if (r.shots) {
        out["rng"] = {{"name", r.rng_name}, {"seed", r.seed}, {"shots", *r.shots}};
        out["ancilla"]["outcome"] = *r.ancilla_outcome;
    }
    return out;
}

// Histogram rows in index order: x_binary, F(x), p0, pK, ratio (pK / p0).
inline std::string report_csv(const AARunReport& r, int n) {
    std::vector<double> objective(r.p0.size(), 0.0);
    for (const RankedCandidate& c : r.ranked) objective[c.x] = c.objective;
    std::ostringstream out;
    out << "x_binary,F,p0,pK,ratio\n";
    out.precision(17);
    for (std::uint64_t x = 0; x < r.p0.size(); ++x) {
        const double ratio = r.p0[x] > 0.0 ? r.pK[x] / r.p0[x] : 0.0;
        out << format_bits_msb(x, n) << ',' << objective[x] << ',' << r.p0[x] << ',' << r.pK[x]
            << ',' << ratio << '\n';
    }
    return out.str();
}

}  // namespace nbaa
