#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nbaa/fourier.hpp"

namespace nbaa {

// Symmetric QUBO matrix; the objective is B(x) = sum_{i,j} Q_ij x_i x_j,
// so every off-diagonal pair contributes twice.
struct QuboMatrix {
    int n;
    std::vector<double> entries;  // row-major n*n

    static QuboMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                bool symmetrize = false) {
        const std::size_t n = rows.size();
        if (n == 0) throw std::invalid_argument("qubo matrix must have at least one row");
        check_bit_width(static_cast<int>(n), 28);
        QuboMatrix q;
        q.n = static_cast<int>(n);
        q.entries.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n)
                throw std::invalid_argument("qubo matrix row " + std::to_string(i) + " has " +
                                            std::to_string(rows[i].size()) + " entries, expected " +
                                            std::to_string(n));
            for (std::size_t j = 0; j < n; ++j) {
                if (!std::isfinite(rows[i][j]))
                    throw std::invalid_argument("qubo matrix entry (" + std::to_string(i) + "," +
                                                std::to_string(j) + ") is not finite");
                q.entries[i * n + j] = rows[i][j];
            }
        }
        if (symmetrize) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double m = 0.5 * (q.entries[i * n + j] + q.entries[j * n + i]);
                    q.entries[i * n + j] = m;
                    q.entries[j * n + i] = m;
                }
        } else {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (q.entries[i * n + j] != q.entries[j * n + i])
                        throw std::invalid_argument(
                            "qubo matrix is not symmetric at (" + std::to_string(i) + "," +
                            std::to_string(j) + "); pass symmetrize to average (Q+Q^T)/2");
        }
        return q;
    }

    double at(int i, int j) const { return entries[static_cast<std::size_t>(i) * n + j]; }

    FunctionTable to_table() const {
        std::vector<double> v(std::uint64_t{1} << n, 0.0);
        for (std::uint64_t x = 0; x < v.size(); ++x) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                if (!((x >> i) & 1)) continue;
                acc += at(i, i);
                for (int j = i + 1; j < n; ++j)
                    if ((x >> j) & 1) acc += 2.0 * at(i, j);
            }
            v[x] = acc;
        }
        return FunctionTable(n, std::move(v));
    }
};

// q_- = sum of negative entries, q_+ = sum of positive entries,
// norm11 = entrywise 1-norm = q_+ - q_-. Since every x_i is 0 or 1,
// q_- <= B(x) <= q_+ for all x.
struct QuboBounds {
    double q_minus = 0.0;
    double q_plus = 0.0;
    double norm11 = 0.0;

    // An all-zero matrix gives no range to scale into.
    bool degenerate() const { return norm11 == 0.0; }
};

inline QuboBounds qubo_bounds(const QuboMatrix& q) {
    QuboBounds b;
    for (double e : q.entries) {
        if (e > 0.0) b.q_plus += e;
        if (e < 0.0) b.q_minus += e;
    }
    b.norm11 = b.q_plus - b.q_minus;
    return b;
}

// F(x) = sum_terms coeff * prod_{i in indices} x_i. Repeated indices inside
// a term collapse (x_i^2 = x_i) and terms with equal index sets merge by
// summing, both at ingestion.
struct PseudoBooleanPolynomial {
    int n;
    std::map<std::uint64_t, double> terms;  // monomial support mask -> coefficient

    static PseudoBooleanPolynomial from_terms(
        int n_bits, const std::vector<std::pair<std::vector<int>, double>>& raw) {
        check_bit_width(n_bits, 28);
        PseudoBooleanPolynomial p;
        p.n = n_bits;
        for (const auto& [indices, coeff] : raw) {
            if (!std::isfinite(coeff)) throw std::invalid_argument("term coefficient is not finite");
            std::uint64_t mask = 0;
            for (int i : indices) {
                if (i < 0 || i >= n_bits)
                    throw std::invalid_argument("term index " + std::to_string(i) +
                                                " outside [0, " + std::to_string(n_bits) + ")");
                mask |= std::uint64_t{1} << i;
            }
            p.terms[mask] += coeff;
        }
        for (auto it = p.terms.begin(); it != p.terms.end();)
            it = (it->second == 0.0) ? p.terms.erase(it) : std::next(it);
        return p;
    }

    int degree() const {
        int m = 0;
        for (const auto& [mask, c] : terms) m = std::max(m, std::popcount(mask));
        return m;
    }

    FunctionTable to_table() const {
        std::vector<double> v(std::uint64_t{1} << n, 0.0);
        for (std::uint64_t x = 0; x < v.size(); ++x) {
            double acc = 0.0;
            for (const auto& [mask, c] : terms)
                if ((x & mask) == mask) acc += c;
            v[x] = acc;
        }
        return FunctionTable(n, std::move(v));
    }

    // [sum of negative coefficients, sum of positive coefficients] shifted by
    // any constant term; every monomial takes values in {0, coeff}.
    std::pair<double, double> value_bounds() const {
        double lo = 0.0, hi = 0.0, constant = 0.0;
        for (const auto& [mask, c] : terms) {
            if (mask == 0) {
                constant += c;
            } else if (c > 0.0) {
                hi += c;
            } else {
                lo += c;
            }
        }
        return {constant + lo, constant + hi};
    }
};

// Closed-form spectrum of a QUBO objective: support only on |S| <= 2.
//   coeff(empty) = (sum_i Q_ii + sum_{i<j} Q_ij) / 2
//   coeff({i})   = -(sum_j Q_ij) / 2
//   coeff({i,j}) = Q_ij / 2
inline FourierSpectrum qubo_to_fourier(const QuboMatrix& q) {
    FourierSpectrum out(q.n);
    double diag = 0.0, upper = 0.0;
    for (int i = 0; i < q.n; ++i) {
        diag += q.at(i, i);
        for (int j = i + 1; j < q.n; ++j) upper += q.at(i, j);
    }
    out.set(0, 0.5 * (diag + upper));
    for (int i = 0; i < q.n; ++i) {
        double row = 0.0;
        for (int j = 0; j < q.n; ++j) row += q.at(i, j);
        out.set(std::uint64_t{1} << i, -0.5 * row);
    }
    for (int i = 0; i < q.n; ++i)
        for (int j = i + 1; j < q.n; ++j)
            out.set((std::uint64_t{1} << i) | (std::uint64_t{1} << j), 0.5 * q.at(i, j));
    return out;
}

// Spectrum of an order-m polynomial. Each monomial over index set I expands
// as prod_{i in I} (chi_empty - chi_{i})/2, i.e. it contributes
// coeff * (-1)^{|T|} 2^{-|I|} to every subset T of I; support stays inside
// |S| <= m.
inline FourierSpectrum poly_to_fourier(const PseudoBooleanPolynomial& p) {
    std::map<std::uint64_t, double> acc;
    for (const auto& [mask, coeff] : p.terms) {
        const double scaled = std::ldexp(coeff, -std::popcount(mask));
        std::uint64_t t = mask;
        while (true) {
            acc[t] += (std::popcount(t) & 1) ? -scaled : scaled;
            if (t == 0) break;
            t = (t - 1) & mask;
        }
    }
    FourierSpectrum out(p.n);
    for (const auto& [mask, c] : acc) out.set(mask, c);
    return out;
}

}  // namespace nbaa
