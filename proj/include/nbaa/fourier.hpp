#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nbaa/bits.hpp"

namespace nbaa {

// A real-valued function on {0,1}^n as a dense table; entry x holds f(x).
struct FunctionTable {
    int n;
    std::vector<double> values;

    FunctionTable(int n_bits, std::vector<double> v) : n(n_bits), values(std::move(v)) {
        check_bit_width(n_bits, 28);
        if (values.size() != (std::uint64_t{1} << n_bits))
            throw std::invalid_argument("function table needs 2^" + std::to_string(n_bits) +
                                        " entries, got " + std::to_string(values.size()));
        for (double x : values)
            if (!std::isfinite(x)) throw std::invalid_argument("function table entry is not finite");
    }

    double operator()(std::uint64_t x) const { return values[x]; }
    std::uint64_t size() const { return values.size(); }
};

// Sparse parity-basis expansion of a function: mask -> coefficient at the
// subset that mask encodes. Coefficients with magnitude below drop_threshold
// are not stored, so support size tracks the genuinely nonzero part of the
// spectrum (one oracle sub-circuit per stored entry).
struct FourierSpectrum {
    static constexpr double drop_threshold = 1e-14;

    int n;
    std::map<std::uint64_t, double> coeffs;

    explicit FourierSpectrum(int n_bits) : n(n_bits) { check_bit_width(n_bits); }

    double at(std::uint64_t mask) const {
        auto it = coeffs.find(mask);
        return it == coeffs.end() ? 0.0 : it->second;
    }

    void set(std::uint64_t mask, double c) {
        if (mask >> n)
            throw std::invalid_argument("spectrum mask " + std::to_string(mask) +
                                        " does not fit in " + std::to_string(n) + " bits");
        if (std::abs(c) < drop_threshold)
            coeffs.erase(mask);
        else
            coeffs[mask] = c;
    }

    std::size_t support_size() const { return coeffs.size(); }

    FourierSpectrum negated() const {
        FourierSpectrum out(n);
        for (const auto& [mask, c] : coeffs) out.coeffs.emplace(mask, -c);
        return out;
    }
};

// <f, g> = 2^-n sum_x f(x) g(x).
inline double inner_product(const FunctionTable& f, const FunctionTable& g) {
    if (f.n != g.n)
        throw width_mismatch_error("inner_product: operand widths differ (" +
                                   std::to_string(f.n) + " vs " + std::to_string(g.n) + ")");
    double acc = 0.0;
    for (std::uint64_t x = 0; x < f.size(); ++x) acc += f.values[x] * g.values[x];
    return acc / static_cast<double>(f.size());
}

// chi_S as a dense table.
inline FunctionTable parity_table(const SubsetMask& s) {
    std::vector<double> v(std::uint64_t{1} << s.n);
    for (std::uint64_t x = 0; x < v.size(); ++x)
        v[x] = (std::popcount(s.mask & x) & 1) ? -1.0 : 1.0;
    return FunctionTable(s.n, std::move(v));
}

// Definition-level transform: coefficient at S is <f, chi_S>, computed by
// direct summation over the cube. O(4^n); the reference the fast transform
// is checked against.
inline FourierSpectrum fourier_naive(const FunctionTable& f) {
    FourierSpectrum out(f.n);
    const std::uint64_t size = f.size();
    for (std::uint64_t mask = 0; mask < size; ++mask) {
        double acc = 0.0;
        for (std::uint64_t x = 0; x < size; ++x)
            acc += (std::popcount(mask & x) & 1) ? -f.values[x] : f.values[x];
        out.set(mask, acc / static_cast<double>(size));
    }
    return out;
}

// In-place Walsh-Hadamard butterfly; out[m] = sum_x (-1)^{m.x} in[x].
inline void walsh_hadamard_inplace(std::vector<double>& v) {
    const std::uint64_t size = v.size();
    for (std::uint64_t len = 1; len < size; len <<= 1) {
        for (std::uint64_t block = 0; block < size; block += len << 1) {
            for (std::uint64_t j = block; j < block + len; ++j) {
                const double a = v[j];
                const double b = v[j + len];
                v[j] = a + b;
                v[j + len] = a - b;
            }
        }
    }
}

// Fast transform, O(n 2^n); same spectrum as fourier_naive.
inline FourierSpectrum fourier_fast(const FunctionTable& f) {
    std::vector<double> v = f.values;
    walsh_hadamard_inplace(v);
    const double norm = 1.0 / static_cast<double>(f.size());
    FourierSpectrum out(f.n);
    for (std::uint64_t mask = 0; mask < v.size(); ++mask) out.set(mask, v[mask] * norm);
    return out;
}

// f(x) = sum over stored S of f^(S) chi_S(x).
inline double evaluate_spectrum(const FourierSpectrum& fh, const BitString& x) {
    if (fh.n != x.n)
        throw width_mismatch_error("evaluate_spectrum: widths differ (" +
                                   std::to_string(fh.n) + " vs " + std::to_string(x.n) + ")");
    double acc = 0.0;
    for (const auto& [mask, c] : fh.coeffs)
        acc += (std::popcount(mask & x.value) & 1) ? -c : c;
    return acc;
}

// Dense reconstruction of the whole table (inverse transform).
inline FunctionTable spectrum_to_table(const FourierSpectrum& fh) {
    std::vector<double> v(std::uint64_t{1} << fh.n, 0.0);
    for (const auto& [mask, c] : fh.coeffs) v[mask] = c;
    walsh_hadamard_inplace(v);
    return FunctionTable(fh.n, std::move(v));
}

}  // namespace nbaa
