#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nbaa/errors.hpp"

namespace nbaa {

inline void check_bit_width(int n, int max_bits = 62) {
    if (n < 1 || n > max_bits)
        throw std::invalid_argument("bit width must be in [1, " + std::to_string(max_bits) +
                                    "], got " + std::to_string(n));
}

// An n-bit string; bit j of `value` is the binary expansion coefficient x_j
// in x = sum_j x_j 2^j.
struct BitString {
    int n;
    std::uint64_t value;

    BitString(int n_bits, std::uint64_t v) : n(n_bits), value(v) {
        check_bit_width(n_bits);
        if (v >> n_bits)
            throw std::invalid_argument("value " + std::to_string(v) + " does not fit in " +
                                        std::to_string(n_bits) + " bits");
    }

    bool bit(int j) const { return (value >> j) & 1u; }
};

// A subset S of {0,...,n-1} encoded as a mask with bit j set iff j is in S.
// Doubles as the index of the parity function chi_S and of the Fourier
// coefficient at S.
struct SubsetMask {
    int n;
    std::uint64_t mask;

    SubsetMask(int n_bits, std::uint64_t m) : n(n_bits), mask(m) {
        check_bit_width(n_bits);
        if (m >> n_bits)
            throw std::invalid_argument("subset mask " + std::to_string(m) +
                                        " does not fit in " + std::to_string(n_bits) + " bits");
    }

    int cardinality() const { return std::popcount(mask); }
    bool contains(int j) const { return (mask >> j) & 1u; }

    // Elements j_1 < j_2 < ... < j_|S| in ascending order.
    std::vector<int> elements() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(cardinality()));
        for (int j = 0; j < n; ++j)
            if (contains(j)) out.push_back(j);
        return out;
    }
};

// Modular bit-product: (sum_j a_j b_j) mod 2, i.e. the parity of the
// bitwise AND.
inline int bit_product(const BitString& a, const BitString& b) {
    if (a.n != b.n)
        throw width_mismatch_error("bit_product: operand widths differ (" +
                                   std::to_string(a.n) + " vs " + std::to_string(b.n) + ")");
    return std::popcount(a.value & b.value) & 1;
}

inline int bit_product(const SubsetMask& s, const BitString& x) {
    if (s.n != x.n)
        throw width_mismatch_error("bit_product: operand widths differ (" +
                                   std::to_string(s.n) + " vs " + std::to_string(x.n) + ")");
    return std::popcount(s.mask & x.value) & 1;
}

// Parity function chi_S(x) = (-1)^{S.x} = 1 - 2 (S.x).
inline double parity(const SubsetMask& s, const BitString& x) {
    return bit_product(s, x) ? -1.0 : 1.0;
}

}  // namespace nbaa
