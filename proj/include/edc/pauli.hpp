// Copyright 2026 The edc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EDC_PAULI_HPP
#define EDC_PAULI_HPP

#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace edc {

/// Packed bit vector with 64-bit words. Bit i refers to qubit i.
struct BitVec {
    std::vector<uint64_t> w;
    size_t n_bits = 0;

    BitVec() = default;
    explicit BitVec(size_t n) : w((n + 63) / 64, 0), n_bits(n) {}

    bool get(size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool v) {
        uint64_t m = uint64_t(1) << (i & 63);
        if (v) w[i >> 6] |= m; else w[i >> 6] &= ~m;
    }
    void toggle(size_t i) { w[i >> 6] ^= uint64_t(1) << (i & 63); }

    void xor_with(const BitVec& o) {
        for (size_t i = 0; i < w.size(); ++i) w[i] ^= o.w[i];
    }
    size_t popcount() const {
        size_t c = 0;
        for (uint64_t x : w) c += std::popcount(x);
        return c;
    }
    bool is_zero() const {
        for (uint64_t x : w) if (x) return false;
        return true;
    }
    /// Parity of the AND with another vector (symplectic building block).
    static bool and_parity(const BitVec& a, const BitVec& b) {
        uint64_t acc = 0;
        for (size_t i = 0; i < a.w.size(); ++i) acc ^= a.w[i] & b.w[i];
        return std::popcount(acc) & 1;
    }
    static size_t and_popcount(const BitVec& a, const BitVec& b) {
        size_t c = 0;
        for (size_t i = 0; i < a.w.size(); ++i) c += std::popcount(a.w[i] & b.w[i]);
        return c;
    }
    bool operator==(const BitVec& o) const { return n_bits == o.n_bits && w == o.w; }

    /// Low n bits as an integer index (requires n <= 64).
    uint64_t low_bits(size_t n) const {
        uint64_t v = w.empty() ? 0 : w[0];
        return n >= 64 ? v : v & ((uint64_t(1) << n) - 1);
    }
    /// Bits [lo, lo+n) as an integer (requires n <= 64).
    uint64_t slice_bits(size_t lo, size_t n) const;
};

/// N-qubit Pauli operator  i^{phase_exp} * prod_j X_j^{x_j} Z_j^{z_j}.
///
/// The phase exponent is an integer mod 4. Y on qubit j is x_j = z_j = 1
/// with phase_exp = 1 (Y = i X Z).
struct PauliString {
    BitVec x;
    BitVec z;
    uint8_t phase_exp = 0;  // mod 4
    size_t n_qubits = 0;

    PauliString() = default;
    explicit PauliString(size_t n) : x(n), z(n), n_qubits(n) {}

    static PauliString identity(size_t n) { return PauliString(n); }
    static PauliString single(size_t n, size_t qubit, char p);

    bool is_identity() const { return phase_exp == 0 && x.is_zero() && z.is_zero(); }

    /// Hermitian iff i^{phase_exp} * i^{|x & z|} is real.
    bool is_hermitian() const { return ((phase_exp + BitVec::and_popcount(x, z)) & 1) == 0; }

    /// Sign of a Hermitian string: +1 or -1. The unsigned string carries
    /// phase_exp = |x & z| mod 4 (one factor of i per Y letter).
    int hermitian_sign() const {
        return ((phase_exp - BitVec::and_popcount(x, z)) & 3) == 0 ? 1 : -1;
    }

    /// In-place product this <- this * rhs (operator order: this applied after rhs).
    void multiply_inplace(const PauliString& rhs) {
        if (n_qubits != rhs.n_qubits) throw std::invalid_argument("PauliString size mismatch");
        phase_exp = uint8_t((phase_exp + rhs.phase_exp + 2 * (BitVec::and_parity(z, rhs.x) ? 1 : 0)) & 3);
        x.xor_with(rhs.x);
        z.xor_with(rhs.z);
    }

    bool commutes_with(const PauliString& o) const {
        if (n_qubits != o.n_qubits) throw std::invalid_argument("PauliString size mismatch");
        return BitVec::and_parity(x, o.z) == BitVec::and_parity(z, o.x);
    }

    /// Action on |0...0>:  P|0^N> = amp * |basis_index>, amp a power of i.
    /// Z factors act trivially, X support gives the flipped index.
    std::complex<double> amp_on_zero() const {
        static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return ipow[phase_exp & 3];
    }
    const BitVec& index_on_zero() const { return x; }

    std::string str() const;
    bool operator==(const PauliString& o) const {
        return n_qubits == o.n_qubits && phase_exp == o.phase_exp && x == o.x && z == o.z;
    }
};

PauliString multiply(const PauliString& a, const PauliString& b);

}  // namespace edc

#endif
