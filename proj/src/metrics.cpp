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

#include "edc/metrics.hpp"

#include <cmath>

#include "edc/decoder.hpp"

namespace edc {

double fidelity(const LogicalStateView& state, uint64_t target_index) {
    return std::norm((*state.amplitudes)[target_index]);
}

std::vector<double> pauli_spectrum(const LogicalStateView& state) {
    size_t k = state.k;
    if (k > 13) throw ResourceError("pauli_spectrum: k > 13 (4^k table)");
    const auto& psi = *state.amplitudes;
    uint64_t dim = uint64_t(1) << k;

    // Density table rho[a,b] = psi_a conj(psi_b) at index a*2^k + b.
    std::vector<std::complex<double>> t(dim * dim);
    for (uint64_t a = 0; a < dim; ++a)
        for (uint64_t b = 0; b < dim; ++b) t[(a << k) | b] = psi[a] * std::conj(psi[b]);

    // One basis transform per qubit: (rho00, rho01, rho10, rho11) ->
    // (Tr_I, Tr_X, Tr_Y, Tr_Z) on that site.
    for (size_t j = 0; j < k; ++j) {
        uint64_t ma = uint64_t(1) << (k + j), mb = uint64_t(1) << j;
        for (uint64_t idx = 0; idx < dim * dim; ++idx) {
            if (idx & (ma | mb)) continue;
            std::complex<double> e00 = t[idx], e01 = t[idx | mb];
            std::complex<double> e10 = t[idx | ma], e11 = t[idx | ma | mb];
            t[idx] = e00 + e11;
            t[idx | mb] = e01 + e10;
            t[idx | ma] = std::complex<double>(0, 1) * (e01 - e10);
            t[idx | ma | mb] = e00 - e11;
        }
    }

    std::vector<double> out(dim * dim);
    for (uint64_t idx = 0; idx < dim * dim; ++idx) {
        if (std::abs(t[idx].imag()) > 1e-9)
            throw std::logic_error("pauli_spectrum: non-real expectation value");
        out[idx] = t[idx].real();
    }
    return out;
}

double sre(const LogicalStateView& state, int q) {
    if (q < 2) throw std::invalid_argument("sre: q >= 2");
    std::vector<double> spec = pauli_spectrum(state);
    double sum = 0;
    for (double v : spec) sum += std::pow(v * v, q);
    sum /= double(uint64_t(1) << state.k);
    return std::log2(sum) / (1.0 - q);
}

double participation_entropy(const LogicalStateView& state, int q) {
    if (q < 2) throw std::invalid_argument("participation_entropy: q >= 2");
    double sum = 0;
    for (auto& a : *state.amplitudes) sum += std::pow(std::norm(a), q);
    return std::log2(sum) / (1.0 - q);
}

std::optional<bool> magic_bound_check(const LogicalStateView& state, uint64_t target_index) {
    double f = fidelity(state, target_index);
    if (f <= 0.5) return std::nullopt;
    return sre(state, 2) <= -4.0 * std::log2(2 * f - 1) + 1e-9;
}

}  // namespace edc
