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

#ifndef EDC_METRICS_HPP
#define EDC_METRICS_HPP

#include <complex>
#include <optional>
#include <vector>

namespace edc {

/// Normalized logical state: amplitudes over the 2^k computational basis.
struct LogicalStateView {
    const std::vector<std::complex<double>>* amplitudes;
    size_t k;
};

/// Overlap |<target|psi>|^2 with a computational basis target.
double fidelity(const LogicalStateView& state, uint64_t target_index);

/// Stabilizer Renyi entropy M_q = 1/(1-q) * log2[ sum_P <P>^{2q} / 2^k ].
/// Exact path via k single-qubit Pauli basis transforms on the density
/// table, O(4^k * k); capped at k = 13.
double sre(const LogicalStateView& state, int q);

/// Participation entropy S_q = 1/(1-q) * log2 sum_x |psi_x|^{2q}.
double participation_entropy(const LogicalStateView& state, int q);

/// Appendix-style magic bound M_2 <= -4 log2(2F - 1), applicable for F > 1/2;
/// nullopt when the bound does not apply.
std::optional<bool> magic_bound_check(const LogicalStateView& state, uint64_t target_index);

/// All 4^k Pauli expectation values of the pure state. Entry layout: the
/// code of qubit j is 2*bit(k+j) + bit(j) of the index, with 0=I, 1=X,
/// 2=Y, 3=Z. Exposed for the SRE implementation and its tests.
std::vector<double> pauli_spectrum(const LogicalStateView& state);

}  // namespace edc

#endif
