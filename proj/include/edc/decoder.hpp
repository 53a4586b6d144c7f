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

#ifndef EDC_DECODER_HPP
#define EDC_DECODER_HPP

#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <vector>

#include "edc/gf2.hpp"
#include "edc/pauli.hpp"

namespace edc {

/// Raised when an operation would exceed its enumeration or memory budget.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Coherent error layer: independent Z rotations by angle alpha on every
/// qubit, conjugated by the encoder into the commuting generators P_j.
struct ErrorModel {
    double alpha;
    double c;  // cos(alpha/2)
    double s;  // sin(alpha/2)
    explicit ErrorModel(double a) : alpha(a), c(std::cos(a / 2)), s(std::sin(a / 2)) {}
};

/// Logical state conditioned on one measured syndrome.
///
/// Qubits [0, k) form the logical register; qubits [k, N) are the measured
/// ancillas. born_prob is the squared norm of the projected (unnormalized)
/// vector; amplitudes are only meaningful when born_prob > 0.
struct DecodedState {
    BitVec syndrome;
    std::vector<std::complex<double>> amplitudes;  // length 2^k
    double born_prob = 0;
    bool consistent = true;  // fast path: syndrome reachable at all
};

/// Brute-force evaluation over all 2^N error subsets (Gray-code order).
DecodedState decode_oracle(const std::vector<PauliString>& gens, const ErrorModel& em,
                           const BitVec& syndrome, size_t k);

/// Same result via the GF(2) affine fast path: only the 2^{N-rank} subsets
/// consistent with the syndrome are enumerated.
DecodedState decode_fast(const std::vector<PauliString>& gens, const ErrorModel& em,
                         const BitVec& syndrome, size_t k,
                         size_t max_enum_log2 = 28);

/// Smallest subset weight reaching the syndrome, up to ell_max (<= 3);
/// nullopt when the class exceeds ell_max.
std::optional<int> syndrome_class(const std::vector<PauliString>& gens,
                                  const BitVec& syndrome, int ell_max);

struct ClassSyndrome {
    BitVec syndrome;             // (N-k)-bit ancilla pattern
    uint64_t target_logical = 0; // dominating contribution's logical index
    bool ambiguous = false;      // minimal-weight subsets disagree on the index
};

/// All syndromes of class exactly ell (ell in {1,2}) with their dominating
/// logical target at the given error strength.
std::vector<ClassSyndrome> class_syndromes(const std::vector<PauliString>& gens, int ell,
                                           const ErrorModel& em, size_t k);

/// Born distribution over all 2^{N-k} syndromes plus the dense amplitude
/// table of the full decoded state (index = logical bits | syndrome << k).
struct BornDistribution {
    std::vector<double> probabilities;              // length 2^{N-k}
    std::vector<std::complex<double>> amplitudes;   // length 2^N
    size_t k = 0;
};

BornDistribution born_distribution(const std::vector<PauliString>& gens, const ErrorModel& em,
                                   size_t k);

/// Extracts the per-syndrome DecodedState from a dense distribution.
DecodedState conditional_state(const BornDistribution& dist, uint64_t syndrome_bits,
                               size_t n_qubits);

/// m i.i.d. syndrome draws from the distribution.
std::vector<uint64_t> sample_born(const std::vector<double>& probabilities, size_t m,
                                  std::mt19937_64& rng);

}  // namespace edc

#endif
