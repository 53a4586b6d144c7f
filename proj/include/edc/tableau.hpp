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

#ifndef EDC_TABLEAU_HPP
#define EDC_TABLEAU_HPP

#include <random>
#include <string>
#include <vector>

#include "edc/pauli.hpp"

namespace edc {

/// Images of the generators X_j, Z_j under conjugation by a Clifford C.
/// z_images[j] is the error generator P_j = C^dag Z_j C.
struct CliffordTableau {
    size_t n_qubits = 0;
    std::vector<PauliString> x_images;
    std::vector<PauliString> z_images;

    static CliffordTableau identity(size_t n);

    /// Checks the symplectic commutation relations and Hermiticity of all images.
    bool is_valid() const;

    std::string to_hex() const;
    static CliffordTableau from_hex(const std::string& s);
};

/// Uniformly random element of the N-qubit Clifford group (modulo global
/// phase), built row by row as a random symplectic basis with uniform signs.
CliffordTableau random_clifford(size_t n, std::mt19937_64& rng);

/// The mutually commuting Hermitian error generators [P_1..P_N].
const std::vector<PauliString>& conjugated_error_generators(const CliffordTableau& t);

}  // namespace edc

#endif
