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

#ifndef EDC_HAAR_HPP
#define EDC_HAAR_HPP

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "edc/decoder.hpp"

namespace edc {

/// Haar-random encoder, either exact (stored as a product of Householder
/// reflections, applied in O(4^N) per matvec) or a brickwork circuit of
/// independent two-qubit Haar gates (applied in O(depth * N * 2^N)).
struct DenseEncoder {
    size_t n_qubits = 0;

    // Exact form: U = R_d (1 + R_{d-1} (1 + ...)), reflection m acting on
    // the last m coordinates. Empty when the circuit form is used.
    struct Reflection {
        Eigen::VectorXcd w;          // unnormalized reflection axis (may be empty)
        std::complex<double> phase;  // leading diagonal phase
    };
    std::vector<Reflection> reflections;

    // Circuit form: gate list in application order, each on qubits (q, q+1).
    struct Gate {
        size_t q;
        Eigen::Matrix4cd u;
    };
    std::vector<Gate> gates;
    bool is_circuit = false;

    void apply(Eigen::VectorXcd& v) const;          // v <- U v
    void apply_adjoint(Eigen::VectorXcd& v) const;  // v <- U^dag v

    /// Materializes the full unitary; exact form only, n <= 10.
    Eigen::MatrixXcd to_matrix() const;
};

/// Exact Haar-distributed unitary on n qubits (n <= 12).
DenseEncoder random_haar_dense(size_t n, std::mt19937_64& rng);

/// Brickwork circuit of independent two-qubit Haar gates.
DenseEncoder random_haar_circuit(size_t n, size_t depth, std::mt19937_64& rng);

/// Exact Haar 4x4 block, exposed for gate-level tests.
Eigen::MatrixXcd random_haar_matrix(size_t dim, std::mt19937_64& rng);

/// Decoded state U^dag V_alpha U |0^N> conditioned on the syndrome.
DecodedState simulate_haar(const DenseEncoder& enc, const ErrorModel& em, const BitVec& syndrome,
                           size_t k);

/// Full state U^dag V_alpha U |0^N> (shared by simulate_haar and the
/// Born-rule path, which needs every syndrome block at once).
Eigen::VectorXcd haar_error_state(const DenseEncoder& enc, const ErrorModel& em);

}  // namespace edc

#endif
