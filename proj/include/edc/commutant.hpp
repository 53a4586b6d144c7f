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

#ifndef EDC_COMMUTANT_HPP
#define EDC_COMMUTANT_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "edc/decoder.hpp"
#include "edc/theory.hpp"

namespace edc {

/// One basis element of the n-replica commutant (permutations for the
/// unitary group, reduced Pauli monomials for the Clifford group).
///
/// Every element factorizes over physical qubits as the N-th tensor power of
/// a single 2^n x 2^n site action.  For qubits that site action is always a
/// uniform-magnitude 0/1 pattern supported on an n-dimensional subspace T of
/// Z_2^{2n}: omega = 2^{log2_scale} * sum_{(x,y) in T} |x><y|, where the
/// packed vector (x << n) | y stores the row bits x in the high half.
/// Replica j in [0, n) maps to bit (n - 1 - j) of each half.
struct ReplicaOperator {
    int n_replicas = 0;
    int class_id = -1;  // index into CommutantBasis::classes; permutations use the permutation class
    int log2_scale = 0;
    std::vector<uint32_t> subspace;  // n generators in reduced row-echelon form

    // Generating pair: element = T_pi * (class seed) * T_sigma.  Arrays map
    // output replica i to input replica perm[i]; empty means identity.
    std::vector<uint8_t> left_perm, right_perm;

    /// Dense single-site table (entries are dyadic rationals).
    Eigen::MatrixXd single_site_action() const;
};

struct CommutantClass {
    std::string name;
    std::vector<uint32_t> generators;  // replica bit masks defining Omega_V (empty: permutations)
    uint64_t count = 0;                // unique elements contributed by this class
};

struct CommutantBasis {
    int n_replicas = 0;
    bool clifford = false;             // false: permutation (unitary) commutant only
    std::vector<ReplicaOperator> ops;  // empty when only counting (n = 8 default)
    std::vector<CommutantClass> classes;
    uint64_t total = 0;
};

/// dim of the n-replica Clifford commutant for N >= n - 1: prod_{m=0}^{n-2} (2^m + 1).
uint64_t cardinality_formula(int n);

/// The n! permutation operators T_pi (the unitary-group commutant).
CommutantBasis generate_permutation_basis(int n);

/// Full reduced-Pauli-monomial basis for n in {4, 6}; for n = 8 the default
/// returns per-class cardinalities only (materialize = true stores all
/// 9,845,550 subspaces, several hundred MB).
CommutantBasis generate_commutant(int n, bool materialize = false);

struct GramWeingarten {
    Eigen::MatrixXd gram;
    Eigen::MatrixXd wg;      // pseudo-inverse of gram
    double condition = 0;    // singular-value ratio of the scaled Gram matrix
    bool rank_deficient = false;
};

/// Gram[i][j] = Tr(Omega_i^dag Omega_j) = (l_i l_j)^N 2^{N dim(T_i cap T_j)}
/// and its (pseudo-)inverse.  Bases above 1000 elements (n = 6) sit behind
/// allow_large; rank deficiency at 2^N < n is reported, not fatal.
GramWeingarten gram_and_weingarten(const CommutantBasis& basis, size_t n_qubits,
                                   bool allow_large = false);

/// Replica boundary operator, factorized over physical qubits: the full
/// operator is logical_site^{tensor k} x ancilla_site^{tensor (N-k)}.
struct BoundaryOperator {
    int n_replicas = 0;
    Eigen::MatrixXcd logical_site;  // 2^n x 2^n
    Eigen::MatrixXcd ancilla_site;  // 2^n x 2^n
};

enum class ReplicaQuantity { Fidelity, FidelityFluct, ParticipationEntropy, StabilizerEntropy };
enum class ContractionMode { Exact, Diagonal };

/// Replica count used by a quantity: 2 (fidelity), 4 (fluctuations),
/// 2q (participation entropy), 4q (stabilizer entropy).
int replica_count(ReplicaQuantity quantity, int q);

BoundaryOperator boundary_numerator(ReplicaQuantity quantity, int q);
BoundaryOperator boundary_denominator(ReplicaQuantity quantity, int q);

/// Tr(B E[A^{(n)}]) with the exact Weingarten weights: sum over basis pairs
/// of wg[i][j] * Tr(Omega_i Err) * Tr(B Omega_j), every trace factorized
/// into per-site contractions.
std::complex<double> contract_moment(const CommutantBasis& basis, const Eigen::MatrixXd& wg,
                                     const BoundaryOperator& b, const CodeParameters& p);

/// Same moment in the diagonal approximation wg ~ 1/Gram_ii (error O(2^-N)).
std::complex<double> contract_moment_diagonal(const CommutantBasis& basis,
                                              const BoundaryOperator& b,
                                              const CodeParameters& p);

/// Assembled annealed observable via replica contraction.
///
///   Fidelity             n=2   exact/diagonal   E[m]/E[p]
///   FidelityFluct        n=4   exact            relative variance of the numerator
///   ParticipationEntropy n=2q  q=2 exact/diag, q=3 diagonal
///   StabilizerEntropy    n=4q  q=2 diagonal (Clifford path streams the
///                              9.8M-element n=8 basis once and caches it)
double annealed_contract(ReplicaQuantity quantity, int q, ContractionMode mode,
                         const CodeParameters& p, Ensemble ensemble);

/// Both n=4 relative variances (numerator and denominator), exact mode.
Fluctuations contract_fluctuations(const CodeParameters& p, Ensemble ensemble);

}  // namespace edc

#endif
