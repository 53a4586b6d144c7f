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

#ifndef EDC_GF2_HPP
#define EDC_GF2_HPP

#include <vector>

#include "edc/pauli.hpp"

namespace edc {

/// Solutions of M·a = target over GF(2): the affine set
/// { particular XOR any combination of nullspace_basis }.
struct AffineSolutionSet {
    bool consistent = false;
    BitVec particular;
    std::vector<BitVec> nullspace_basis;
    size_t rank = 0;
};

/// Dense GF(2) matrix stored as bit-packed rows.
struct GF2Matrix {
    size_t n_rows = 0, n_cols = 0;
    std::vector<BitVec> rows;

    GF2Matrix() = default;
    GF2Matrix(size_t r, size_t c) : n_rows(r), n_cols(c), rows(r, BitVec(c)) {}

    bool get(size_t i, size_t j) const { return rows[i].get(j); }
    void set(size_t i, size_t j, bool v) { rows[i].set(j, v); }

    size_t rank() const;

    /// Gaussian elimination with an augmented column; also extracts a
    /// nullspace basis from the free columns.
    AffineSolutionSet solve(const BitVec& target) const;
};

}  // namespace edc

#endif
