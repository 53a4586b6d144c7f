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

#include "edc/gf2.hpp"

namespace edc {

size_t GF2Matrix::rank() const {
    std::vector<BitVec> work = rows;
    size_t r = 0;
    for (size_t col = 0; col < n_cols && r < work.size(); ++col) {
        size_t piv = work.size();
        for (size_t i = r; i < work.size(); ++i)
            if (work[i].get(col)) { piv = i; break; }
        if (piv == work.size()) continue;
        std::swap(work[r], work[piv]);
        for (size_t i = 0; i < work.size(); ++i)
            if (i != r && work[i].get(col)) work[i].xor_with(work[r]);
        ++r;
    }
    return r;
}

AffineSolutionSet GF2Matrix::solve(const BitVec& target) const {
    // Reduced row echelon form of [M | target].
    std::vector<BitVec> m = rows;
    BitVec t = target;
    std::vector<size_t> pivot_col;  // pivot column of each eliminated row
    size_t r = 0;
    for (size_t col = 0; col < n_cols && r < m.size(); ++col) {
        size_t piv = m.size();
        for (size_t i = r; i < m.size(); ++i)
            if (m[i].get(col)) { piv = i; break; }
        if (piv == m.size()) continue;
        std::swap(m[r], m[piv]);
        bool tr = t.get(r), tp = t.get(piv);
        t.set(r, tp);
        t.set(piv, tr);
        for (size_t i = 0; i < m.size(); ++i) {
            if (i != r && m[i].get(col)) {
                m[i].xor_with(m[r]);
                t.set(i, t.get(i) != t.get(r));
            }
        }
        pivot_col.push_back(col);
        ++r;
    }

    AffineSolutionSet out;
    out.rank = r;
    // Zero rows must have zero target bits.
    for (size_t i = r; i < m.size(); ++i)
        if (t.get(i)) return out;  // inconsistent
    out.consistent = true;

    out.particular = BitVec(n_cols);
    for (size_t i = 0; i < r; ++i)
        if (t.get(i)) out.particular.set(pivot_col[i], true);

    // One nullspace vector per free column: that column plus the pivot
    // columns of the rows it appears in.
    std::vector<bool> is_pivot(n_cols, false);
    for (size_t c : pivot_col) is_pivot[c] = true;
    for (size_t col = 0; col < n_cols; ++col) {
        if (is_pivot[col]) continue;
        BitVec v(n_cols);
        v.set(col, true);
        for (size_t i = 0; i < r; ++i)
            if (m[i].get(col)) v.set(pivot_col[i], true);
        out.nullspace_basis.push_back(std::move(v));
    }
    return out;
}

}  // namespace edc
