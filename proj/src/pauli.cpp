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

#include "edc/pauli.hpp"

namespace edc {

uint64_t BitVec::slice_bits(size_t lo, size_t n) const {
    uint64_t v = 0;
    for (size_t i = 0; i < n; ++i)
        if (get(lo + i)) v |= uint64_t(1) << i;
    return v;
}

PauliString PauliString::single(size_t n, size_t qubit, char p) {
    PauliString r(n);
    switch (p) {
        case 'I': break;
        case 'X': r.x.set(qubit, true); break;
        case 'Z': r.z.set(qubit, true); break;
        case 'Y':
            r.x.set(qubit, true);
            r.z.set(qubit, true);
            r.phase_exp = 1;
            break;
        default: throw std::invalid_argument("unknown Pauli letter");
    }
    return r;
}

std::string PauliString::str() const {
    // Render relative to the Hermitian basis (Y instead of XZ), so that
    // Hermitian strings print as "+XIZY" / "-XIZY".
    static const char* prefix[4] = {"+", "i", "-", "-i"};
    std::string s = prefix[(phase_exp - BitVec::and_popcount(x, z)) & 3];
    for (size_t j = 0; j < n_qubits; ++j) {
        bool bx = x.get(j), bz = z.get(j);
        s += bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
    }
    return s;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
    PauliString r = a;
    r.multiply_inplace(b);
    return r;
}

}  // namespace edc
