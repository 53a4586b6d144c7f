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

#include "edc/tableau.hpp"

#include <cstdio>
#include <stdexcept>

namespace edc {

namespace {

// Symplectic form <a, b> = x_a.z_b + z_a.x_b mod 2 on mask pairs.
struct SympVec {
    BitVec x, z;
    explicit SympVec(size_t n) : x(n), z(n) {}
    void xor_with(const SympVec& o) {
        x.xor_with(o.x);
        z.xor_with(o.z);
    }
    bool is_zero() const { return x.is_zero() && z.is_zero(); }
};

bool symp(const SympVec& a, const SympVec& b) {
    return BitVec::and_parity(a.x, b.z) != BitVec::and_parity(a.z, b.x);
}

PauliString hermitian_from(const SympVec& v, bool sign, size_t n) {
    PauliString p(n);
    p.x = v.x;
    p.z = v.z;
    p.phase_exp = uint8_t((BitVec::and_popcount(v.x, v.z) + (sign ? 2 : 0)) & 3);
    return p;
}

}  // namespace

CliffordTableau CliffordTableau::identity(size_t n) {
    CliffordTableau t;
    t.n_qubits = n;
    for (size_t j = 0; j < n; ++j) {
        t.x_images.push_back(PauliString::single(n, j, 'X'));
        t.z_images.push_back(PauliString::single(n, j, 'Z'));
    }
    return t;
}

bool CliffordTableau::is_valid() const {
    size_t n = n_qubits;
    if (x_images.size() != n || z_images.size() != n) return false;
    for (size_t i = 0; i < n; ++i) {
        if (!x_images[i].is_hermitian() || !z_images[i].is_hermitian()) return false;
        if (x_images[i].commutes_with(z_images[i])) return false;
        for (size_t j = 0; j < n; ++j) {
            if (!x_images[i].commutes_with(x_images[j])) return false;
            if (!z_images[i].commutes_with(z_images[j])) return false;
            if (i != j && !x_images[i].commutes_with(z_images[j])) return false;
        }
    }
    return true;
}

CliffordTableau random_clifford(size_t n, std::mt19937_64& rng) {
    if (n == 0) throw std::domain_error("random_clifford: n must be >= 1");

    // Basis of the symplectic complement of all pairs fixed so far.
    std::vector<SympVec> basis;
    basis.reserve(2 * n);
    for (size_t j = 0; j < n; ++j) {
        SympVec v(n);
        v.x.set(j, true);
        basis.push_back(v);
    }
    for (size_t j = 0; j < n; ++j) {
        SympVec v(n);
        v.z.set(j, true);
        basis.push_back(v);
    }

    auto random_combo = [&](const std::vector<SympVec>& bs, SympVec& out, uint64_t mask) {
        out = SympVec(n);
        for (size_t i = 0; i < bs.size(); ++i)
            if ((mask >> i) & 1) out.xor_with(bs[i]);
    };

    CliffordTableau t;
    t.n_qubits = n;

    for (size_t pair = 0; pair < n; ++pair) {
        size_t m = basis.size();
        // Uniform nonzero a in the span.
        SympVec a(n);
        do {
            uint64_t mask = rng() & ((m >= 64) ? ~uint64_t(0) : ((uint64_t(1) << m) - 1));
            random_combo(basis, a, mask);
        } while (a.is_zero());

        // Split basis by the form against a; pivot has <a, e_p> = 1.
        size_t p = m;
        for (size_t i = 0; i < m; ++i)
            if (symp(a, basis[i])) { p = i; break; }
        if (p == m) throw std::logic_error("random_clifford: degenerate symplectic span");
        std::vector<SympVec> kernel;  // basis of {w : <a,w> = 0}
        kernel.reserve(m - 1);
        for (size_t i = 0; i < m; ++i) {
            if (i == p) continue;
            SympVec v = basis[i];
            if (symp(a, v)) v.xor_with(basis[p]);
            kernel.push_back(v);
        }

        // Uniform b with <a,b> = 1: pivot plus a uniform kernel element.
        SympVec b = basis[p];
        {
            uint64_t mask = rng() & ((kernel.size() >= 64) ? ~uint64_t(0)
                                                           : ((uint64_t(1) << kernel.size()) - 1));
            SympVec k(n);
            random_combo(kernel, k, mask);
            b.xor_with(k);
        }

        // Restrict the span to the complement of the new pair by eliminating
        // the form against b within the kernel (a is in the kernel span and
        // pairs with b, so a pivot always exists).
        size_t q = kernel.size();
        for (size_t i = 0; i < kernel.size(); ++i)
            if (symp(b, kernel[i])) { q = i; break; }
        if (q == kernel.size() && pair + 1 < n)
            throw std::logic_error("random_clifford: degenerate restriction");
        std::vector<SympVec> next;
        next.reserve(kernel.size() > 1 ? kernel.size() - 1 : 0);
        for (size_t i = 0; i < kernel.size(); ++i) {
            if (i == q) continue;
            SympVec u = kernel[i];
            if (symp(b, u)) u.xor_with(kernel[q]);
            next.push_back(u);
        }
        basis = std::move(next);

        t.x_images.push_back(hermitian_from(a, rng() & 1, n));
        t.z_images.push_back(hermitian_from(b, rng() & 1, n));
    }
    return t;
}

const std::vector<PauliString>& conjugated_error_generators(const CliffordTableau& t) {
    return t.z_images;
}

std::string CliffordTableau::to_hex() const {
    // One line: n, then for each image (x rows then z rows) the x/z masks as
    // hex words plus the sign bit.
    std::string s = std::to_string(n_qubits);
    char buf[32];
    auto emit = [&](const PauliString& p) {
        for (uint64_t wd : p.x.w) { std::snprintf(buf, sizeof buf, ":%016llx", (unsigned long long)wd); s += buf; }
        for (uint64_t wd : p.z.w) { std::snprintf(buf, sizeof buf, ":%016llx", (unsigned long long)wd); s += buf; }
        s += p.hermitian_sign() > 0 ? ":0" : ":1";
    };
    for (auto& p : x_images) emit(p);
    for (auto& p : z_images) emit(p);
    return s;
}

CliffordTableau CliffordTableau::from_hex(const std::string& s) {
    size_t pos = s.find(':');
    size_t n = std::stoul(s.substr(0, pos));
    size_t nw = (n + 63) / 64;
    CliffordTableau t;
    t.n_qubits = n;
    auto next_field = [&]() -> std::string {
        if (pos == std::string::npos) throw std::invalid_argument("tableau hex: truncated");
        size_t start = pos + 1;
        pos = s.find(':', start);
        return s.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    };
    auto parse = [&]() {
        PauliString p(n);
        for (size_t i = 0; i < nw; ++i) p.x.w[i] = std::stoull(next_field(), nullptr, 16);
        for (size_t i = 0; i < nw; ++i) p.z.w[i] = std::stoull(next_field(), nullptr, 16);
        bool neg = next_field() == "1";
        p.phase_exp = uint8_t((BitVec::and_popcount(p.x, p.z) + (neg ? 2 : 0)) & 3);
        return p;
    };
    for (size_t j = 0; j < n; ++j) t.x_images.push_back(parse());
    for (size_t j = 0; j < n; ++j) t.z_images.push_back(parse());
    if (!t.is_valid()) throw std::invalid_argument("tableau hex: invalid tableau");
    return t;
}

}  // namespace edc
