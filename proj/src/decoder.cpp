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

#include "edc/decoder.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

namespace edc {

namespace {

constexpr std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

// Coefficient magnitudes s^w * c^{N-w} for every subset weight w.
std::vector<double> weight_coeffs(const ErrorModel& em, size_t n) {
    std::vector<double> sc(n + 1);
    for (size_t w = 0; w <= n; ++w)
        sc[w] = std::pow(em.s, double(w)) * std::pow(em.c, double(n - w));
    return sc;
}

// Term for subset A: (-i s)^w c^{N-w} * i^{phase(P_A)} = i^{phase-w} * sc[w].
inline std::complex<double> subset_term(uint8_t phase, size_t w, const std::vector<double>& sc) {
    return kIPow[(phase - w) & 3] * sc[w];
}

DecodedState finish(const BitVec& syndrome, std::vector<std::complex<double>> amps) {
    DecodedState out;
    out.syndrome = syndrome;
    double p = 0;
    for (auto& a : amps) p += std::norm(a);
    out.born_prob = p;
    if (p > 0) {
        double inv = 1.0 / std::sqrt(p);
        for (auto& a : amps) a *= inv;
    }
    out.amplitudes = std::move(amps);
    return out;
}

}  // namespace

DecodedState decode_oracle(const std::vector<PauliString>& gens, const ErrorModel& em,
                           const BitVec& syndrome, size_t k) {
    size_t n = gens.size();
    if (n > 24) throw ResourceError("decode_oracle: N > 24 (2^N subsets)");
    if (k >= n) throw std::invalid_argument("decode_oracle: need 0 <= k < N");
    std::vector<double> sc = weight_coeffs(em, n);
    uint64_t want = syndrome.low_bits(n - k);
    uint64_t kmask = (k >= 64) ? ~uint64_t(0) : ((uint64_t(1) << k) - 1);

    std::vector<std::complex<double>> amps(uint64_t(1) << k, 0.0);
    PauliString p = PauliString::identity(n);
    uint64_t total = uint64_t(1) << n;
    for (uint64_t g = 0;; ++g) {
        size_t w = size_t(std::popcount(g ^ (g >> 1)));
        uint64_t xm = p.x.w[0];
        if ((xm >> k) == want) amps[xm & kmask] += subset_term(p.phase_exp, w, sc);
        if (g + 1 == total) break;
        p.multiply_inplace(gens[std::countr_zero(g + 1)]);
    }
    return finish(syndrome, std::move(amps));
}

DecodedState decode_fast(const std::vector<PauliString>& gens, const ErrorModel& em,
                         const BitVec& syndrome, size_t k, size_t max_enum_log2) {
    size_t n = gens.size();
    if (k >= n) throw std::invalid_argument("decode_fast: need 0 <= k < N");
    size_t na = n - k;

    // Column j holds the ancilla x-support of P_j; M*a = s picks the subsets
    // whose combined ancilla flip pattern equals the syndrome.
    GF2Matrix m(na, n);
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < na; ++i)
            if (gens[j].x.get(k + i)) m.set(i, j, true);
    AffineSolutionSet sol = m.solve(syndrome);

    if (!sol.consistent) {
        DecodedState out;
        out.syndrome = syndrome;
        out.consistent = false;
        out.amplitudes.assign(uint64_t(1) << k, 0.0);
        return out;
    }
    size_t d = sol.nullspace_basis.size();
    if (d > max_enum_log2)
        throw ResourceError("decode_fast: enumeration budget exceeded, needs 2^" +
                            std::to_string(d) + " steps");

    auto subset_product = [&](const BitVec& a) {
        PauliString p = PauliString::identity(n);
        for (size_t j = 0; j < n; ++j)
            if (a.get(j)) p.multiply_inplace(gens[j]);
        return p;
    };

    // The generators commute and square to identity, so P over a symmetric
    // difference is the plain product: one multiply per Gray-code step.
    std::vector<PauliString> basis_prod;
    basis_prod.reserve(d);
    for (auto& v : sol.nullspace_basis) basis_prod.push_back(subset_product(v));

    std::vector<double> sc = weight_coeffs(em, n);
    uint64_t kmask = (k >= 64) ? ~uint64_t(0) : ((uint64_t(1) << k) - 1);
    std::vector<std::complex<double>> amps(uint64_t(1) << k, 0.0);

    BitVec cur = sol.particular;
    PauliString p = subset_product(cur);
    uint64_t total = uint64_t(1) << d;
    for (uint64_t g = 0;; ++g) {
        amps[p.x.w[0] & kmask] += subset_term(p.phase_exp, cur.popcount(), sc);
        if (g + 1 == total) break;
        size_t t = size_t(std::countr_zero(g + 1));
        cur.xor_with(sol.nullspace_basis[t]);
        p.multiply_inplace(basis_prod[t]);
    }
    return finish(syndrome, std::move(amps));
}

std::optional<int> syndrome_class(const std::vector<PauliString>& gens, const BitVec& syndrome,
                                  int ell_max) {
    if (ell_max > 3) throw std::invalid_argument("syndrome_class: ell_max <= 3");
    size_t n = gens.size();
    size_t na = syndrome.n_bits;
    size_t k = n - na;
    uint64_t want = syndrome.low_bits(na);
    if (want == 0 && syndrome.popcount() == 0) return 0;

    std::vector<uint64_t> anc(n);
    for (size_t j = 0; j < n; ++j) anc[j] = gens[j].x.slice_bits(k, na);

    for (size_t a = 0; a < n; ++a) {
        if (ell_max < 1) break;
        if (anc[a] == want) return 1;
    }
    for (size_t a = 0; a < n && ell_max >= 2; ++a)
        for (size_t b = a + 1; b < n; ++b)
            if ((anc[a] ^ anc[b]) == want) return 2;
    for (size_t a = 0; a < n && ell_max >= 3; ++a)
        for (size_t b = a + 1; b < n; ++b)
            for (size_t c = b + 1; c < n; ++c)
                if ((anc[a] ^ anc[b] ^ anc[c]) == want) return 3;
    return std::nullopt;
}

std::vector<ClassSyndrome> class_syndromes(const std::vector<PauliString>& gens, int ell,
                                           const ErrorModel& em, size_t k) {
    if (ell != 1 && ell != 2) throw std::invalid_argument("class_syndromes: ell in {1,2}");
    size_t n = gens.size();
    size_t na = n - k;
    uint64_t kmask = (k >= 64) ? ~uint64_t(0) : ((uint64_t(1) << k) - 1);
    std::vector<double> sc = weight_coeffs(em, n);

    // Per syndrome, summed minimal-weight amplitude per logical index.
    std::map<uint64_t, std::map<uint64_t, std::complex<double>>> by_syndrome;
    auto add = [&](const PauliString& p, size_t w) {
        uint64_t y = p.x.slice_bits(k, na);
        by_syndrome[y][p.x.w[0] & kmask] += subset_term(p.phase_exp, w, sc);
    };
    if (ell == 1) {
        for (size_t a = 0; a < n; ++a) add(gens[a], 1);
    } else {
        for (size_t a = 0; a < n; ++a)
            for (size_t b = a + 1; b < n; ++b) add(multiply(gens[a], gens[b]), 2);
    }

    // Syndromes already reachable at smaller weight do not have class ell.
    std::vector<uint64_t> smaller = {0};
    if (ell == 2)
        for (size_t a = 0; a < n; ++a) smaller.push_back(gens[a].x.slice_bits(k, na));

    std::vector<ClassSyndrome> out;
    for (auto& [y, slots] : by_syndrome) {
        if (std::find(smaller.begin(), smaller.end(), y) != smaller.end()) continue;
        ClassSyndrome cs;
        cs.syndrome = BitVec(na);
        for (size_t i = 0; i < na; ++i) cs.syndrome.set(i, (y >> i) & 1);
        double best = -1;
        for (auto& [x, amp] : slots) {
            double mag = std::abs(amp);
            if (mag > best + 1e-15) {
                best = mag;
                cs.target_logical = x;
            }
        }
        cs.ambiguous = slots.size() > 1;
        out.push_back(std::move(cs));
    }
    return out;
}

BornDistribution born_distribution(const std::vector<PauliString>& gens, const ErrorModel& em,
                                   size_t k) {
    size_t n = gens.size();
    if (n > 26) throw ResourceError("born_distribution: N > 26 (dense 2^N table)");
    std::vector<double> sc = weight_coeffs(em, n);

    BornDistribution dist;
    dist.k = k;
    dist.amplitudes.assign(uint64_t(1) << n, 0.0);
    PauliString p = PauliString::identity(n);
    uint64_t total = uint64_t(1) << n;
    for (uint64_t g = 0;; ++g) {
        size_t w = size_t(std::popcount(g ^ (g >> 1)));
        dist.amplitudes[p.x.w[0]] += subset_term(p.phase_exp, w, sc);
        if (g + 1 == total) break;
        p.multiply_inplace(gens[std::countr_zero(g + 1)]);
    }

    dist.probabilities.assign(uint64_t(1) << (n - k), 0.0);
    for (uint64_t idx = 0; idx < total; ++idx)
        dist.probabilities[idx >> k] += std::norm(dist.amplitudes[idx]);
    return dist;
}

DecodedState conditional_state(const BornDistribution& dist, uint64_t syndrome_bits,
                               size_t n_qubits) {
    size_t k = dist.k, na = n_qubits - k;
    DecodedState out;
    out.syndrome = BitVec(na);
    for (size_t i = 0; i < na; ++i) out.syndrome.set(i, (syndrome_bits >> i) & 1);
    out.amplitudes.assign(uint64_t(1) << k, 0.0);
    for (uint64_t x = 0; x < (uint64_t(1) << k); ++x)
        out.amplitudes[x] = dist.amplitudes[(syndrome_bits << k) | x];
    double p = 0;
    for (auto& a : out.amplitudes) p += std::norm(a);
    out.born_prob = p;
    if (p > 0) {
        double inv = 1.0 / std::sqrt(p);
        for (auto& a : out.amplitudes) a *= inv;
    }
    return out;
}

std::vector<uint64_t> sample_born(const std::vector<double>& probabilities, size_t m,
                                  std::mt19937_64& rng) {
    std::vector<double> cdf(probabilities.size());
    double acc = 0;
    for (size_t i = 0; i < probabilities.size(); ++i) {
        acc += probabilities[i];
        cdf[i] = acc;
    }
    std::vector<uint64_t> draws(m);
    for (size_t i = 0; i < m; ++i) {
        double u = double(rng() >> 11) * 0x1.0p-53 * acc;
        draws[i] = uint64_t(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (draws[i] >= cdf.size()) draws[i] = cdf.size() - 1;
    }
    return draws;
}

}  // namespace edc
