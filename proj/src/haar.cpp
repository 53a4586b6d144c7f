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

#include "edc/haar.hpp"

#include <bit>

namespace edc {

namespace {

using CVec = Eigen::VectorXcd;
using std::complex;

// Uniform unit vector in C^m (normalized complex Gaussian).
CVec random_unit(size_t m, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CVec v(m);
    for (size_t i = 0; i < m; ++i) v(i) = complex<double>(g(rng), g(rng));
    v /= v.norm();
    return v;
}

// One reflection level: the section of U(m)/U(m-1) sending e_1 to a uniform
// point of the sphere. R = H(w) * diag(ph, 1, ..., 1) with H the standard
// Hermitian reflection about w = ph*e_1 - v.
DenseEncoder::Reflection level_from(const CVec& v) {
    DenseEncoder::Reflection r;
    complex<double> v0 = v(0);
    r.phase = std::abs(v0) > 1e-300 ? v0 / std::abs(v0) : complex<double>(1, 0);
    CVec w = -v;
    w(0) += r.phase;
    if (w.squaredNorm() > 1e-24) r.w = w;
    return r;
}

// In-place y <- R y on a coordinate slice of length m.
void apply_level(const DenseEncoder::Reflection& r, complex<double>* y, size_t m, bool adjoint) {
    if (!adjoint) {
        y[0] *= r.phase;
        if (r.w.size()) {
            complex<double> ip = 0;
            for (size_t i = 0; i < m; ++i) ip += std::conj(r.w(i)) * y[i];
            ip *= 2.0 / r.w.squaredNorm();
            for (size_t i = 0; i < m; ++i) y[i] -= ip * r.w(i);
        }
    } else {
        if (r.w.size()) {
            complex<double> ip = 0;
            for (size_t i = 0; i < m; ++i) ip += std::conj(r.w(i)) * y[i];
            ip *= 2.0 / r.w.squaredNorm();
            for (size_t i = 0; i < m; ++i) y[i] -= ip * r.w(i);
        }
        y[0] *= std::conj(r.phase);
    }
}

void apply_two_qubit(const Eigen::Matrix4cd& u, size_t q, CVec& v, bool adjoint) {
    Eigen::Matrix4cd g = adjoint ? Eigen::Matrix4cd(u.adjoint()) : u;
    uint64_t dim = uint64_t(v.size());
    uint64_t m0 = uint64_t(1) << q, m1 = uint64_t(1) << (q + 1);
    for (uint64_t b = 0; b < dim; ++b) {
        if (b & (m0 | m1)) continue;
        complex<double> a0 = v(b), a1 = v(b | m0), a2 = v(b | m1), a3 = v(b | m0 | m1);
        v(b) = g(0, 0) * a0 + g(0, 1) * a1 + g(0, 2) * a2 + g(0, 3) * a3;
        v(b | m0) = g(1, 0) * a0 + g(1, 1) * a1 + g(1, 2) * a2 + g(1, 3) * a3;
        v(b | m1) = g(2, 0) * a0 + g(2, 1) * a1 + g(2, 2) * a2 + g(2, 3) * a3;
        v(b | m0 | m1) = g(3, 0) * a0 + g(3, 1) * a1 + g(3, 2) * a2 + g(3, 3) * a3;
    }
}

}  // namespace

void DenseEncoder::apply(CVec& v) const {
    if (is_circuit) {
        for (auto& g : gates) apply_two_qubit(g.u, g.q, v, false);
        return;
    }
    // Innermost (smallest) level first.
    size_t dim = size_t(v.size());
    for (size_t m = 1; m <= dim; ++m)
        apply_level(reflections[m - 1], v.data() + (dim - m), m, false);
}

void DenseEncoder::apply_adjoint(CVec& v) const {
    if (is_circuit) {
        for (auto it = gates.rbegin(); it != gates.rend(); ++it)
            apply_two_qubit(it->u, it->q, v, true);
        return;
    }
    size_t dim = size_t(v.size());
    for (size_t m = dim; m >= 1; --m)
        apply_level(reflections[m - 1], v.data() + (dim - m), m, true);
}

Eigen::MatrixXcd DenseEncoder::to_matrix() const {
    if (is_circuit) throw std::logic_error("to_matrix: circuit form not materialized");
    if (n_qubits > 10) throw ResourceError("to_matrix: n > 10");
    size_t dim = size_t(1) << n_qubits;
    Eigen::MatrixXcd u(dim, dim);
    for (size_t c = 0; c < dim; ++c) {
        CVec v = CVec::Zero(dim);
        v(c) = 1;
        apply(v);
        u.col(c) = v;
    }
    return u;
}

DenseEncoder random_haar_dense(size_t n, std::mt19937_64& rng) {
    if (n > 12) throw ResourceError("random_haar_dense: n > 12");
    DenseEncoder e;
    e.n_qubits = n;
    size_t dim = size_t(1) << n;
    e.reflections.reserve(dim);
    for (size_t m = 1; m <= dim; ++m) e.reflections.push_back(level_from(random_unit(m, rng)));
    return e;
}

Eigen::MatrixXcd random_haar_matrix(size_t dim, std::mt19937_64& rng) {
    DenseEncoder e;
    e.n_qubits = std::countr_zero(dim);
    for (size_t m = 1; m <= dim; ++m) e.reflections.push_back(level_from(random_unit(m, rng)));
    Eigen::MatrixXcd u(dim, dim);
    for (size_t c = 0; c < dim; ++c) {
        CVec v = CVec::Zero(dim);
        v(c) = 1;
        for (size_t m = 1; m <= dim; ++m)
            apply_level(e.reflections[m - 1], v.data() + (dim - m), m, false);
        u.col(c) = v;
    }
    return u;
}

DenseEncoder random_haar_circuit(size_t n, size_t depth, std::mt19937_64& rng) {
    DenseEncoder e;
    e.n_qubits = n;
    e.is_circuit = true;
    for (size_t layer = 0; layer < depth; ++layer) {
        for (size_t q = layer % 2; q + 1 < n; q += 2) {
            DenseEncoder::Gate g;
            g.q = q;
            g.u = random_haar_matrix(4, rng);
            e.gates.push_back(std::move(g));
        }
    }
    return e;
}

CVec haar_error_state(const DenseEncoder& enc, const ErrorModel& em) {
    size_t n = enc.n_qubits;
    uint64_t dim = uint64_t(1) << n;
    CVec v = CVec::Zero(dim);
    v(0) = 1;
    enc.apply(v);
    // V_alpha = prod_j exp(-i a/2 Z_j): diagonal phase exp(-i a/2 (N - 2|b|)).
    for (uint64_t b = 0; b < dim; ++b) {
        double ang = -em.alpha / 2 * (double(n) - 2.0 * std::popcount(b));
        v(b) *= complex<double>(std::cos(ang), std::sin(ang));
    }
    enc.apply_adjoint(v);
    return v;
}

DecodedState simulate_haar(const DenseEncoder& enc, const ErrorModel& em, const BitVec& syndrome,
                           size_t k) {
    size_t n = enc.n_qubits;
    CVec v = haar_error_state(enc, em);
    uint64_t s = syndrome.low_bits(n - k);
    DecodedState out;
    out.syndrome = syndrome;
    out.amplitudes.assign(uint64_t(1) << k, 0.0);
    double p = 0;
    for (uint64_t x = 0; x < (uint64_t(1) << k); ++x) {
        out.amplitudes[x] = v((s << k) | x);
        p += std::norm(out.amplitudes[x]);
    }
    out.born_prob = p;
    if (p > 0) {
        double inv = 1.0 / std::sqrt(p);
        for (auto& a : out.amplitudes) a *= inv;
    }
    return out;
}

}  // namespace edc
