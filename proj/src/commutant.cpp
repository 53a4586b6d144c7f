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

#include "edc/commutant.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace edc {

namespace {

using Cd = std::complex<double>;

// ---- GF(2) subspace helpers -------------------------------------------

// In-place reduced row echelon form over 2n-bit rows; returns the rank.
int rref_rows(uint32_t* rows, int m, int bits) {
    int r = 0;
    for (int b = bits - 1; b >= 0 && r < m; --b) {
        int piv = -1;
        for (int i = r; i < m; ++i)
            if ((rows[i] >> b) & 1u) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[r], rows[piv]);
        for (int i = 0; i < m; ++i)
            if (i != r && ((rows[i] >> b) & 1u)) rows[i] ^= rows[r];
        ++r;
    }
    return r;
}

struct Key128 {
    uint64_t lo = 0, hi = 0;
    bool operator==(const Key128&) const = default;
};

struct Key128Hash {
    size_t operator()(const Key128& k) const {
        uint64_t h = k.lo * 0x9e3779b97f4a7c15ULL;
        h ^= k.hi + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return size_t(h);
    }
};

// Rows are at most 16 bits wide (n <= 8), at most 8 of them.
Key128 pack_key(const uint32_t* rows, int n) {
    Key128 k;
    for (int i = 0; i < n && i < 4; ++i) k.lo |= uint64_t(rows[i] & 0xffffu) << (16 * i);
    for (int i = 4; i < n; ++i) k.hi |= uint64_t(rows[i] & 0xffffu) << (16 * (i - 4));
    return k;
}

void unpack_key(const Key128& k, uint32_t* rows, int n) {
    for (int i = 0; i < n && i < 4; ++i) rows[i] = uint32_t(k.lo >> (16 * i)) & 0xffffu;
    for (int i = 4; i < n; ++i) rows[i] = uint32_t(k.hi >> (16 * (i - 4))) & 0xffffu;
}

// Visits every element of the span of `rows` exactly once (Gray order).
template <class F>
void for_each_in_span(const uint32_t* rows, int r, F&& f) {
    uint32_t v = 0;
    f(v);
    for (uint32_t g = 1; g < (1u << r); ++g) {
        v ^= rows[std::countr_zero(g)];
        f(v);
    }
}

// out replica i = in replica p[i] (replica j lives at bit n-1-j).
uint32_t permute_half(uint32_t x, const std::array<uint8_t, 8>& p, int n) {
    uint32_t r = 0;
    for (int i = 0; i < n; ++i) r |= ((x >> (n - 1 - p[i])) & 1u) << (n - 1 - i);
    return r;
}

std::vector<std::array<uint8_t, 8>> all_perms(int n) {
    std::array<uint8_t, 8> p{};
    for (int i = 0; i < n; ++i) p[i] = uint8_t(i);
    std::vector<std::array<uint8_t, 8>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.begin() + n));
    return out;
}

// ---- dense single-site algebra ----------------------------------------

Eigen::MatrixXcd kron2(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Eigen::MatrixXcd kron_pow(const Eigen::MatrixXcd& m, int t) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int i = 0; i < t; ++i) out = kron2(out, m);
    return out;
}

std::array<Eigen::Matrix2cd, 4> pauli_matrices() {
    std::array<Eigen::Matrix2cd, 4> p;
    p[0] << 1, 0, 0, 1;
    p[1] << 0, 1, 1, 0;
    p[2] << 0, Cd(0, -1), Cd(0, 1), 0;
    p[3] << 1, 0, 0, -1;
    return p;
}

// (1/2) sum_{P in {I,X,Y,Z}} tensor_j P^{b_j}, replica 0 in the leftmost slot.
Eigen::MatrixXcd monomial_factor(int n, uint32_t mask) {
    auto paulis = pauli_matrices();
    size_t dim = size_t(1) << n;
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
    for (int pi = 0; pi < 4; ++pi) {
        Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(1, 1);
        for (int j = 0; j < n; ++j) {
            bool on = (mask >> (n - 1 - j)) & 1u;
            term = kron2(term, on ? Eigen::MatrixXcd(paulis[pi]) : Eigen::MatrixXcd(paulis[0]));
        }
        sum += term;
    }
    return 0.5 * sum;
}

struct Seed {
    int log2_scale = 0;
    std::vector<uint32_t> rows;  // RREF, dim == n
};

// Express a dense primitive Pauli monomial as 2^s * sum_{(x,y) in T} |x><y|.
Seed extract_seed(const Eigen::MatrixXcd& m, int n) {
    size_t dim = size_t(1) << n;
    double lam = 0;
    for (size_t x = 0; x < dim; ++x)
        for (size_t y = 0; y < dim; ++y) lam = std::max(lam, std::abs(m(x, y)));
    std::vector<uint32_t> vecs;
    for (size_t x = 0; x < dim; ++x)
        for (size_t y = 0; y < dim; ++y) {
            Cd e = m(x, y);
            if (std::abs(e) < 1e-9 * lam) continue;
            if (std::abs(e - lam) > 1e-9 * lam)
                throw std::logic_error("monomial is not a uniform 0/1 pattern");
            vecs.push_back((uint32_t(x) << n) | uint32_t(y));
        }
    std::vector<uint32_t> work = vecs;
    int r = rref_rows(work.data(), int(work.size()), 2 * n);
    if (r != n || (size_t(1) << r) != vecs.size())
        throw std::logic_error("monomial support is not an n-dimensional subspace");
    Seed s;
    s.rows.assign(work.begin(), work.begin() + n);
    double l2 = std::log2(lam);
    s.log2_scale = int(std::lround(l2));
    if (std::abs(l2 - s.log2_scale) > 1e-9)
        throw std::logic_error("monomial scale is not a power of two");
    return s;
}

// ---- class tables ------------------------------------------------------

struct ClassSpec {
    const char* name;
    std::vector<uint32_t> gens;  // replica masks, replica 0 = MSB
};

std::vector<ClassSpec> clifford_classes(int n) {
    switch (n) {
        case 4:
            return {{"permutations", {}}, {"omega4", {0b1111}}};
        case 6:
            return {{"permutations", {}},
                    {"omega6", {0b111111}},
                    {"omega4", {0b111100}},
                    {"omega4x4", {0b111100, 0b001111}}};
        case 8:
            return {{"permutations", {}},
                    {"omega8", {0b11111111}},
                    {"omega6", {0b11111100}},
                    {"omega4", {0b11110000}},
                    {"omega4x4_disjoint", {0b11110000, 0b00001111}},
                    {"omega4x4_overlap1", {0b11110000, 0b00011110}},
                    {"omega4x4_overlap2", {0b11110000, 0b00111100}},
                    {"omega4x6", {0b11110000, 0b00111111}},
                    {"omega6x6", {0b11111100, 0b00111111}},
                    {"omega3_chain", {0b11110000, 0b00001111, 0b00111100}},
                    {"omega3_star", {0b11110000, 0b00111100, 0b01011010}},
                    {"omega3_cycle", {0b11110000, 0b00111100, 0b10100011}},
                    {"hamming", {0b11110000, 0b00111100, 0b00110011, 0b10101010}}};
        default:
            throw std::invalid_argument("clifford commutant classes: n must be 4, 6 or 8");
    }
}

Seed class_seed(int n, const std::vector<uint32_t>& gens) {
    if (gens.empty()) {
        // Identity permutation: T = {(x, x)}.
        Seed s;
        for (int j = 0; j < n; ++j) {
            uint32_t e = 1u << (n - 1 - j);
            s.rows.push_back((e << n) | e);
        }
        rref_rows(s.rows.data(), n, 2 * n);
        return s;
    }
    size_t dim = size_t(1) << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
    for (uint32_t g : gens) m = m * monomial_factor(n, g);
    return extract_seed(m, n);
}

// ---- basis enumeration -------------------------------------------------

// rows: RREF generators of the element's subspace; pi/sigma index into the
// permutation list when known (-1 in the parallel path).
using ElementCallback =
    std::function<void(const uint32_t* rows, int class_id, int log2_scale, int pi_idx,
                       int sigma_idx, int thread_id)>;

struct Rep {
    std::array<uint32_t, 8> rows{};
    int pi_idx = 0;
};

void enumerate_clifford_basis(int n, const ElementCallback& cb, std::vector<CommutantClass>& classes,
                              uint64_t& total, int n_threads) {
    auto specs = clifford_classes(n);
    auto perms = all_perms(n);
    int bits = 2 * n;
    classes.clear();
    total = 0;
    for (size_t ci = 0; ci < specs.size(); ++ci) {
        Seed seed = class_seed(n, specs[ci].gens);
        // Phase 1: conjugation representatives T_pi Omega T_pi^dag.
        std::unordered_set<Key128, Key128Hash> seen1;
        std::vector<Rep> reps;
        for (size_t pi = 0; pi < perms.size(); ++pi) {
            Rep r;
            r.pi_idx = int(pi);
            for (int j = 0; j < n; ++j) {
                uint32_t v = seed.rows[j];
                uint32_t x = permute_half(v >> n, perms[pi], n);
                uint32_t y = permute_half(v & ((1u << n) - 1), perms[pi], n);
                r.rows[j] = (x << n) | y;
            }
            rref_rows(r.rows.data(), n, bits);
            if (seen1.insert(pack_key(r.rows.data(), n)).second) reps.push_back(r);
        }
        // Phase 2: right orbits L T_sigma, globally deduplicated per class.
        uint64_t count = 0;
        if (n_threads <= 1) {
            std::unordered_set<Key128, Key128Hash> seen2;
            for (const Rep& rep : reps) {
                for (size_t si = 0; si < perms.size(); ++si) {
                    std::array<uint32_t, 8> rows;
                    for (int j = 0; j < n; ++j) {
                        uint32_t v = rep.rows[j];
                        uint32_t y = permute_half(v & ((1u << n) - 1), perms[si], n);
                        rows[j] = (v & ~((1u << n) - 1)) | y;
                    }
                    rref_rows(rows.data(), n, bits);
                    if (seen2.insert(pack_key(rows.data(), n)).second) {
                        if (cb)
                            cb(rows.data(), int(ci), seed.log2_scale, rep.pi_idx, int(si), 0);
                    }
                }
            }
            count = seen2.size();
        } else {
            constexpr int kShards = 128;
            std::vector<std::unordered_set<Key128, Key128Hash>> shards(kShards);
            std::vector<std::mutex> locks(kShards);
            Key128Hash hasher;
            std::atomic<size_t> next{0};
            auto worker = [&](int tid) {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= reps.size()) break;
                    const Rep& rep = reps[i];
                    for (size_t si = 0; si < perms.size(); ++si) {
                        std::array<uint32_t, 8> rows;
                        for (int j = 0; j < n; ++j) {
                            uint32_t v = rep.rows[j];
                            uint32_t y = permute_half(v & ((1u << n) - 1), perms[si], n);
                            rows[j] = (v & ~((1u << n) - 1)) | y;
                        }
                        rref_rows(rows.data(), n, bits);
                        Key128 key = pack_key(rows.data(), n);
                        size_t shard = hasher(key) % kShards;
                        bool fresh;
                        {
                            std::lock_guard<std::mutex> g(locks[shard]);
                            fresh = shards[shard].insert(key).second;
                        }
                        if (fresh && cb) cb(rows.data(), int(ci), seed.log2_scale, -1, -1, tid);
                    }
                }
            };
            std::vector<std::thread> pool;
            for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
            for (auto& t : pool) t.join();
            for (auto& s : shards) count += s.size();
        }
        CommutantClass cc;
        cc.name = specs[ci].name;
        cc.generators = specs[ci].gens;
        cc.count = count;
        classes.push_back(std::move(cc));
        total += count;
    }
}

// ---- caches ------------------------------------------------------------

std::mutex g_cache_mutex;
std::map<std::pair<int, bool>, CommutantBasis> g_basis_cache;  // (n, clifford)

const CommutantBasis& cached_basis(int n, bool clifford) {
    std::lock_guard<std::mutex> g(g_cache_mutex);
    auto key = std::make_pair(n, clifford);
    auto it = g_basis_cache.find(key);
    if (it != g_basis_cache.end()) return it->second;
    CommutantBasis b = clifford ? generate_commutant(n) : generate_permutation_basis(n);
    return g_basis_cache.emplace(key, std::move(b)).first->second;
}

// ---- per-element traces ------------------------------------------------

// w(x) = sum_j eta_j (1 - 2 x_j) with eta alternating +,-,+,- from replica 0.
int error_weight(uint32_t x, int n) {
    int w = 0;
    for (int j = 0; j < n; ++j) {
        int bit = (x >> (n - 1 - j)) & 1;
        int eta = (j % 2 == 0) ? 1 : -1;
        w += eta * (1 - 2 * bit);
    }
    return w;
}

Cd cpow_int(Cd base, size_t e) {
    Cd r = 1;
    for (size_t i = 0; i < e; ++i) r *= base;
    return r;
}

double rpow_int(double base, size_t e) {
    double r = 1;
    for (size_t i = 0; i < e; ++i) r *= base;
    return r;
}

// Scale-free per-site traces of one element (the 2^{log2_scale} prefactor
// is excluded; it cancels between e/l/a and the Gram normalization in the
// diagonal mode and is restored explicitly in the exact mode).
struct SiteTraces {
    Cd err;      // sum over diagonal pairs (x,x) in T of exp(-i alpha w(x) / 2)
    Cd logical;  // sum over (x,y) in T of L(y, x)
    Cd ancilla;
};

SiteTraces site_traces(const uint32_t* rows, int n, const BoundaryOperator& b, double alpha) {
    SiteTraces t{0, 0, 0};
    uint32_t mask = (1u << n) - 1;
    for_each_in_span(rows, n, [&](uint32_t v) {
        uint32_t x = v >> n, y = v & mask;
        if (x == y) {
            double ang = -alpha / 2 * error_weight(x, n);
            t.err += Cd(std::cos(ang), std::sin(ang));
        }
        t.logical += b.logical_site(y, x);
        t.ancilla += b.ancilla_site(y, x);
    });
    return t;
}

}  // namespace

// ---- public surface ----------------------------------------------------

uint64_t cardinality_formula(int n) {
    if (n < 2) throw std::invalid_argument("cardinality_formula: n must be >= 2");
    uint64_t prod = 1;
    for (int m = 0; m <= n - 2; ++m) prod *= (uint64_t(1) << m) + 1;
    return prod;
}

Eigen::MatrixXd ReplicaOperator::single_site_action() const {
    int n = n_replicas;
    size_t dim = size_t(1) << n;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    double lam = std::exp2(double(log2_scale));
    uint32_t mask = (1u << n) - 1;
    for_each_in_span(subspace.data(), n, [&](uint32_t v) { m(v >> n, v & mask) = lam; });
    return m;
}

CommutantBasis generate_permutation_basis(int n) {
    if (n < 1 || n > 8) throw std::invalid_argument("generate_permutation_basis: n in [1,8]");
    CommutantBasis b;
    b.n_replicas = n;
    b.clifford = false;
    auto perms = all_perms(n);
    for (size_t pi = 0; pi < perms.size(); ++pi) {
        ReplicaOperator op;
        op.n_replicas = n;
        op.class_id = 0;
        for (int j = 0; j < n; ++j) {
            uint32_t e = 1u << (n - 1 - j);
            uint32_t x = permute_half(e, perms[pi], n);
            op.subspace.push_back((x << n) | e);
        }
        rref_rows(op.subspace.data(), n, 2 * n);
        op.left_perm.assign(perms[pi].begin(), perms[pi].begin() + n);
        b.ops.push_back(std::move(op));
    }
    CommutantClass cc;
    cc.name = "permutations";
    cc.count = b.ops.size();
    b.classes.push_back(std::move(cc));
    b.total = b.ops.size();
    return b;
}

CommutantBasis generate_commutant(int n, bool materialize) {
    if (n != 4 && n != 6 && n != 8)
        throw std::invalid_argument("generate_commutant: n must be 4, 6 or 8");
    CommutantBasis b;
    b.n_replicas = n;
    b.clifford = true;
    if (n != 8) {
        std::vector<std::pair<int, int>> gen_pairs;  // (pi, sigma) indices per element
        ElementCallback store = [&](const uint32_t* rows, int class_id, int scale, int pi,
                                    int sigma, int) {
            ReplicaOperator op;
            op.n_replicas = n;
            op.class_id = class_id;
            op.log2_scale = scale;
            op.subspace.assign(rows, rows + n);
            b.ops.push_back(std::move(op));
            gen_pairs.emplace_back(pi, sigma);
        };
        enumerate_clifford_basis(n, store, b.classes, b.total, 1);
        auto perms = all_perms(n);
        for (size_t i = 0; i < b.ops.size(); ++i) {
            auto [pi, sigma] = gen_pairs[i];
            b.ops[i].left_perm.assign(perms[pi].begin(), perms[pi].begin() + n);
            b.ops[i].right_perm.assign(perms[sigma].begin(), perms[sigma].begin() + n);
        }
        return b;
    }
    int threads = int(std::max(1u, std::thread::hardware_concurrency()));
    if (!materialize) {
        enumerate_clifford_basis(n, nullptr, b.classes, b.total, threads);
        return b;
    }
    std::vector<std::vector<ReplicaOperator>> local{size_t(threads)};
    ElementCallback store = [&](const uint32_t* rows, int class_id, int scale, int, int,
                                int tid) {
        ReplicaOperator op;
        op.n_replicas = n;
        op.class_id = class_id;
        op.log2_scale = scale;
        op.subspace.assign(rows, rows + n);
        local[size_t(tid)].push_back(std::move(op));
    };
    enumerate_clifford_basis(n, store, b.classes, b.total, threads);
    size_t sum = 0;
    for (auto& v : local) sum += v.size();
    b.ops.reserve(sum);
    for (auto& v : local)
        for (auto& op : v) b.ops.push_back(std::move(op));
    return b;
}

GramWeingarten gram_and_weingarten(const CommutantBasis& basis, size_t n_qubits,
                                   bool allow_large) {
    size_t m = basis.ops.size();
    if (m == 0) throw std::invalid_argument("gram_and_weingarten: basis not materialized");
    if (m > 1000 && !allow_large)
        throw ResourceError("gram_and_weingarten: basis exceeds 1000 elements; pass allow_large");
    int n = basis.n_replicas;
    double N = double(n_qubits);
    // Scaled Gram: gs[i][j] = Gram[i][j] / 2^{nN} keeps entries O(1).
    Eigen::MatrixXd gs(m, m);
    std::vector<uint32_t> buf(2 * size_t(n));
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i; j < m; ++j) {
            std::copy(basis.ops[i].subspace.begin(), basis.ops[i].subspace.end(), buf.begin());
            std::copy(basis.ops[j].subspace.begin(), basis.ops[j].subspace.end(),
                      buf.begin() + n);
            int rank = rref_rows(buf.data(), 2 * n, 2 * n);
            int dim_cap = 2 * n - rank;
            double e = N * (basis.ops[i].log2_scale + basis.ops[j].log2_scale + dim_cap - n);
            gs(i, j) = gs(j, i) = std::exp2(e);
        }
    }
    GramWeingarten out;
    double full_scale = std::exp2(N * n);
    out.gram = gs * full_scale;
    if (m <= 1000) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(gs, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        double smax = sv(0);
        double tol = smax * double(m) * 1e-13;
        Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
        double smin_kept = smax;
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            if (sv(i) > tol) {
                inv(i) = 1.0 / sv(i);
                smin_kept = sv(i);
            } else {
                out.rank_deficient = true;
            }
        }
        out.condition = smax / (sv(sv.size() - 1) > 0 ? sv(sv.size() - 1) : smin_kept);
        out.wg = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose() / full_scale;
    } else {
        // n = 6 path: the Gram matrix is positive definite for 2^N >= n.
        out.wg = gs.ldlt().solve(Eigen::MatrixXd::Identity(m, m)) / full_scale;
        out.condition = 0;
    }
    return out;
}

int replica_count(ReplicaQuantity quantity, int q) {
    switch (quantity) {
        case ReplicaQuantity::Fidelity:
            return 2;
        case ReplicaQuantity::FidelityFluct:
            return 4;
        case ReplicaQuantity::ParticipationEntropy:
            return 2 * q;
        case ReplicaQuantity::StabilizerEntropy:
            return 4 * q;
    }
    throw std::invalid_argument("replica_count: bad quantity");
}

namespace {

// Representation of the pairing permutation (12)(34)...(n-1 n).
Eigen::MatrixXcd pairing_matrix(int n) {
    size_t dim = size_t(1) << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (size_t x = 0; x < dim; ++x) {
        uint32_t out = 0;
        for (int j = 0; j < n; ++j) {
            int src = j ^ 1;  // partner replica
            out |= ((x >> (n - 1 - src)) & 1u) << (n - 1 - j);
        }
        m(out, x) = 1;
    }
    return m;
}

Eigen::MatrixXcd e00() {
    Eigen::MatrixXcd m(2, 2);
    m << 1, 0, 0, 0;
    return m;
}

Eigen::MatrixXcd exx(int x) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(x, x) = 1;
    return m;
}

Eigen::MatrixXcd logical_block(ReplicaQuantity quantity, int q, bool numerator) {
    Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
    switch (quantity) {
        case ReplicaQuantity::Fidelity:
            return numerator ? kron2(e00(), e00()) : kron2(e00(), id2);
        case ReplicaQuantity::FidelityFluct:
            return numerator ? kron_pow(kron2(e00(), e00()), 2) : kron_pow(kron2(e00(), id2), 2);
        case ReplicaQuantity::ParticipationEntropy: {
            if (!numerator) return kron_pow(kron2(e00(), id2), q);
            size_t dim = size_t(1) << (2 * q);
            Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
            for (int x = 0; x < 2; ++x) sum += kron_pow(kron2(e00(), exx(x)), q);
            return sum;
        }
        case ReplicaQuantity::StabilizerEntropy: {
            if (!numerator) return kron_pow(kron2(e00(), id2), 2 * q);
            auto paulis = pauli_matrices();
            size_t dim = size_t(1) << (4 * q);
            Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
            for (int pi = 0; pi < 4; ++pi)
                sum += kron_pow(kron2(e00(), Eigen::MatrixXcd(paulis[pi])), 2 * q);
            return 0.5 * sum;
        }
    }
    throw std::invalid_argument("logical_block: bad quantity");
}

BoundaryOperator make_boundary(ReplicaQuantity quantity, int q, bool numerator) {
    int n = replica_count(quantity, q);
    BoundaryOperator b;
    b.n_replicas = n;
    Eigen::MatrixXcd tau = pairing_matrix(n);
    b.logical_site = tau * logical_block(quantity, q, numerator);
    b.ancilla_site = tau * kron_pow(kron2(e00(), e00()), n / 2);
    return b;
}

}  // namespace

BoundaryOperator boundary_numerator(ReplicaQuantity quantity, int q) {
    return make_boundary(quantity, q, true);
}

BoundaryOperator boundary_denominator(ReplicaQuantity quantity, int q) {
    return make_boundary(quantity, q, false);
}

std::complex<double> contract_moment(const CommutantBasis& basis, const Eigen::MatrixXd& wg,
                                     const BoundaryOperator& b, const CodeParameters& p) {
    size_t m = basis.ops.size();
    if (m == 0) throw std::invalid_argument("contract_moment: basis not materialized");
    int n = basis.n_replicas;
    size_t N = p.n_qubits, k = p.k_logical;
    std::vector<Cd> err(m), bnd(m);
    for (size_t i = 0; i < m; ++i) {
        const auto& op = basis.ops[i];
        SiteTraces t = site_traces(op.subspace.data(), n, b, p.alpha);
        double lam = std::exp2(double(op.log2_scale));
        err[i] = cpow_int(lam * t.err, N);
        bnd[i] = rpow_int(lam, N) * cpow_int(t.logical, k) * cpow_int(t.ancilla, N - k);
    }
    Cd out = 0;
    for (size_t i = 0; i < m; ++i) {
        Cd row = 0;
        for (size_t j = 0; j < m; ++j) row += wg(i, j) * bnd[j];
        out += err[i] * row;
    }
    return out;
}

std::complex<double> contract_moment_diagonal(const CommutantBasis& basis,
                                              const BoundaryOperator& b,
                                              const CodeParameters& p) {
    size_t m = basis.ops.size();
    if (m == 0) throw std::invalid_argument("contract_moment_diagonal: basis not materialized");
    int n = basis.n_replicas;
    size_t N = p.n_qubits, k = p.k_logical;
    double site_dim = std::exp2(double(n));
    Cd out = 0;
    for (size_t i = 0; i < m; ++i) {
        SiteTraces t = site_traces(basis.ops[i].subspace.data(), n, b, p.alpha);
        // The 2^{log2_scale} prefactor cancels against 1/Gram_ii.
        out += cpow_int(t.err / site_dim, N) * cpow_int(t.logical, k) * cpow_int(t.ancilla, N - k);
    }
    return out;
}

namespace {

// ---- streaming diagonal table for the n = 8 Clifford basis -------------

// Per-element data is alpha-independent: a histogram of diagonal error
// weights plus the (real) boundary traces.  Distinct signatures are rare,
// so the 9.8M-element sum collapses to a small weighted table.
struct SreSignature {
    std::array<int32_t, 17> hist{};  // w in [-8, 8]
    double l_num = 0, l_den = 0, anc = 0;
    uint64_t count = 0;
};

struct SigKey {
    std::array<int32_t, 20> v{};
    bool operator==(const SigKey&) const = default;
};

struct SigKeyHash {
    size_t operator()(const SigKey& k) const {
        uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (int32_t x : k.v) h = (h ^ uint64_t(uint32_t(x))) * 0x100000001b3ULL;
        return size_t(h);
    }
};

const std::vector<SreSignature>& sre8_clifford_table() {
    static std::vector<SreSignature> table;
    static std::once_flag once;
    std::call_once(once, [] {
        const int n = 8;
        BoundaryOperator num = boundary_numerator(ReplicaQuantity::StabilizerEntropy, 2);
        BoundaryOperator den = boundary_denominator(ReplicaQuantity::StabilizerEntropy, 2);
        size_t dim = size_t(1) << n;
        Eigen::MatrixXd lnum(dim, dim), lden(dim, dim), lanc(dim, dim);
        for (size_t a = 0; a < dim; ++a)
            for (size_t bb = 0; bb < dim; ++bb) {
                lnum(a, bb) = num.logical_site(a, bb).real();
                lden(a, bb) = den.logical_site(a, bb).real();
                lanc(a, bb) = num.ancilla_site(a, bb).real();
            }
        std::array<int8_t, 256> wtab{};
        for (int x = 0; x < 256; ++x) wtab[size_t(x)] = int8_t(error_weight(uint32_t(x), n));
        int threads = int(std::max(1u, std::thread::hardware_concurrency()));
        std::vector<std::unordered_map<SigKey, uint64_t, SigKeyHash>> maps{size_t(threads)};
        ElementCallback cb = [&](const uint32_t* rows, int, int, int, int, int tid) {
            SigKey key;
            double sn = 0, sd = 0, sa = 0;
            uint32_t mask = (1u << n) - 1;
            for_each_in_span(rows, n, [&](uint32_t v) {
                uint32_t x = v >> n, y = v & mask;
                if (x == y) key.v[size_t(wtab[x] + 8)]++;
                sn += lnum(y, x);
                sd += lden(y, x);
                sa += lanc(y, x);
            });
            key.v[17] = int32_t(std::lround(sn * 4));
            key.v[18] = int32_t(std::lround(sd * 4));
            key.v[19] = int32_t(std::lround(sa * 4));
            maps[size_t(tid)][key]++;
        };
        std::vector<CommutantClass> classes;
        uint64_t total = 0;
        enumerate_clifford_basis(n, cb, classes, total, threads);
        std::unordered_map<SigKey, uint64_t, SigKeyHash> merged;
        for (auto& m : maps)
            for (auto& [key, cnt] : m) merged[key] += cnt;
        for (auto& [key, cnt] : merged) {
            SreSignature s;
            for (int i = 0; i < 17; ++i) s.hist[size_t(i)] = key.v[size_t(i)];
            s.l_num = key.v[17] / 4.0;
            s.l_den = key.v[18] / 4.0;
            s.anc = key.v[19] / 4.0;
            s.count = cnt;
            table.push_back(s);
        }
    });
    return table;
}

double sre8_clifford_diagonal(const CodeParameters& p) {
    const auto& table = sre8_clifford_table();
    size_t N = p.n_qubits, k = p.k_logical;
    Cd num = 0, den = 0;
    for (const auto& s : table) {
        Cd e = 0;
        for (int w = -8; w <= 8; ++w) {
            if (!s.hist[size_t(w + 8)]) continue;
            double ang = -p.alpha / 2 * w;
            e += double(s.hist[size_t(w + 8)]) * Cd(std::cos(ang), std::sin(ang));
        }
        Cd base = cpow_int(e / 256.0, N) * double(s.count);
        num += base * rpow_int(s.l_num, k) * rpow_int(s.anc, N - k);
        den += base * rpow_int(s.l_den, k) * rpow_int(s.anc, N - k);
    }
    return -std::log2(num.real() / den.real());
}

}  // namespace

Fluctuations contract_fluctuations(const CodeParameters& p, Ensemble ensemble) {
    const CommutantBasis& b2 = cached_basis(2, false);
    const CommutantBasis& b4 = cached_basis(4, ensemble == Ensemble::Clifford);
    GramWeingarten w2 = gram_and_weingarten(b2, p.n_qubits);
    GramWeingarten w4 = gram_and_weingarten(b4, p.n_qubits);
    double mean_m =
        contract_moment(b2, w2.wg, boundary_numerator(ReplicaQuantity::Fidelity, 1), p).real();
    double mean_p =
        contract_moment(b2, w2.wg, boundary_denominator(ReplicaQuantity::Fidelity, 1), p).real();
    double m2 =
        contract_moment(b4, w4.wg, boundary_numerator(ReplicaQuantity::FidelityFluct, 2), p)
            .real();
    double p2 =
        contract_moment(b4, w4.wg, boundary_denominator(ReplicaQuantity::FidelityFluct, 2), p)
            .real();
    Fluctuations f;
    f.dm2 = m2 / (mean_m * mean_m) - 1;
    f.dp2 = p2 / (mean_p * mean_p) - 1;
    return f;
}

double annealed_contract(ReplicaQuantity quantity, int q, ContractionMode mode,
                         const CodeParameters& p, Ensemble ensemble) {
    int n = replica_count(quantity, q);
    bool clifford = ensemble == Ensemble::Clifford && n >= 4;
    if (quantity == ReplicaQuantity::FidelityFluct) {
        if (mode != ContractionMode::Exact)
            throw std::invalid_argument("fluctuations support exact mode only");
        return contract_fluctuations(p, ensemble).dm2;
    }
    if (quantity == ReplicaQuantity::ParticipationEntropy && (q < 2 || q > 3))
        throw std::invalid_argument("participation entropy contraction supports q in {2,3}");
    if (quantity == ReplicaQuantity::StabilizerEntropy) {
        if (q != 2 || mode != ContractionMode::Diagonal)
            throw std::invalid_argument("stabilizer entropy contraction supports q=2 diagonal");
        if (clifford) return sre8_clifford_diagonal(p);
    }
    if (mode == ContractionMode::Exact && n > 4)
        throw std::invalid_argument("exact contraction is limited to n <= 4 replicas");
    const CommutantBasis& basis = cached_basis(n, clifford);
    BoundaryOperator bn = boundary_numerator(quantity, q);
    BoundaryOperator bd = boundary_denominator(quantity, q);
    double num, den;
    if (mode == ContractionMode::Exact) {
        GramWeingarten gw = gram_and_weingarten(basis, p.n_qubits);
        num = contract_moment(basis, gw.wg, bn, p).real();
        den = contract_moment(basis, gw.wg, bd, p).real();
    } else {
        num = contract_moment_diagonal(basis, bn, p).real();
        den = contract_moment_diagonal(basis, bd, p).real();
    }
    switch (quantity) {
        case ReplicaQuantity::Fidelity:
            return num / den;
        case ReplicaQuantity::ParticipationEntropy:
        case ReplicaQuantity::StabilizerEntropy:
            return std::log2(num / den) / (1 - q);
        default:
            throw std::invalid_argument("annealed_contract: bad quantity");
    }
}

}  // namespace edc
