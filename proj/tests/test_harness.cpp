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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "edc/decoder.hpp"
#include "edc/harness.hpp"
#include "edc/metrics.hpp"
#include "edc/tableau.hpp"
#include "edc/theory.hpp"

using namespace edc;

namespace {

ExperimentConfig base_config() {
    ExperimentConfig cfg;
    cfg.ensemble = Ensemble::Clifford;
    cfg.protocol = Protocol::Forced;
    cfg.n_list = {8};
    cfg.rate = 0.5;
    cfg.alpha_grid = {0.5, 1.1};
    cfg.realizations = 20;
    cfg.seed = 12345;
    cfg.metrics = {"fidelity", "born_prob"};
    return cfg;
}

const ResultRecord& find_record(const std::vector<ResultRecord>& recs, size_t n, double alpha,
                                const std::string& metric) {
    for (const ResultRecord& r : recs)
        if (r.n == n && r.alpha == alpha && r.metric == metric) return r;
    throw std::runtime_error("record not found: " + metric);
}

}  // namespace

TEST_CASE("derived seeds: counter-based, collision-free on a small lattice") {
    std::vector<uint64_t> seen;
    for (uint64_t n : {8u, 12u})
        for (uint64_t ai = 0; ai < 16; ++ai)
            for (uint64_t r = 0; r < 64; ++r) seen.push_back(derived_seed(99, n, ai, r));
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    CHECK(derived_seed(1, 8, 0, 0) != derived_seed(2, 8, 0, 0));
}

TEST_CASE("pairwise sum matches plain summation") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> v(1237);
    for (auto& x : v) x = u(rng);
    double plain = std::accumulate(v.begin(), v.end(), 0.0);
    CHECK(pairwise_sum(v.data(), v.size()) == doctest::Approx(plain).epsilon(1e-12));
    std::vector<double> ints(100, 1.0);
    CHECK(pairwise_sum(ints.data(), ints.size()) == 100.0);
}

TEST_CASE("determinism: identical records across reruns and thread counts") {
    ExperimentConfig cfg = base_config();
    cfg.metrics = {"fidelity", "born_prob", "pe_2"};
    cfg.threads = 1;
    std::string a = to_csv(run(cfg));
    std::string b = to_csv(run(cfg));
    CHECK(a == b);
    cfg.threads = 4;
    std::string c = to_csv(run(cfg));
    CHECK(a == c);
}

TEST_CASE("CSV round trip") {
    ExperimentConfig cfg = base_config();
    std::vector<ResultRecord> recs = run(cfg);
    std::vector<ResultRecord> back = parse_csv(to_csv(recs));
    REQUIRE(back.size() == recs.size());
    for (size_t i = 0; i < recs.size(); ++i) {
        CHECK(back[i].ensemble == recs[i].ensemble);
        CHECK(back[i].protocol == recs[i].protocol);
        CHECK(back[i].n == recs[i].n);
        CHECK(back[i].k == recs[i].k);
        CHECK(back[i].alpha == recs[i].alpha);  // %.17g survives the round trip exactly
        CHECK(back[i].metric == recs[i].metric);
        CHECK(back[i].mean == recs[i].mean);
        CHECK(back[i].sem == recs[i].sem);
        CHECK(back[i].count == recs[i].count);
        CHECK(back[i].seed == recs[i].seed);
    }
}

TEST_CASE("protocol consistency: born run equals sum_s p(s) metric(s) from the oracle") {
    ExperimentConfig cfg = base_config();
    cfg.protocol = Protocol::Born;
    cfg.n_list = {8};
    cfg.alpha_grid = {0.9};
    cfg.realizations = 3;
    cfg.metrics = {"fidelity", "pe_2"};
    std::vector<ResultRecord> recs = run(cfg);

    size_t n = 8, k = 4;
    ErrorModel em(0.9);
    std::vector<double> fid_vals, pe_vals;
    for (uint64_t r = 0; r < cfg.realizations; ++r) {
        std::mt19937_64 rng(derived_seed(cfg.seed, n, 0, r));
        CliffordTableau t = random_clifford(n, rng);
        const std::vector<PauliString>& gens = conjugated_error_generators(t);
        double fsum = 0, psum = 0, wsum = 0;
        for (uint64_t s = 0; s < (uint64_t(1) << (n - k)); ++s) {
            BitVec syn(n - k);
            for (size_t i = 0; i < n - k; ++i) syn.set(i, (s >> i) & 1);
            DecodedState st = decode_oracle(gens, em, syn, k);
            if (st.born_prob <= 0) continue;
            LogicalStateView view{&st.amplitudes, k};
            uint64_t target = 0;
            if (s != 0) {
                double best = -1;
                for (uint64_t x = 0; x < st.amplitudes.size(); ++x)
                    if (std::norm(st.amplitudes[x]) > best) {
                        best = std::norm(st.amplitudes[x]);
                        target = x;
                    }
            }
            fsum += st.born_prob * fidelity(view, target);
            psum += st.born_prob * participation_entropy(view, 2);
            wsum += st.born_prob;
        }
        fid_vals.push_back(fsum / wsum);
        pe_vals.push_back(psum / wsum);
    }
    double fmean = std::accumulate(fid_vals.begin(), fid_vals.end(), 0.0) / fid_vals.size();
    double pmean = std::accumulate(pe_vals.begin(), pe_vals.end(), 0.0) / pe_vals.size();
    CHECK(find_record(recs, 8, 0.9, "fidelity").mean == doctest::Approx(fmean).epsilon(1e-10));
    CHECK(find_record(recs, 8, 0.9, "pe_2").mean == doctest::Approx(pmean).epsilon(1e-10));
    // Exhaustive weighting: the total born weight of any circuit is 1.
    ExperimentConfig bp = cfg;
    bp.metrics = {"born_prob"};
    CHECK(find_record(run(bp), 8, 0.9, "born_prob").mean == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("forced sweep agrees with the annealed fidelity curve") {
    ExperimentConfig cfg = base_config();
    cfg.n_list = {8, 12};
    cfg.alpha_grid = {0.4, 0.9, 1.4, 2.0};
    cfg.realizations = 400;
    std::vector<ResultRecord> recs = run(cfg);
    for (size_t n : cfg.n_list) {
        for (double a : cfg.alpha_grid) {
            const ResultRecord& r = find_record(recs, n, a, "fidelity");
            double expect = annealed_fidelity({n, n / 2, a}).value;
            CHECK(std::abs(r.mean - expect) < 4 * r.sem + 0.02);
            const ResultRecord& p = find_record(recs, n, a, "born_prob");
            double pexpect = annealed_fidelity({n, n / 2, a}).mean_p;
            CHECK(std::abs(p.mean - pexpect) < 4 * p.sem + 0.02);
        }
    }
}

TEST_CASE("haar forced sweep agrees with the annealed fidelity curve") {
    ExperimentConfig cfg = base_config();
    cfg.ensemble = Ensemble::Haar;
    cfg.n_list = {8};
    cfg.alpha_grid = {0.6, 1.2};
    cfg.realizations = 150;
    std::vector<ResultRecord> recs = run(cfg);
    for (double a : cfg.alpha_grid) {
        const ResultRecord& r = find_record(recs, 8, a, "fidelity");
        double expect = annealed_fidelity({8, 4, a}).value;
        CHECK(std::abs(r.mean - expect) < 4 * r.sem + 0.03);
    }
}

TEST_CASE("doubling realizations shrinks stderr like 1/sqrt(R)") {
    ExperimentConfig cfg = base_config();
    cfg.n_list = {10};
    cfg.alpha_grid = {1.1};
    cfg.realizations = 100;
    double s1 = find_record(run(cfg), 10, 1.1, "fidelity").sem;
    cfg.realizations = 400;
    double s2 = find_record(run(cfg), 10, 1.1, "fidelity").sem;
    CHECK(s1 / s2 == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("class protocol: sanity and resilience below threshold") {
    ExperimentConfig cfg = base_config();
    cfg.protocol = Protocol::Class;
    cfg.syndrome_ell = 1;
    cfg.n_list = {12};
    cfg.alpha_grid = {0.4, 2.6};
    cfg.realizations = 60;
    cfg.metrics = {"fidelity", "class_stats"};
    std::vector<ResultRecord> recs = run(cfg);
    double f_low = find_record(recs, 12, 0.4, "fidelity").mean;
    double f_high = find_record(recs, 12, 2.6, "fidelity").mean;
    CHECK(f_low > 0.8);
    CHECK(f_high < 0.5);
    const ResultRecord& cc = find_record(recs, 12, 0.4, "class_count");
    CHECK(cc.mean > 0);
    CHECK(cc.mean <= 12.0);
    double amb = find_record(recs, 12, 0.4, "class_ambiguous").mean;
    CHECK(amb >= 0.0);
    CHECK(amb <= 1.0);
}

TEST_CASE("magic bound holds on every decoded state with F > 1/2") {
    ExperimentConfig cfg = base_config();
    cfg.n_list = {10};
    cfg.alpha_grid = {0.3, 0.9, 1.5};
    cfg.realizations = 60;
    cfg.metrics = {"fidelity", "sre_2"};
    std::vector<ResultRecord> recs = run(cfg);
    for (double a : cfg.alpha_grid)
        CHECK(find_record(recs, 10, a, "magic_bound_viol").mean == 0.0);
}

TEST_CASE("analyze: synthetic logistic records recover nu = 1 through the CSV path") {
    double ac = critical_alpha(0.5);
    std::vector<ResultRecord> recs;
    for (size_t n : {8u, 16u, 24u, 32u}) {
        for (int i = 0; i <= 40; ++i) {
            double a = 0.4 + (2.0 - 0.4) * i / 40;
            ResultRecord r;
            r.ensemble = "clifford";
            r.protocol = "forced";
            r.n = n;
            r.k = n / 2;
            r.alpha = a;
            r.metric = "fidelity";
            r.mean = 1.0 / (1.0 + std::exp(std::tan(ac / 2) * n * (a - ac)));
            r.sem = 0.01;
            r.count = 100;
            recs.push_back(std::move(r));
        }
    }
    std::vector<ResultRecord> back = parse_csv(to_csv(recs));
    CollapseReport rep = analyze(back, "fidelity", {ac + 0.05, 1.3});
    CHECK(rep.nu == doctest::Approx(1.0).epsilon(0.05));
    CHECK(rep.alpha_c == doctest::Approx(ac).epsilon(0.02));
}

TEST_CASE("configuration and budget rejections") {
    ExperimentConfig cfg = base_config();

    ExperimentConfig bad = cfg;
    bad.n_list.clear();
    CHECK_THROWS_AS(run(bad), ConfigError);

    bad = cfg;
    bad.rate = 0.01;  // k = 0 at N = 8
    CHECK_THROWS_AS(run(bad), ConfigError);

    bad = cfg;
    bad.alpha_grid = {4.0};
    CHECK_THROWS_AS(run(bad), ConfigError);

    bad = cfg;
    bad.metrics = {"nope"};
    CHECK_THROWS_AS(run(bad), ConfigError);

    bad = cfg;
    bad.protocol = Protocol::Class;
    bad.ensemble = Ensemble::Haar;
    CHECK_THROWS_AS(run(bad), ConfigError);

    bad = cfg;
    bad.forced_syndrome = 1u << 5;  // beyond the 4 ancillas of N=8, k=4
    CHECK_THROWS_AS(run(bad), ConfigError);

    bad = cfg;
    bad.ensemble = Ensemble::Haar;
    bad.n_list = {14};
    CHECK_THROWS_AS(run(bad), ResourceError);

    bad = cfg;
    bad.protocol = Protocol::Born;
    bad.n_list = {26};
    CHECK_THROWS_AS(run(bad), ResourceError);

    bad = cfg;
    bad.metrics = {"sre_2"};
    bad.n_list = {30};  // k = 15 > 13
    CHECK_THROWS_AS(run(bad), ResourceError);

    // Analysis needs at least two sizes.
    std::vector<ResultRecord> one;
    ResultRecord r;
    r.n = 8;
    r.metric = "fidelity";
    one.push_back(r);
    CHECK_THROWS_AS(analyze(one, "fidelity", {1.1, 1.0}), ConfigError);
}
