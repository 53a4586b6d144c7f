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

#include "edc/theory.hpp"

using namespace edc;

TEST_CASE("critical alpha") {
    CHECK(critical_alpha(0.5) == doctest::Approx(2 * std::acos(std::pow(2, -0.25))));
    CHECK(critical_alpha(0.5) == doctest::Approx(1.144).epsilon(1e-3));
    CHECK(critical_alpha(0.999) == doctest::Approx(0.0).epsilon(1e-1));
    CHECK(critical_alpha(1e-12) == doctest::Approx(M_PI / 2).epsilon(1e-9));
    CHECK_THROWS(critical_alpha(0.0));
    CHECK_THROWS(critical_alpha(1.0));
}

TEST_CASE("annealed fidelity limits") {
    for (size_t n : {8, 16, 24, 40}) {
        size_t k = n / 2;
        AnnealedFidelity f0 = annealed_fidelity({n, k, 0.0});
        CHECK(f0.value == doctest::Approx(1.0).epsilon(1e-12));
        AnnealedFidelity fp = annealed_fidelity({n, k, M_PI});
        double expect = (std::exp2(double(n)) - 1) / (std::exp2(double(n + k)) - 1);
        CHECK(fp.value == doctest::Approx(expect).epsilon(1e-12));
        // Logistic form is exactly 1/2 at the critical point.
        AnnealedFidelity fc = annealed_fidelity({n, k, critical_alpha(0.5)});
        CHECK(fc.logistic == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("annealed fidelity is monotone non-increasing in alpha") {
    for (size_t n : {6, 10, 20, 44}) {
        for (size_t k : {n / 4, n / 2, 3 * n / 4}) {
            if (k == 0) continue;
            double prev = 2;
            for (int i = 0; i <= 100; ++i) {
                double a = M_PI * i / 100;
                double v = annealed_fidelity({n, k, a}).value;
                CHECK(v <= prev + 1e-12);
                CHECK(v >= 0);
                CHECK(v <= 1 + 1e-12);
                prev = v;
            }
        }
    }
}

TEST_CASE("fluctuations at alpha=0 and exponential decay in N") {
    // Haar closed value at alpha = 0.
    for (size_t n : {8, 12, 16}) {
        Fluctuations f = fidelity_fluctuations({n, n / 2, 0.0}, Ensemble::Haar);
        double p2n = std::exp2(double(n));
        CHECK(f.dm2 == doctest::Approx((1 + 2 * p2n) / ((1 + p2n) * (1 + p2n))).epsilon(1e-12));
    }
    for (Ensemble e : {Ensemble::Haar, Ensemble::Clifford}) {
        for (double alpha : {0.0, 0.4, 1.1}) {
            double prev_m = 1e300, prev_p = 1e300;
            for (size_t n = 8; n <= 28; n += 4) {
                Fluctuations f = fidelity_fluctuations({n, n / 2, alpha}, e);
                CHECK(f.dm2 > 0);
                CHECK(f.dp2 > 0);
                CHECK(f.dm2 < prev_m);
                CHECK(f.dp2 < prev_p);
                prev_m = f.dm2;
                prev_p = f.dp2;
            }
        }
    }
}

TEST_CASE("SRE criticality values") {
    // gamma = 1 exactly at alpha_c, so x = 1/2; k -> infinity kills the
    // subleading term and pins the crossing values 4 (q=2) and 3 (q=3).
    double ac = critical_alpha(0.5);
    CodeParameters big{400, 200, ac};
    CHECK(annealed_sre_haar(big, 2) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(annealed_sre_haar(big, 3) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(sre_scaling_form(big, 2) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(sre_scaling_form(big, 3) == doctest::Approx(3.0).epsilon(1e-12));
    // alpha -> 0 at fixed rate: no magic (x -> 1 at rate 2^{k-N}).
    CHECK(std::abs(annealed_sre_haar({200, 100, 0.0}, 2)) < 1e-12);
    CHECK(std::abs(annealed_sre2_clifford({200, 100, 0.0})) < 1e-12);
    CHECK(std::abs(annealed_pe({200, 100, 0.0}, 2)) < 1e-12);
    CHECK(std::abs(annealed_pe({200, 100, 0.0}, 3)) < 1e-12);
}

TEST_CASE("SRE densities: branches and continuity") {
    double r = 0.5;
    double ac = critical_alpha(r);
    CHECK(sre_density_haar(r, ac * 0.9, 2) == 0.0);
    // Deep vulnerable regime: r/(q-1).
    CHECK(sre_density_haar(r, 3.1, 2) == doctest::Approx(r).epsilon(1e-12));
    CHECK(sre_density_haar(r, 3.1, 3) == doctest::Approx(r / 2).epsilon(1e-12));
    // Continuity at both boundaries.
    double astar = 2 * std::acos(std::exp2((r - 1) / 2 - r / 8.0));  // q=2 boundary
    for (double eps : {-1e-7, 1e-7}) {
        CHECK(sre_density_haar(r, ac + eps, 2) == doctest::Approx(0.0).epsilon(1e-5));
        double lo = sre_density_haar(r, astar + eps, 2);
        CHECK(lo == doctest::Approx(r).epsilon(1e-5));
    }

    // Clifford density: zero branch, middle branch, and the trigonometric
    // deep branch, continuous at the threshold.
    CHECK(sre2_density_clifford(r, ac * 0.5) == 0.0);
    // The middle branch window above alpha_c is narrow; 0.01 stays inside it.
    double mid = sre2_density_clifford(r, ac + 0.01);
    CHECK(mid == doctest::Approx(8 * std::log2(std::cos(ac / 2) / std::cos((ac + 0.01) / 2)))
                     .epsilon(1e-12));
    // Find the threshold numerically and check both branch values agree there.
    double lo = ac, hi = 3.14;
    for (int it = 0; it < 200; ++it) {
        double m = (lo + hi) / 2;
        double s2 = std::sin(2 * m);
        double lam = std::pow(1 - s2 * s2 / 4, 1.0 / 8.0);
        if (std::cos(m / 2) / std::cos(ac / 2) > lam)
            lo = m;
        else
            hi = m;
    }
    double a = (lo + hi) / 2;
    double s2 = std::sin(2 * a);
    CHECK(8 * std::log2(std::cos(ac / 2) / std::cos(a / 2)) ==
          doctest::Approx(-std::log2(1 - s2 * s2 / 4)).epsilon(1e-6));
}

TEST_CASE("nontrivial syndrome moments") {
    CodeParameters p{12, 6, 0.0};
    CHECK(haar_nontrivial_syndrome_moments(p).mean_p == doctest::Approx(0.0));
    CodeParameters q{30, 15, 0.9};
    NontrivialMoments m = haar_nontrivial_syndrome_moments(q);
    CHECK(m.mean_p == doctest::Approx(std::exp2(15.0 - 30.0)).epsilon(1e-3));
    CHECK(m.factorial_moment(2) == doctest::Approx(2 * m.mean_m));
    CHECK(m.factorial_moment(3) == doctest::Approx(6 * m.mean_m));
}

TEST_CASE("collapse fit recovers nu=1 on synthetic logistic curves") {
    double ac = critical_alpha(0.5);
    std::vector<Curve> fam;
    for (size_t n : {8, 16, 24, 32}) {
        Curve c;
        c.n = n;
        for (int i = 0; i <= 40; ++i) {
            double a = 0.4 + (2.0 - 0.4) * i / 40;
            c.alpha.push_back(a);
            c.value.push_back(1.0 / (1.0 + std::exp(std::tan(ac / 2) * n * (a - ac))));
            c.err.push_back(0.01);
        }
        fam.push_back(std::move(c));
    }
    CollapseReport rep = crossing_and_collapse(fam, {ac + 0.05, 1.3});
    CHECK(rep.nu == doctest::Approx(1.0).epsilon(0.05));
    CHECK(rep.alpha_c == doctest::Approx(ac).epsilon(0.02));
    for (auto& cr : rep.crossings) {
        CHECK(cr.found);
        CHECK(cr.alpha_x == doctest::Approx(ac).epsilon(0.01));
    }
    // The fitted point beats a detuned ansatz.
    CHECK(rep.quality * 2 < collapse_quality(fam, ac, 2.0));
}
