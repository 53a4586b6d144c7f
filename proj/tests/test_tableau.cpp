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

#include <map>
#include <random>
#include <set>

#include "edc/tableau.hpp"

using namespace edc;

TEST_CASE("identity tableau is valid") {
    for (size_t n : {1, 2, 5, 70}) {
        CliffordTableau t = CliffordTableau::identity(n);
        CHECK(t.is_valid());
        CHECK(t.z_images[n - 1].str().back() == 'Z');
    }
}

TEST_CASE("random tableaus satisfy the symplectic relations") {
    std::mt19937_64 rng(2024);
    for (size_t n : {1, 2, 3, 4, 6, 12, 65}) {
        for (int it = 0; it < (n > 10 ? 3 : 20); ++it) {
            CliffordTableau t = random_clifford(n, rng);
            REQUIRE(t.is_valid());
            auto& gens = conjugated_error_generators(t);
            REQUIRE(gens.size() == n);
            for (size_t i = 0; i < n; ++i) {
                CHECK(gens[i].is_hermitian());
                for (size_t j = 0; j < n; ++j) CHECK(gens[i].commutes_with(gens[j]));
            }
        }
    }
}

TEST_CASE("seed determinism") {
    std::mt19937_64 a(42), b(42), c(43);
    CliffordTableau ta = random_clifford(5, a);
    CliffordTableau tb = random_clifford(5, b);
    CliffordTableau tc = random_clifford(5, c);
    CHECK(ta.to_hex() == tb.to_hex());
    CHECK(ta.to_hex() != tc.to_hex());
}

TEST_CASE("single-qubit sampling covers all 24 elements uniformly") {
    std::mt19937_64 rng(7);
    std::map<std::string, int> counts;
    const int samples = 24000;
    for (int it = 0; it < samples; ++it) counts[random_clifford(1, rng).to_hex()]++;
    CHECK(counts.size() == 24);
    // Expected 1000 per cell; 5 sigma ~ 155.
    for (auto& [k, c] : counts) {
        CHECK(c > 800);
        CHECK(c < 1200);
    }
}

TEST_CASE("two-qubit sampling reaches every element") {
    // |Sp(4,2)| * 2^4 signs = 720 * 16 = 11520 tableaus modulo phase.
    std::mt19937_64 rng(11);
    std::set<std::string> seen;
    for (int it = 0; it < 400000 && seen.size() < 11520; ++it)
        seen.insert(random_clifford(2, rng).to_hex());
    CHECK(seen.size() == 11520);
}

TEST_CASE("hex round trip") {
    std::mt19937_64 rng(314);
    for (size_t n : {1, 3, 64, 65, 80}) {
        CliffordTableau t = random_clifford(n, rng);
        CliffordTableau u = CliffordTableau::from_hex(t.to_hex());
        CHECK(u.to_hex() == t.to_hex());
        for (size_t j = 0; j < n; ++j) {
            CHECK(u.x_images[j] == t.x_images[j]);
            CHECK(u.z_images[j] == t.z_images[j]);
        }
    }
}

TEST_CASE("corrupted hex is rejected") {
    std::mt19937_64 rng(1);
    CliffordTableau t = random_clifford(2, rng);
    std::string h = t.to_hex();
    // Swapping one image for another breaks the commutation relations.
    std::string bad = h;
    size_t first = bad.find(":0");
    if (first == std::string::npos) first = bad.find(":1");
    bad = "2" + bad.substr(bad.find(':'));
    CHECK_THROWS(CliffordTableau::from_hex(h.substr(0, h.size() / 2)));
}
