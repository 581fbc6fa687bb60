// Copyright 2026-present the faultchain authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <bit>
#include <cstdlib>
#include <random>
#include <vector>

#include "faultchain/bitcolumn.hpp"
#include "faultchain/kernels.hpp"

using namespace faultchain;
namespace k = faultchain::kernels;

namespace {

std::vector<k::Word> random_words(std::mt19937_64& rng, std::size_t n, int density) {
    std::vector<k::Word> v(n);
    for (auto& w : v) {
        w = rng();
        // thin or thicken the bits to exercise sparse and dense columns
        for (int d = 0; d < density; ++d) {
            w &= rng();
        }
        if (density < 0) {
            w |= rng();
        }
    }
    return v;
}

std::size_t naive(const std::vector<k::Word>& a) {
    std::size_t n = 0;
    for (auto w : a) {
        for (int b = 0; b < 64; ++b) {
            n += (w >> b) & 1;
        }
    }
    return n;
}

std::vector<k::Backend> available() {
    std::vector<k::Backend> out;
    for (auto b : {k::Backend::Scalar, k::Backend::Avx2, k::Backend::Neon}) {
        if (k::backend_available(b)) {
            out.push_back(b);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("scalar popcount agrees with a bit-by-bit count") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {0, 1, 3, 4, 5, 17, 64}) {
        auto a = random_words(rng, n, 0);
        CHECK(k::scalar::popcount(a) == naive(a));
    }
}

TEST_CASE("every available backend matches the scalar reference") {
    std::mt19937_64 rng(2024);
    const auto backends = available();
    REQUIRE(backends.front() == k::Backend::Scalar);
    for (std::size_t n = 0; n <= 67; ++n) {
        for (int density : {-1, 0, 2}) {
            auto a = random_words(rng, n, density);
            auto b = random_words(rng, n, density);
            auto c = random_words(rng, n, density);
            const std::size_t p = k::scalar::popcount(a);
            const std::size_t ab = k::scalar::and_popcount(a, b);
            const std::size_t abc = k::scalar::and3_popcount(a, b, c);
            for (auto backend : backends) {
                INFO("backend " << k::backend_name(backend) << " n=" << n);
                const auto& t = k::table(backend);
                CHECK(t.popcount(a) == p);
                CHECK(t.and_popcount(a, b) == ab);
                CHECK(t.and3_popcount(a, b, c) == abc);
            }
        }
    }
}

TEST_CASE("all-ones and all-zero columns at awkward lengths") {
    for (auto backend : available()) {
        const auto& t = k::table(backend);
        for (std::size_t n : {1, 4, 7, 8, 9, 33}) {
            std::vector<k::Word> ones(n, ~k::Word{0});
            std::vector<k::Word> zeros(n, 0);
            CHECK(t.popcount(ones) == 64 * n);
            CHECK(t.popcount(zeros) == 0);
            CHECK(t.and_popcount(ones, zeros) == 0);
            CHECK(t.and3_popcount(ones, ones, ones) == 64 * n);
        }
    }
}

TEST_CASE("dispatch uses an available backend") {
    CHECK(k::backend_available(k::active_backend()));
    std::vector<k::Word> a = {0xF0F0, 0x1};
    CHECK(k::popcount(a) == 9);
}

TEST_CASE("bit columns keep a zero tail") {
    BitColumn c(70, true);
    CHECK(c.count() == 70);
    auto inv = ~c;
    CHECK(inv.count() == 0);
    BitColumn d{1, 0, 1, 1, 0};
    CHECK(d.count() == 3);
    CHECK((~d).count() == 2);
    d.push_back(true);
    CHECK(d.size() == 6);
    CHECK(d.count() == 4);
    auto bytes = d.to_bytes();
    CHECK(BitColumn::from_bytes(bytes) == d);
    CHECK((d & BitColumn{1, 1, 0, 0, 0, 1}).count() == 2);
    CHECK((d | BitColumn{0, 1, 0, 0, 0, 0}).count() == 5);
}
