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

// Compiled with -mavx2 -mpopcnt; only reached after a runtime CPU check.

#include <immintrin.h>

#include <bit>

#include "faultchain/kernels.hpp"

namespace faultchain::kernels::avx2 {

namespace {

// Nibble-lookup popcount: per-byte counts via pshufb, summed with psadbw
// into four 64-bit lanes.
inline __m256i popcount_bytes(__m256i v) {
    const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                            0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    return _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
}

inline std::size_t horizontal_sum(__m256i acc) {
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    return static_cast<std::size_t>(lanes[0] + lanes[1] + lanes[2] + lanes[3]);
}

inline __m256i load(const Word* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }

template <typename Combine>
std::size_t reduce(std::size_t n, Combine&& combine) {
    constexpr std::size_t kStep = 4;
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + kStep <= n; i += kStep) {
        const __m256i counts = popcount_bytes(combine.vec(i));
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(counts, _mm256_setzero_si256()));
    }
    std::size_t total = horizontal_sum(acc);
    for (; i < n; ++i) {
        total += static_cast<std::size_t>(_mm_popcnt_u64(combine.word(i)));
    }
    return total;
}

struct One {
    const Word* a;
    __m256i vec(std::size_t i) const { return load(a + i); }
    Word word(std::size_t i) const { return a[i]; }
};

struct Two {
    const Word* a;
    const Word* b;
    __m256i vec(std::size_t i) const { return _mm256_and_si256(load(a + i), load(b + i)); }
    Word word(std::size_t i) const { return a[i] & b[i]; }
};

struct Three {
    const Word* a;
    const Word* b;
    const Word* c;
    __m256i vec(std::size_t i) const {
        return _mm256_and_si256(_mm256_and_si256(load(a + i), load(b + i)), load(c + i));
    }
    Word word(std::size_t i) const { return a[i] & b[i] & c[i]; }
};

}  // namespace

std::size_t popcount(WordSpan a) { return reduce(a.size(), One{a.data()}); }

std::size_t and_popcount(WordSpan a, WordSpan b) { return reduce(a.size(), Two{a.data(), b.data()}); }

std::size_t and3_popcount(WordSpan a, WordSpan b, WordSpan c) {
    return reduce(a.size(), Three{a.data(), b.data(), c.data()});
}

}  // namespace faultchain::kernels::avx2
