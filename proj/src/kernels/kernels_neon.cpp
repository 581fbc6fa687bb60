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

#include <arm_neon.h>

#include "faultchain/kernels.hpp"

namespace faultchain::kernels::neon {

namespace {

inline std::size_t lane_sum(uint8x16_t bytes) { return static_cast<std::size_t>(vaddlvq_u8(bytes)); }

inline uint8x16_t load(const Word* p) { return vreinterpretq_u8_u64(vld1q_u64(p)); }

}  // namespace

std::size_t popcount(WordSpan a) {
    std::size_t total = 0;
    std::size_t i = 0;
    for (; i + 2 <= a.size(); i += 2) {
        total += lane_sum(vcntq_u8(load(a.data() + i)));
    }
    for (; i < a.size(); ++i) {
        total += static_cast<std::size_t>(__builtin_popcountll(a[i]));
    }
    return total;
}

std::size_t and_popcount(WordSpan a, WordSpan b) {
    std::size_t total = 0;
    std::size_t i = 0;
    for (; i + 2 <= a.size(); i += 2) {
        total += lane_sum(vcntq_u8(vandq_u8(load(a.data() + i), load(b.data() + i))));
    }
    for (; i < a.size(); ++i) {
        total += static_cast<std::size_t>(__builtin_popcountll(a[i] & b[i]));
    }
    return total;
}

std::size_t and3_popcount(WordSpan a, WordSpan b, WordSpan c) {
    std::size_t total = 0;
    std::size_t i = 0;
    for (; i + 2 <= a.size(); i += 2) {
        const uint8x16_t ab = vandq_u8(load(a.data() + i), load(b.data() + i));
        total += lane_sum(vcntq_u8(vandq_u8(ab, load(c.data() + i))));
    }
    for (; i < a.size(); ++i) {
        total += static_cast<std::size_t>(__builtin_popcountll(a[i] & b[i] & c[i]));
    }
    return total;
}

}  // namespace faultchain::kernels::neon
