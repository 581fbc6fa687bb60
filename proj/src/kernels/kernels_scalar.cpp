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

#include <bit>

#include "faultchain/kernels.hpp"

namespace faultchain::kernels::scalar {

std::size_t popcount(WordSpan a) {
    std::size_t total = 0;
    for (Word w : a) {
        total += static_cast<std::size_t>(std::popcount(w));
    }
    return total;
}

std::size_t and_popcount(WordSpan a, WordSpan b) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
    }
    return total;
}

std::size_t and3_popcount(WordSpan a, WordSpan b, WordSpan c) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += static_cast<std::size_t>(std::popcount(a[i] & b[i] & c[i]));
    }
    return total;
}

}  // namespace faultchain::kernels::scalar
