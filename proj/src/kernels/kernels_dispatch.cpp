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

#include <cstdlib>
#include <string_view>

#include "faultchain/kernels.hpp"

namespace faultchain::kernels {

namespace {

constexpr KernelTable kScalar{scalar::popcount, scalar::and_popcount, scalar::and3_popcount};
#if defined(FAULTCHAIN_HAVE_AVX2)
constexpr KernelTable kAvx2{avx2::popcount, avx2::and_popcount, avx2::and3_popcount};
#endif
#if defined(FAULTCHAIN_HAVE_NEON)
constexpr KernelTable kNeon{neon::popcount, neon::and_popcount, neon::and3_popcount};
#endif

Backend resolve() noexcept {
    if (const char* forced = std::getenv("FAULTCHAIN_KERNELS")) {
        const std::string_view name(forced);
        for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
            if (name == backend_name(b) && backend_available(b)) {
                return b;
            }
        }
    }
    if (backend_available(Backend::Avx2)) {
        return Backend::Avx2;
    }
    if (backend_available(Backend::Neon)) {
        return Backend::Neon;
    }
    return Backend::Scalar;
}

const KernelTable& active_table() noexcept {
    static const KernelTable& t = table(active_backend());
    return t;
}

}  // namespace

std::string_view backend_name(Backend backend) noexcept {
    switch (backend) {
        case Backend::Scalar:
            return "scalar";
        case Backend::Avx2:
            return "avx2";
        case Backend::Neon:
            return "neon";
    }
    return "unknown";
}

bool backend_available(Backend backend) noexcept {
    switch (backend) {
        case Backend::Scalar:
            return true;
        case Backend::Avx2:
#if defined(FAULTCHAIN_HAVE_AVX2)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
            return false;
#endif
        case Backend::Neon:
#if defined(FAULTCHAIN_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend active_backend() noexcept {
    static const Backend chosen = resolve();
    return chosen;
}

const KernelTable& table(Backend backend) noexcept {
    switch (backend) {
#if defined(FAULTCHAIN_HAVE_AVX2)
        case Backend::Avx2:
            return kAvx2;
#endif
#if defined(FAULTCHAIN_HAVE_NEON)
        case Backend::Neon:
            return kNeon;
#endif
        default:
            return kScalar;
    }
}

std::size_t popcount(WordSpan a) noexcept { return active_table().popcount(a); }

std::size_t and_popcount(WordSpan a, WordSpan b) noexcept { return active_table().and_popcount(a, b); }

std::size_t and3_popcount(WordSpan a, WordSpan b, WordSpan c) noexcept {
    return active_table().and3_popcount(a, b, c);
}

}  // namespace faultchain::kernels
