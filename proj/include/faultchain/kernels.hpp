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

#pragma once

// Popcount kernels over bit-packed sample columns. Every joint histogram the
// information measures and spectrum counts need reduces to these three
// reductions. A scalar reference is always built; AVX2 (x86-64) and NEON
// (aarch64) variants are selected at runtime when the CPU supports them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace faultchain::kernels {

using Word = std::uint64_t;
using WordSpan = std::span<const Word>;

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend backend) noexcept;

/// True when the variant is compiled in and the running CPU supports it.
bool backend_available(Backend backend) noexcept;

/// Backend chosen at first use: best available unless overridden by
/// FAULTCHAIN_KERNELS=scalar|avx2|neon in the environment.
Backend active_backend() noexcept;

struct KernelTable {
    std::size_t (*popcount)(WordSpan a);
    std::size_t (*and_popcount)(WordSpan a, WordSpan b);
    std::size_t (*and3_popcount)(WordSpan a, WordSpan b, WordSpan c);
};

/// Function table for a specific backend. Precondition: backend_available().
const KernelTable& table(Backend backend) noexcept;

// Dispatching entry points. Spans must have equal length.
std::size_t popcount(WordSpan a) noexcept;
std::size_t and_popcount(WordSpan a, WordSpan b) noexcept;
std::size_t and3_popcount(WordSpan a, WordSpan b, WordSpan c) noexcept;

namespace scalar {
std::size_t popcount(WordSpan a);
std::size_t and_popcount(WordSpan a, WordSpan b);
std::size_t and3_popcount(WordSpan a, WordSpan b, WordSpan c);
}  // namespace scalar

#if defined(FAULTCHAIN_HAVE_AVX2)
namespace avx2 {
std::size_t popcount(WordSpan a);
std::size_t and_popcount(WordSpan a, WordSpan b);
std::size_t and3_popcount(WordSpan a, WordSpan b, WordSpan c);
}  // namespace avx2
#endif

#if defined(FAULTCHAIN_HAVE_NEON)
namespace neon {
std::size_t popcount(WordSpan a);
std::size_t and_popcount(WordSpan a, WordSpan b);
std::size_t and3_popcount(WordSpan a, WordSpan b, WordSpan c);
}  // namespace neon
#endif

}  // namespace faultchain::kernels
