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

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace faultchain {

/// Fixed-length boolean vector packed into 64-bit words. Bits past size()
/// are always zero so popcount kernels never need a tail mask.
class BitColumn {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    BitColumn() = default;
    explicit BitColumn(std::size_t size, bool value = false);
    BitColumn(std::initializer_list<int> bits);

    static BitColumn from_bytes(std::span<const std::uint8_t> bits);

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    bool test(std::size_t i) const noexcept {
        return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
    }
    void set(std::size_t i, bool value = true) noexcept {
        const Word mask = Word{1} << (i % kWordBits);
        if (value) {
            words_[i / kWordBits] |= mask;
        } else {
            words_[i / kWordBits] &= ~mask;
        }
    }

    std::size_t count() const noexcept;
    bool all() const noexcept { return count() == size_; }
    bool none() const noexcept { return count() == 0; }

    /// Appends one sample; used by row-wise builders.
    void push_back(bool value);

    std::span<const Word> words() const noexcept { return words_; }

    std::vector<std::uint8_t> to_bytes() const;

    BitColumn& operator&=(const BitColumn& other);
    BitColumn& operator|=(const BitColumn& other);
    BitColumn operator~() const;

    friend bool operator==(const BitColumn&, const BitColumn&) = default;

private:
    void clear_tail() noexcept;

    std::size_t size_ = 0;
    std::vector<Word> words_;
};

inline BitColumn operator&(BitColumn a, const BitColumn& b) { return a &= b; }
inline BitColumn operator|(BitColumn a, const BitColumn& b) { return a |= b; }

}  // namespace faultchain
