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

#include "faultchain/bitcolumn.hpp"

#include <algorithm>

#include "faultchain/kernels.hpp"

namespace faultchain {

namespace {
std::size_t words_for(std::size_t bits) { return (bits + BitColumn::kWordBits - 1) / BitColumn::kWordBits; }
}  // namespace

BitColumn::BitColumn(std::size_t size, bool value)
    : size_(size), words_(words_for(size), value ? ~Word{0} : Word{0}) {
    clear_tail();
}

BitColumn::BitColumn(std::initializer_list<int> bits) : size_(bits.size()), words_(words_for(bits.size()), 0) {
    std::size_t i = 0;
    for (int b : bits) {
        set(i++, b != 0);
    }
}

BitColumn BitColumn::from_bytes(std::span<const std::uint8_t> bits) {
    BitColumn col(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        col.set(i, bits[i] != 0);
    }
    return col;
}

std::size_t BitColumn::count() const noexcept { return kernels::popcount(words_); }

void BitColumn::push_back(bool value) {
    if (size_ % kWordBits == 0) {
        words_.push_back(0);
    }
    ++size_;
    set(size_ - 1, value);
}

std::vector<std::uint8_t> BitColumn::to_bytes() const {
    std::vector<std::uint8_t> out(size_);
    for (std::size_t i = 0; i < size_; ++i) {
        out[i] = test(i) ? 1 : 0;
    }
    return out;
}

BitColumn& BitColumn::operator&=(const BitColumn& other) {
    const std::size_t n = std::min(words_.size(), other.words_.size());
    for (std::size_t i = 0; i < n; ++i) {
        words_[i] &= other.words_[i];
    }
    std::fill(words_.begin() + static_cast<std::ptrdiff_t>(n), words_.end(), Word{0});
    return *this;
}

BitColumn& BitColumn::operator|=(const BitColumn& other) {
    const std::size_t n = std::min(words_.size(), other.words_.size());
    for (std::size_t i = 0; i < n; ++i) {
        words_[i] |= other.words_[i];
    }
    clear_tail();
    return *this;
}

BitColumn BitColumn::operator~() const {
    BitColumn out = *this;
    for (auto& w : out.words_) {
        w = ~w;
    }
    out.clear_tail();
    return out;
}

void BitColumn::clear_tail() noexcept {
    const std::size_t rem = size_ % kWordBits;
    if (rem != 0 && !words_.empty()) {
        words_.back() &= (Word{1} << rem) - 1;
    }
}

}  // namespace faultchain
