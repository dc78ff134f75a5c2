// Copyright 2026 The promkit Authors
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

#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace promkit {

/// Longest bit string whose integer index is representable exactly.
inline constexpr int MAX_BITS = 62;

/// Returns bit j (0 = leftmost) of an index interpreted as a length-m bit string.
inline bool index_bit(uint64_t index, int m, int j) {
    return (index >> (m - 1 - j)) & 1;
}

/// A fixed-length bit string.
///
/// Bit 0 is the leftmost character of the string form and the most
/// significant bit of the integer index, so concatenating layer outcomes
/// s^[1] s^[2] ... reads left to right.
class BitString {
   public:
    BitString() = default;

    BitString(uint64_t index, int length) : index_(index), length_(length) {
        if (length < 0 || length > MAX_BITS) {
            throw std::invalid_argument("BitString length must be in [0, 62], got " + std::to_string(length));
        }
        if (length < 64 && (index >> length) != 0) {
            throw std::invalid_argument("BitString index does not fit in " + std::to_string(length) + " bits");
        }
    }

    static BitString zeros(int length) {
        return BitString(0, length);
    }

    static BitString parse(std::string_view text) {
        uint64_t index = 0;
        for (char c : text) {
            if (c != '0' && c != '1') {
                throw std::invalid_argument("BitString text must contain only '0' and '1': " + std::string(text));
            }
            index = (index << 1) | static_cast<uint64_t>(c == '1');
        }
        return BitString(index, static_cast<int>(text.size()));
    }

    int size() const {
        return length_;
    }

    uint64_t index() const {
        return index_;
    }

    bool operator[](int j) const {
        if (j < 0 || j >= length_) {
            throw std::out_of_range("BitString bit index out of range");
        }
        return index_bit(index_, length_, j);
    }

    void set(int j, bool value) {
        if (j < 0 || j >= length_) {
            throw std::out_of_range("BitString bit index out of range");
        }
        uint64_t mask = uint64_t{1} << (length_ - 1 - j);
        index_ = value ? (index_ | mask) : (index_ & ~mask);
    }

    int weight() const {
        return std::popcount(index_);
    }

    std::string str() const {
        std::string out(static_cast<size_t>(length_), '0');
        for (int j = 0; j < length_; j++) {
            if (index_bit(index_, length_, j)) {
                out[j] = '1';
            }
        }
        return out;
    }

    bool operator==(const BitString &other) const = default;

   private:
    uint64_t index_ = 0;
    int length_ = 0;
};

inline void require_same_length(const BitString &a, const BitString &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(
            "BitString length mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
}

inline BitString operator^(const BitString &a, const BitString &b) {
    require_same_length(a, b);
    return BitString(a.index() ^ b.index(), a.size());
}

/// Σ_j a_j b_j mod 2.
inline bool dot_mod2(const BitString &a, const BitString &b) {
    require_same_length(a, b);
    return std::popcount(a.index() & b.index()) & 1;
}

/// Concatenates parts in order. Zero-length parts are rejected.
inline BitString concat(std::span<const BitString> parts) {
    uint64_t index = 0;
    int length = 0;
    for (const auto &part : parts) {
        if (part.size() == 0) {
            throw std::invalid_argument("concat: zero-length part");
        }
        if (length + part.size() > MAX_BITS) {
            throw std::invalid_argument("concat: total length exceeds 62 bits");
        }
        index = (index << part.size()) | part.index();
        length += part.size();
    }
    return BitString(index, length);
}

inline BitString concat(std::initializer_list<BitString> parts) {
    return concat(std::span<const BitString>(parts.begin(), parts.size()));
}

/// Inverse of concat given the part lengths.
inline std::vector<BitString> split(const BitString &whole, std::span<const int> lengths) {
    int total = 0;
    for (int len : lengths) {
        if (len <= 0) {
            throw std::invalid_argument("split: part lengths must be positive");
        }
        total += len;
    }
    if (total != whole.size()) {
        throw std::invalid_argument(
            "split: lengths sum to " + std::to_string(total) + " but string has " + std::to_string(whole.size()) +
            " bits");
    }
    std::vector<BitString> out;
    out.reserve(lengths.size());
    int remaining = whole.size();
    for (int len : lengths) {
        remaining -= len;
        uint64_t part = (whole.index() >> remaining) & ((uint64_t{1} << len) - 1);
        out.emplace_back(part, len);
    }
    return out;
}

}  // namespace promkit
