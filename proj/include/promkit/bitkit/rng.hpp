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

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace promkit {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from a parent seed and a path of stream labels.
///
/// Streams with different paths are statistically independent, and the result
/// depends only on (seed, path), never on which thread asks for it.
inline uint64_t derive_seed(uint64_t seed, std::initializer_list<uint64_t> path) {
    uint64_t h = splitmix64(seed);
    for (uint64_t label : path) {
        h = splitmix64(h ^ splitmix64(label + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator.
class Rng {
   public:
    using result_type = uint64_t;

    explicit Rng(uint64_t seed = 0) {
        uint64_t x = seed;
        for (auto &word : state_) {
            x = splitmix64(x);
            word = x;
        }
    }

    /// Generator for shot k of the run seeded by `seed`.
    static Rng for_stream(uint64_t seed, std::initializer_list<uint64_t> path) {
        return Rng(derive_seed(seed, path));
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<uint64_t>::max();
    }

    result_type operator()() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be positive.
    uint64_t below(uint64_t n) {
        __extension__ using u128 = unsigned __int128;
        return static_cast<uint64_t>((static_cast<u128>((*this)()) * n) >> 64);
    }

    bool bernoulli(double p) {
        return uniform() < p;
    }

   private:
    static uint64_t rotl(uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<uint64_t, 4> state_{};
};

}  // namespace promkit
