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

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "promkit/bitkit/rng.hpp"

namespace promkit {

/// Tolerance on the unit-sum check for probability vectors.
inline constexpr double NORMALIZATION_TOLERANCE = 1e-9;

/// Checks that p is a probability vector up to NORMALIZATION_TOLERANCE and returns it renormalized.
inline std::vector<double> normalized_distribution(std::span<const double> p) {
    if (p.empty()) {
        throw std::invalid_argument("distribution is empty");
    }
    double total = 0;
    for (size_t i = 0; i < p.size(); i++) {
        if (!std::isfinite(p[i])) {
            throw std::invalid_argument("distribution entry " + std::to_string(i) + " is not finite");
        }
        if (p[i] < 0) {
            throw std::invalid_argument("distribution entry " + std::to_string(i) + " is negative");
        }
        total += p[i];
    }
    if (total == 0) {
        throw std::invalid_argument("distribution sums to zero");
    }
    if (std::abs(total - 1) > NORMALIZATION_TOLERANCE) {
        throw std::invalid_argument("distribution sums to " + std::to_string(total) + ", not 1");
    }
    std::vector<double> out(p.begin(), p.end());
    for (double &x : out) {
        x /= total;
    }
    return out;
}

/// Walker/Vose alias table: O(K) build, O(1) draw.
class AliasSampler {
   public:
    AliasSampler() = default;

    explicit AliasSampler(std::span<const double> weights) : source_(normalized_distribution(weights)) {
        const size_t k = source_.size();
        threshold_.assign(k, 1.0);
        alias_.resize(k);
        std::vector<double> scaled(k);
        std::vector<uint32_t> small;
        std::vector<uint32_t> large;
        for (size_t i = 0; i < k; i++) {
            alias_[i] = static_cast<uint32_t>(i);
            scaled[i] = source_[i] * static_cast<double>(k);
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<uint32_t>(i));
        }
        while (!small.empty() && !large.empty()) {
            uint32_t s = small.back();
            small.pop_back();
            uint32_t l = large.back();
            threshold_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        // Leftovers on either list carry mass 1 up to round-off.
        for (uint32_t i : large) {
            threshold_[i] = 1.0;
        }
        for (uint32_t i : small) {
            threshold_[i] = source_[i] > 0 ? 1.0 : 0.0;
        }
    }

    size_t size() const {
        return source_.size();
    }

    /// The normalized distribution the table was built from.
    const std::vector<double> &source() const {
        return source_;
    }

    /// Probability of drawing i as encoded by the table.
    double implied_probability(uint64_t i) const {
        double total = 0;
        for (size_t c = 0; c < threshold_.size(); c++) {
            if (c == i) {
                total += threshold_[c];
            }
            if (alias_[c] == i) {
                total += 1.0 - threshold_[c];
            }
        }
        return total / static_cast<double>(threshold_.size());
    }

    uint64_t draw(Rng &rng) const {
        uint64_t column = rng.below(source_.size());
        return rng.uniform() < threshold_[column] ? column : alias_[column];
    }

   private:
    std::vector<double> source_;
    std::vector<double> threshold_;
    std::vector<uint32_t> alias_;
};

}  // namespace promkit
