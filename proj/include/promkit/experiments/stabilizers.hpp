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

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "promkit/bitkit.hpp"
#include "promkit/simulator/observable.hpp"

namespace promkit {

/// Largest register for which the full stabilizer group is enumerated.
inline constexpr int MAX_STABILIZER_QUBITS = 16;

/// The 2^n stabilizers of (|0..0> + |1..1>)/sqrt(2).
///
/// First Z^(x) for every even-weight x, then (-1)^{wt(x)/2} X^(1⊕x) Y^(x) for
/// every even-weight x, each in increasing order of x (bit 0 = qubit 0).
inline std::vector<Observable> ghz_stabilizers(int n) {
    if (n < 1 || n > MAX_STABILIZER_QUBITS) {
        throw std::invalid_argument("GHZ stabilizers are enumerated for 1 <= n <= 16");
    }
    std::vector<Observable> out;
    out.reserve(size_t{1} << n);
    for (uint64_t x = 0; x < (uint64_t{1} << n); x++) {
        if (std::popcount(x) % 2 == 0) {
            std::string letters(static_cast<size_t>(n), 'I');
            for (int q = 0; q < n; q++) {
                if (index_bit(x, n, q)) {
                    letters[q] = 'Z';
                }
            }
            out.push_back(Observable::pauli(letters));
        }
    }
    for (uint64_t x = 0; x < (uint64_t{1} << n); x++) {
        int w = std::popcount(x);
        if (w % 2 == 0) {
            std::string letters(static_cast<size_t>(n), 'X');
            for (int q = 0; q < n; q++) {
                if (index_bit(x, n, q)) {
                    letters[q] = 'Y';
                }
            }
            out.push_back(Observable::pauli(((w / 2) % 2 ? "-" : "") + letters));
        }
    }
    return out;
}

struct FidelityReport {
    double raw = 0;
    /// raw clamped to [0, 1].
    double clipped = 0;
};

/// F = 2^{-n} Σ_P <P> over the GHZ stabilizers.
inline FidelityReport ghz_fidelity(int n, std::span<const double> expectations) {
    if (n < 1 || n > MAX_STABILIZER_QUBITS || expectations.size() != (size_t{1} << n)) {
        throw std::invalid_argument("ghz_fidelity needs exactly one value per stabilizer");
    }
    double total = 0;
    for (double v : expectations) {
        total += v;
    }
    FidelityReport out;
    out.raw = total / static_cast<double>(expectations.size());
    out.clipped = std::clamp(out.raw, 0.0, 1.0);
    return out;
}

}  // namespace promkit
