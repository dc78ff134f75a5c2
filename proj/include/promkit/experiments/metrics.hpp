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
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "promkit/simulator/circuit.hpp"
#include "promkit/simulator/observable.hpp"

namespace promkit {

/// Root-sum-square of the component deviations.
inline double euclidean_error(const std::array<double, 3> &measured, const std::array<double, 3> &ideal) {
    double total = 0;
    for (int i = 0; i < 3; i++) {
        double d = measured[i] - ideal[i];
        total += d * d;
    }
    return std::sqrt(total);
}

/// How to measure a Pauli observable in the computational basis.
struct PauliBasisChange {
    GateList gates;
    std::vector<int> support;
    int sign = 1;

    /// sign·(-1)^{wt(bits)}, with bits[j] the outcome on support[j].
    int value(std::span<const uint8_t> bits) const {
        int parity = 0;
        for (uint8_t b : bits) {
            parity ^= b & 1;
        }
        return parity ? -sign : sign;
    }
};

inline PauliBasisChange pauli_basis_change(const PauliObservable &p) {
    PauliBasisChange out;
    out.sign = p.sign;
    for (int q = 0; q < static_cast<int>(p.letters.size()); q++) {
        char c = p.letters[q];
        if (c == 'I') {
            continue;
        }
        out.support.push_back(q);
        for (const auto &g : basis_change_gates(c, q)) {
            out.gates.push_back(g);
        }
    }
    return out;
}

inline int count_cx(const GateList &gates) {
    return static_cast<int>(std::count_if(gates.begin(), gates.end(), [](const Gate &g) { return g.is_two_qubit(); }));
}

/// CX gates executed on any single trajectory: prep, pre, post, and the largest table entry per layer.
inline int cx_count(const DynamicCircuit &c) {
    int total = count_cx(c.prep) + count_cx(c.post);
    for (const auto &layer : c.layers) {
        total += count_cx(layer.pre);
        int widest = 0;
        for (const auto &entry : layer.table) {
            widest = std::max(widest, count_cx(entry));
        }
        total += widest;
    }
    return total;
}

/// ASAP depth counting only CX and measurement layers.
///
/// Single-qubit gates take no time, but a qubit touched by any feedforward
/// entry waits for the whole layer's measurement to finish.
inline int circuit_depth(const DynamicCircuit &c) {
    std::vector<int> ready(static_cast<size_t>(c.num_qubits), 0);
    auto run = [](std::vector<int> &r, const GateList &gates) {
        for (const auto &g : gates) {
            if (g.is_two_qubit()) {
                int t = std::max(r[g.control], r[g.target]) + 1;
                r[g.control] = t;
                r[g.target] = t;
            }
        }
    };
    run(ready, c.prep);
    for (const auto &layer : c.layers) {
        run(ready, layer.pre);
        int done = 0;
        for (int q : layer.measured) {
            ready[q] += layer.repetitions;
            done = std::max(done, ready[q]);
        }
        for (const auto &entry : layer.table) {
            for (const auto &g : entry) {
                ready[g.target] = std::max(ready[g.target], done);
                if (g.is_two_qubit()) {
                    ready[g.control] = std::max(ready[g.control], done);
                }
            }
        }
        std::vector<int> merged = ready;
        for (const auto &entry : layer.table) {
            std::vector<int> branch = ready;
            run(branch, entry);
            for (size_t q = 0; q < merged.size(); q++) {
                merged[q] = std::max(merged[q], branch[q]);
            }
        }
        ready = merged;
    }
    run(ready, c.post);
    return ready.empty() ? 0 : *std::max_element(ready.begin(), ready.end());
}

}  // namespace promkit
