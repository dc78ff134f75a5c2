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

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "promkit/bitkit.hpp"
#include "promkit/simulator/gate.hpp"
#include "promkit/simulator/observable.hpp"
#include "promkit/simulator/state_vector.hpp"

namespace promkit {

enum class Consensus { Majority, All };

/// Gates applied unconditionally, then a joint measurement, then the table entry for the outcome.
///
/// The table is indexed by the (reported, masked) outcome with measured[0] as
/// the most significant bit and must hold exactly 2^m entries.
struct FeedforwardLayer {
    GateList pre;
    std::vector<int> measured;
    std::vector<GateList> table;
    int repetitions = 1;
    Consensus consensus = Consensus::Majority;

    int num_bits() const {
        return static_cast<int>(measured.size());
    }
};

/// Fills a table by calling `entry` on every outcome index.
inline std::vector<GateList> make_table(int m, const std::function<GateList(uint64_t)> &entry) {
    std::vector<GateList> out;
    out.reserve(size_t{1} << m);
    for (uint64_t s = 0; s < (uint64_t{1} << m); s++) {
        out.push_back(entry(s));
    }
    return out;
}

/// Prep gates, feedforward layers, post gates, terminal observables.
struct DynamicCircuit {
    int num_qubits = 0;
    GateList prep;
    std::vector<FeedforwardLayer> layers;
    GateList post;
    std::vector<Observable> observables;

    /// Total mid-circuit measurement count m (repetitions not counted).
    int measurement_count() const {
        int m = 0;
        for (const auto &layer : layers) {
            m += layer.num_bits();
        }
        return m;
    }

    std::vector<int> layer_sizes() const {
        std::vector<int> out;
        for (const auto &layer : layers) {
            out.push_back(layer.num_bits());
        }
        return out;
    }

    /// Index of each layer's first bit within the concatenated outcome string.
    std::vector<int> layer_offsets() const {
        std::vector<int> out;
        int offset = 0;
        for (const auto &layer : layers) {
            out.push_back(offset);
            offset += layer.num_bits();
        }
        return out;
    }

    void validate() const {
        if (num_qubits < 1 || num_qubits > MAX_SIMULATED_QUBITS) {
            throw std::invalid_argument("circuit qubit count must be in [1, 26]");
        }
        check_gates(prep, "prep");
        check_gates(post, "post");
        for (size_t l = 0; l < layers.size(); l++) {
            const auto &layer = layers[l];
            std::string where = "layer " + std::to_string(l);
            check_gates(layer.pre, where + " pre");
            if (layer.measured.empty()) {
                throw std::invalid_argument(where + " measures no qubits");
            }
            uint64_t seen = 0;
            for (int q : layer.measured) {
                if (q < 0 || q >= num_qubits) {
                    throw std::invalid_argument(where + " measures out-of-range qubit " + std::to_string(q));
                }
                if ((seen >> q) & 1) {
                    throw std::invalid_argument(where + " measures qubit " + std::to_string(q) + " twice");
                }
                seen |= uint64_t{1} << q;
            }
            if (layer.table.size() != (size_t{1} << layer.measured.size())) {
                throw std::invalid_argument(
                    where + " feedforward table has " + std::to_string(layer.table.size()) + " entries, expected " +
                    std::to_string(size_t{1} << layer.measured.size()));
            }
            for (size_t s = 0; s < layer.table.size(); s++) {
                check_gates(layer.table[s], where + " table entry " + std::to_string(s));
            }
            if (layer.repetitions < 1) {
                throw std::invalid_argument(where + " repetition count must be positive");
            }
            if (layer.consensus == Consensus::Majority && layer.repetitions % 2 == 0) {
                throw std::invalid_argument(where + " majority vote needs an odd repetition count");
            }
        }
        if (measurement_count() > MAX_BITS) {
            throw std::invalid_argument("circuit has more than 62 mid-circuit measurements");
        }
        for (const auto &obs : observables) {
            validate_observable(obs, num_qubits);
        }
    }

   private:
    void check_gates(const GateList &gates, const std::string &where) const {
        for (const auto &g : gates) {
            if (g.target < 0 || g.target >= num_qubits) {
                throw std::invalid_argument(where + ": gate target " + std::to_string(g.target) + " out of range");
            }
            if (g.is_two_qubit()) {
                if (g.control < 0 || g.control >= num_qubits || g.control == g.target) {
                    throw std::invalid_argument(where + ": invalid CX control");
                }
            }
        }
    }
};

}  // namespace promkit
