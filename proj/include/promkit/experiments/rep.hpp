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

#include <stdexcept>

#include "promkit/simulator/circuit.hpp"

namespace promkit {

/// Repeat every mid-circuit measurement r times and take a consensus.
struct RepStrategy {
    int r = 1;
    Consensus mode = Consensus::Majority;
};

inline DynamicCircuit apply_rep_strategy(DynamicCircuit circuit, const RepStrategy &strategy) {
    if (strategy.r < 1) {
        throw std::invalid_argument("repetition count must be positive");
    }
    if (strategy.mode == Consensus::Majority && strategy.r % 2 == 0) {
        throw std::invalid_argument("majority vote needs an odd repetition count");
    }
    if (strategy.r == 1) {
        return circuit;
    }
    for (auto &layer : circuit.layers) {
        layer.repetitions = strategy.r;
        layer.consensus = strategy.mode;
    }
    return circuit;
}

}  // namespace promkit
