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

#include <optional>
#include <variant>
#include <vector>

#include "promkit/bitkit.hpp"
#include "promkit/readout.hpp"

namespace promkit {

struct NoNoise {};

/// reported = true ⊕ e with e drawn from a symmetrized model.
struct SyndromeMode {
    ReadoutModel model;
};

/// reported drawn column-wise from a raw confusion matrix, one per layer.
struct AsymmetricMode {
    std::vector<ConfusionMatrix> per_layer;
};

using NoiseMode = std::variant<NoNoise, SyndromeMode, AsymmetricMode>;

/// How readout errors are injected on the classical record.
struct NoiseInjector {
    NoiseMode mode = NoNoise{};

    /// Conjugate each mid-circuit measurement with a random X string and undo it classically.
    bool bfa = true;

    /// Test mode: use this syndrome on every shot instead of sampling.
    std::optional<BitString> forced_syndrome;

    /// Per-qubit flip rates on terminal readout; empty means noiseless terminal readout.
    std::vector<double> terminal_rates;

    static NoiseInjector noiseless() {
        return NoiseInjector{};
    }

    static NoiseInjector syndrome(ReadoutModel model) {
        NoiseInjector out;
        out.mode = SyndromeMode{std::move(model)};
        return out;
    }

    static NoiseInjector asymmetric(std::vector<ConfusionMatrix> per_layer, bool bfa) {
        NoiseInjector out;
        out.mode = AsymmetricMode{std::move(per_layer)};
        out.bfa = bfa;
        return out;
    }
};

}  // namespace promkit
