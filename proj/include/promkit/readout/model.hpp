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
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "promkit/bitkit.hpp"
#include "promkit/errors.hpp"
#include "promkit/readout/syndrome.hpp"

namespace promkit {

/// Arbitrary correlated syndrome distribution over all m measurements.
struct GeneralModel {
    SyndromeDistribution q;
};

/// Independent syndrome distribution per layer, in layer order.
struct LayerTensoredModel {
    std::vector<SyndromeDistribution> layers;
};

/// Independent bit flips, one rate per measurement.
struct FullyTensoredModel {
    std::vector<double> rates;
};

/// The same flip rate on each of `count` measurements.
struct UniformModel {
    double rate = 0;
    int count = 0;
};

using ReadoutModel = std::variant<GeneralModel, LayerTensoredModel, FullyTensoredModel, UniformModel>;

inline void check_flip_rate(double r) {
    if (!(r >= 0 && r < 0.5)) {
        throw std::invalid_argument("flip rate must lie in [0, 0.5), got " + std::to_string(r));
    }
}

/// Throws if the model violates its variant's invariants.
inline void validate(const ReadoutModel &model) {
    if (auto *ft = std::get_if<FullyTensoredModel>(&model)) {
        for (double r : ft->rates) {
            check_flip_rate(r);
        }
    } else if (auto *u = std::get_if<UniformModel>(&model)) {
        check_flip_rate(u->rate);
        if (u->count < 0) {
            throw std::invalid_argument("uniform model count must be non-negative");
        }
    } else if (auto *lt = std::get_if<LayerTensoredModel>(&model)) {
        for (const auto &part : lt->layers) {
            if (part.num_bits() == 0) {
                throw std::invalid_argument("layer-tensored model has an empty layer");
            }
        }
    }
}

/// Independent blocks whose concatenation is the full model, left to right.
inline std::vector<SyndromeDistribution> model_blocks(const ReadoutModel &model) {
    validate(model);
    return std::visit(
        [](const auto &v) -> std::vector<SyndromeDistribution> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GeneralModel>) {
                if (v.q.num_bits() == 0) {
                    return {};
                }
                return {v.q};
            } else if constexpr (std::is_same_v<T, LayerTensoredModel>) {
                return v.layers;
            } else if constexpr (std::is_same_v<T, FullyTensoredModel>) {
                std::vector<SyndromeDistribution> out;
                for (double r : v.rates) {
                    out.push_back(SyndromeDistribution::bit_flip(r));
                }
                return out;
            } else {
                return std::vector<SyndromeDistribution>(
                    static_cast<size_t>(v.count), SyndromeDistribution::bit_flip(v.rate));
            }
        },
        model);
}

inline int measurement_count(const ReadoutModel &model) {
    return std::visit(
        [](const auto &v) -> int {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GeneralModel>) {
                return v.q.num_bits();
            } else if constexpr (std::is_same_v<T, LayerTensoredModel>) {
                int m = 0;
                for (const auto &part : v.layers) {
                    m += part.num_bits();
                }
                return m;
            } else if constexpr (std::is_same_v<T, FullyTensoredModel>) {
                return static_cast<int>(v.rates.size());
            } else {
                return v.count;
            }
        },
        model);
}

/// 1 - q_0, computed from the factors without expansion.
inline double total_error_probability(const ReadoutModel &model) {
    double q0 = 1;
    for (const auto &block : model_blocks(model)) {
        q0 *= block[0];
    }
    return 1 - q0;
}

/// Full tensor-product q. Throws SizeCapExceeded above materialization_cap().
inline SyndromeDistribution expand(const ReadoutModel &model) {
    require_within_cap(measurement_count(model), materialization_cap(), "expanded syndrome distribution");
    SyndromeDistribution out;
    for (const auto &block : model_blocks(model)) {
        out = tensor_product(out, block);
    }
    return out;
}

/// Marginal over the measurement indices in `keep`, which must be strictly increasing.
///
/// Blocks untouched by `keep` are never expanded.
inline SyndromeDistribution marginal(const ReadoutModel &model, std::span<const int> keep) {
    if (keep.empty()) {
        throw std::invalid_argument("marginal: keep set is empty");
    }
    if (!std::is_sorted(keep.begin(), keep.end()) || std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
        throw std::invalid_argument("marginal: keep indices must be strictly increasing");
    }
    int m = measurement_count(model);
    if (keep.front() < 0 || keep.back() >= m) {
        throw std::invalid_argument("marginal: index out of range");
    }
    SyndromeDistribution out;
    int offset = 0;
    size_t cursor = 0;
    for (const auto &block : model_blocks(model)) {
        std::vector<int> local;
        while (cursor < keep.size() && keep[cursor] < offset + block.num_bits()) {
            local.push_back(keep[cursor] - offset);
            cursor++;
        }
        if (!local.empty()) {
            out = tensor_product(out, static_cast<int>(local.size()) == block.num_bits() ? block : marginalize(block, local));
        }
        offset += block.num_bits();
    }
    return out;
}

/// Draws full-length syndromes from a model, one alias table per independent block.
class SyndromeSampler {
   public:
    SyndromeSampler() = default;

    explicit SyndromeSampler(const ReadoutModel &model) {
        for (const auto &block : model_blocks(model)) {
            bits_.push_back(block.num_bits());
            samplers_.emplace_back(block.probabilities());
        }
    }

    uint64_t draw(Rng &rng) const {
        uint64_t out = 0;
        for (size_t i = 0; i < samplers_.size(); i++) {
            out = (out << bits_[i]) | samplers_[i].draw(rng);
        }
        return out;
    }

   private:
    std::vector<int> bits_;
    std::vector<AliasSampler> samplers_;
};

}  // namespace promkit
