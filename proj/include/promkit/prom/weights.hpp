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
#include <utility>
#include <variant>
#include <vector>

#include "promkit/bitkit.hpp"
#include "promkit/errors.hpp"
#include "promkit/readout.hpp"

namespace promkit {

/// Eigenvalues with magnitude at or below this are treated as singular.
inline constexpr double DEFAULT_LAMBDA_MIN = 1e-9;

enum class WeightStructure { General, Layered, Tensored, Uniform };

inline const char *structure_name(WeightStructure s) {
    switch (s) {
        case WeightStructure::General:
            return "general";
        case WeightStructure::Layered:
            return "layered";
        case WeightStructure::Tensored:
            return "tensored";
        case WeightStructure::Uniform:
            return "uniform";
    }
    return "unknown";
}

/// Quasiprobability weights over one block of consecutive mask bits.
struct WeightFactor {
    int num_bits = 0;
    std::vector<double> alpha;
    double xi = 1;
    std::vector<int8_t> signs;
    AliasSampler sampler;
};

/// A mask f together with sgn(α_f).
struct SignedMask {
    uint64_t mask = 0;
    int sign = 1;
};

/// Solves Σ_f α_f q_{s⊕f} = δ_{s0} for one block: α = fwht(1/fwht(q)) / 2^m.
inline WeightFactor solve_factor(const SyndromeDistribution &q, double lambda_min = DEFAULT_LAMBDA_MIN, int layer = -1) {
    EigenSpectrum spectrum = eigenvalues(q);
    std::vector<double> &inv = spectrum.lambda;
    for (size_t k = 0; k < inv.size(); k++) {
        if (!(std::abs(inv[k]) > lambda_min)) {
            throw SingularChannel(k, inv[k], layer);
        }
        inv[k] = 1 / inv[k];
    }
    fwht(inv);
    WeightFactor out;
    out.num_bits = q.num_bits();
    out.alpha = std::move(inv);
    const double scale = 1.0 / static_cast<double>(out.alpha.size());
    double xi = 0;
    for (double &a : out.alpha) {
        a *= scale;
        xi += std::abs(a);
    }
    out.xi = xi;
    out.signs.resize(out.alpha.size());
    std::vector<double> p(out.alpha.size());
    for (size_t f = 0; f < p.size(); f++) {
        out.signs[f] = out.alpha[f] < 0 ? -1 : 1;
        p[f] = std::abs(out.alpha[f]) / xi;
    }
    out.sampler = AliasSampler(p);
    return out;
}

/// Closed form [1-r, -r]/(1-2r) for a single flip rate.
inline WeightFactor tensored_factor(double r) {
    check_flip_rate(r);
    WeightFactor out;
    out.num_bits = 1;
    const double denom = 1 - 2 * r;
    out.alpha = {(1 - r) / denom, -r / denom};
    out.xi = 1 / denom;
    out.signs = {1, static_cast<int8_t>(r > 0 ? -1 : 1)};
    out.sampler = AliasSampler(std::vector<double>{1 - r, r});
    return out;
}

/// PROM weights, stored as independent factors so structured channels never expand during sampling.
class MitigationWeights {
   public:
    MitigationWeights() = default;

    /// layout[i] names the factor occupying block i of the mask, blocks ordered left to right.
    MitigationWeights(WeightStructure structure, std::vector<WeightFactor> factors, std::vector<int> layout)
        : structure_(structure), factors_(std::move(factors)), layout_(std::move(layout)) {
        for (int idx : layout_) {
            if (idx < 0 || idx >= static_cast<int>(factors_.size())) {
                throw std::invalid_argument("weight layout refers to a missing factor");
            }
            num_bits_ += factors_[idx].num_bits;
            xi_ *= factors_[idx].xi;
        }
        if (num_bits_ > MAX_BITS) {
            throw std::invalid_argument("mask longer than 62 bits");
        }
    }

    WeightStructure structure() const {
        return structure_;
    }

    int num_bits() const {
        return num_bits_;
    }

    /// ‖α‖₁.
    double xi() const {
        return xi_;
    }

    const std::vector<WeightFactor> &factors() const {
        return factors_;
    }

    const std::vector<int> &layout() const {
        return layout_;
    }

    /// α_f as a product over blocks.
    double alpha(uint64_t f) const {
        double out = 1;
        int shift = num_bits_;
        for (int idx : layout_) {
            const auto &factor = factors_[idx];
            shift -= factor.num_bits;
            out *= factor.alpha[(f >> shift) & ((uint64_t{1} << factor.num_bits) - 1)];
        }
        return out;
    }

    /// Full 2^m weight vector. Throws SizeCapExceeded above materialization_cap().
    std::vector<double> expanded_alpha() const {
        require_within_cap(num_bits_, materialization_cap(), "expanded weight vector");
        std::vector<double> out{1.0};
        for (int idx : layout_) {
            const auto &a = factors_[idx].alpha;
            std::vector<double> next(out.size() * a.size());
            for (size_t i = 0; i < out.size(); i++) {
                for (size_t j = 0; j < a.size(); j++) {
                    next[i * a.size() + j] = out[i] * a[j];
                }
            }
            out = std::move(next);
        }
        return out;
    }

    /// Draws f with probability |α_f|/ξ, one alias draw per block.
    SignedMask draw(Rng &rng) const {
        SignedMask out;
        for (int idx : layout_) {
            const auto &factor = factors_[idx];
            uint64_t part = factor.sampler.draw(rng);
            out.mask = (out.mask << factor.num_bits) | part;
            out.sign *= factor.signs[part];
        }
        return out;
    }

   private:
    WeightStructure structure_ = WeightStructure::General;
    std::vector<WeightFactor> factors_;
    std::vector<int> layout_;
    int num_bits_ = 0;
    double xi_ = 1;
};

inline std::pair<BitString, int> sample_mask(const MitigationWeights &w, Rng &rng) {
    SignedMask d = w.draw(rng);
    return {BitString(d.mask, w.num_bits()), d.sign};
}

inline MitigationWeights solve_weights_general(const SyndromeDistribution &q, double lambda_min = DEFAULT_LAMBDA_MIN) {
    require_within_cap(q.num_bits(), materialization_cap(), "general weight solve");
    if (q.num_bits() == 0) {
        return MitigationWeights(WeightStructure::General, {}, {});
    }
    return MitigationWeights(WeightStructure::General, {solve_factor(q, lambda_min)}, {0});
}

inline MitigationWeights solve_weights_tensored(std::span<const double> rates) {
    std::vector<WeightFactor> factors;
    std::vector<int> layout;
    for (double r : rates) {
        layout.push_back(static_cast<int>(factors.size()));
        factors.push_back(tensored_factor(r));
    }
    return MitigationWeights(WeightStructure::Tensored, std::move(factors), std::move(layout));
}

inline MitigationWeights solve_weights_uniform(double rate, int count) {
    if (count < 0) {
        throw std::invalid_argument("uniform weight count must be non-negative");
    }
    if (count == 0) {
        return MitigationWeights(WeightStructure::Uniform, {}, {});
    }
    return MitigationWeights(WeightStructure::Uniform, {tensored_factor(rate)}, std::vector<int>(count, 0));
}

/// One general solve per layer. SingularChannel carries the layer index.
inline MitigationWeights solve_weights_layered(
    std::span<const SyndromeDistribution> parts, double lambda_min = DEFAULT_LAMBDA_MIN) {
    std::vector<WeightFactor> factors;
    std::vector<int> layout;
    for (size_t l = 0; l < parts.size(); l++) {
        if (parts[l].num_bits() == 0) {
            throw std::invalid_argument("layered weights: layer " + std::to_string(l) + " is empty");
        }
        layout.push_back(static_cast<int>(l));
        factors.push_back(solve_factor(parts[l], lambda_min, static_cast<int>(l)));
    }
    return MitigationWeights(WeightStructure::Layered, std::move(factors), std::move(layout));
}

/// Weights matching the structure of the model.
inline MitigationWeights solve_weights(const ReadoutModel &model, double lambda_min = DEFAULT_LAMBDA_MIN) {
    validate(model);
    return std::visit(
        [&](const auto &v) -> MitigationWeights {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GeneralModel>) {
                return solve_weights_general(v.q, lambda_min);
            } else if constexpr (std::is_same_v<T, LayerTensoredModel>) {
                return solve_weights_layered(v.layers, lambda_min);
            } else if constexpr (std::is_same_v<T, FullyTensoredModel>) {
                return solve_weights_tensored(v.rates);
            } else {
                return solve_weights_uniform(v.rate, v.count);
            }
        },
        model);
}

}  // namespace promkit
