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

#include <boost/math/distributions/chi_squared.hpp>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "promkit/readout.hpp"
#include "promkit/simulator/circuit.hpp"
#include "promkit/simulator/noise.hpp"
#include "promkit/simulator/shot_runner.hpp"

namespace promkit {

struct ChiSquareResult {
    double statistic = 0;
    int dof = 0;
    double p_value = 1;
};

/// Two-sample chi-square homogeneity test on histograms over the same bins.
inline ChiSquareResult chi_square_homogeneity(std::span<const uint64_t> a, std::span<const uint64_t> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("histograms have different bin counts");
    }
    double na = 0, nb = 0;
    for (size_t i = 0; i < a.size(); i++) {
        na += static_cast<double>(a[i]);
        nb += static_cast<double>(b[i]);
    }
    if (na == 0 || nb == 0) {
        throw std::invalid_argument("chi-square test needs non-empty samples");
    }
    ChiSquareResult out;
    int bins = 0;
    for (size_t i = 0; i < a.size(); i++) {
        double total = static_cast<double>(a[i] + b[i]);
        if (total == 0) {
            continue;
        }
        bins++;
        double ea = total * na / (na + nb);
        double eb = total * nb / (na + nb);
        out.statistic += (a[i] - ea) * (a[i] - ea) / ea + (b[i] - eb) * (b[i] - eb) / eb;
    }
    out.dof = bins - 1;
    if (out.dof <= 0) {
        out.p_value = 1;
        return out;
    }
    boost::math::chi_squared dist(out.dof);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
    return out;
}

/// Histogram of concatenated reported mid-circuit outcomes over `shots` shots.
inline std::vector<uint64_t> reported_histogram(
    const DynamicCircuit &circuit, const NoiseInjector &noise, uint64_t shots, uint64_t seed) {
    ShotRunner runner(circuit, noise);
    require_within_cap(runner.num_bits(), materialization_cap(), "reported-outcome histogram");
    std::vector<uint64_t> hist(size_t{1} << runner.num_bits(), 0);
    for (uint64_t k = 0; k < shots; k++) {
        Rng rng = Rng::for_stream(seed, {k});
        hist[runner.run(ShotRunner::NO_GROUP, 0, rng).reported_bits]++;
    }
    return hist;
}

/// Compares AsymmetricMode(M) reported outcomes against SyndromeMode(symmetrize(M)).
///
/// With bfa on the two should be indistinguishable.
inline ChiSquareResult bfa_equivalence_check(
    const DynamicCircuit &circuit,
    const std::vector<ConfusionMatrix> &per_layer,
    uint64_t shots,
    uint64_t seed = 0,
    bool bfa = true) {
    std::vector<SyndromeDistribution> parts;
    for (const auto &m : per_layer) {
        parts.push_back(symmetrize(m));
    }
    auto asym = reported_histogram(circuit, NoiseInjector::asymmetric(per_layer, bfa), shots, derive_seed(seed, {0}));
    auto sym = reported_histogram(
        circuit, NoiseInjector::syndrome(LayerTensoredModel{parts}), shots, derive_seed(seed, {1}));
    return chi_square_homogeneity(asym, sym);
}

}  // namespace promkit
