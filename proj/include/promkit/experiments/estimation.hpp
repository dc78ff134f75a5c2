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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "promkit/prom.hpp"
#include "promkit/simulator.hpp"

namespace promkit {

/// Shots per work unit. Units are merged in index order, so results do not depend on the worker count.
inline constexpr uint64_t SHOTS_PER_BLOCK = 2048;

struct EstimationOptions {
    /// Shots per measurement group (each terminal basis setting).
    uint64_t shots = 10000;
    uint64_t seed = 0;
    uint64_t trial = 0;
    int workers = 1;
    /// Undo independent terminal flips by reweighting single-shot values.
    bool terminal_rem = false;
};

/// Linear combination Σ_b c_b <O_b> estimated with its own per-shot accumulator.
struct LinearMetric {
    std::string name;
    std::vector<double> coefficients;
};

struct ObservableEstimate {
    std::string name;
    Estimate estimate;
    uint64_t shots_accepted = 0;
    uint64_t shots_discarded = 0;
    /// Sample variance of the rescaled single-shot values ξ·o.
    double single_shot_variance = 0;
};

struct MetricEstimate {
    std::string name;
    Estimate estimate;
};

struct EstimationResult {
    double xi = 1;
    uint64_t shots_per_group = 0;
    std::vector<ObservableEstimate> observables;
    std::vector<MetricEstimate> metrics;
};

namespace detail {

struct GroupTally {
    std::vector<EstimatorAccumulator> observables;
    std::vector<EstimatorAccumulator> metrics;
    uint64_t discarded = 0;

    GroupTally(size_t num_obs, size_t num_metrics, double xi)
        : observables(num_obs, EstimatorAccumulator(xi)), metrics(num_metrics, EstimatorAccumulator(xi)) {
    }

    void merge(const GroupTally &other) {
        for (size_t i = 0; i < observables.size(); i++) {
            observables[i].merge(other.observables[i]);
        }
        for (size_t i = 0; i < metrics.size(); i++) {
            metrics[i].merge(other.metrics[i]);
        }
        discarded += other.discarded;
    }
};

inline Estimate finalize_or_nan(const EstimatorAccumulator &acc) {
    if (acc.count() == 0) {
        double nan = std::numeric_limits<double>::quiet_NaN();
        return Estimate{nan, nan, 0};
    }
    return acc.finalize();
}

}  // namespace detail

/// The sampling estimator: per shot draw a signed mask, run the circuit with
/// feedforward at reported ⊕ mask, and accumulate sign·value for every observable.
///
/// Shot k of group g in trial t uses the generator derived from (seed, t, g, k).
inline EstimationResult estimate_observables(
    const ShotRunner &runner,
    const MitigationWeights *weights,
    const EstimationOptions &opts,
    std::span<const LinearMetric> metrics = {}) {
    const auto &circuit = runner.circuit();
    if (weights != nullptr && weights->num_bits() != circuit.measurement_count()) {
        throw std::invalid_argument(
            "weights cover " + std::to_string(weights->num_bits()) + " measurements but the circuit has " +
            std::to_string(circuit.measurement_count()));
    }
    for (const auto &metric : metrics) {
        if (metric.coefficients.size() != circuit.observables.size()) {
            throw std::invalid_argument("metric '" + metric.name + "' needs one coefficient per observable");
        }
    }
    if (opts.shots == 0) {
        throw std::invalid_argument("shot count must be positive");
    }
    const double xi = weights != nullptr ? weights->xi() : 1.0;
    EstimationResult result;
    result.xi = xi;
    result.shots_per_group = opts.shots;
    result.observables.resize(circuit.observables.size());
    for (size_t b = 0; b < circuit.observables.size(); b++) {
        result.observables[b].name = circuit.observables[b].name;
    }
    std::vector<double> metric_values(metrics.size(), 0.0);
    std::vector<double> metric_variances(metrics.size(), 0.0);
    std::vector<uint64_t> metric_shots(metrics.size(), 0);

    const auto &groups = runner.groups();
    const uint64_t blocks = (opts.shots + SHOTS_PER_BLOCK - 1) / SHOTS_PER_BLOCK;
    for (size_t g = 0; g < groups.size(); g++) {
        const auto &group = groups[g];
        std::vector<std::vector<double>> coeffs(metrics.size());
        for (size_t i = 0; i < metrics.size(); i++) {
            for (const auto &slot : group.slots) {
                coeffs[i].push_back(metrics[i].coefficients[slot.observable]);
            }
        }
        std::vector<detail::GroupTally> partial(blocks, detail::GroupTally(group.slots.size(), metrics.size(), xi));
        std::atomic<uint64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&]() {
            try {
                for (uint64_t blk = next++; blk < blocks; blk = next++) {
                    auto &tally = partial[blk];
                    const uint64_t end = std::min(opts.shots, (blk + 1) * SHOTS_PER_BLOCK);
                    for (uint64_t k = blk * SHOTS_PER_BLOCK; k < end; k++) {
                        Rng rng = Rng::for_stream(opts.seed, {opts.trial, g, k});
                        SignedMask draw = weights != nullptr ? weights->draw(rng) : SignedMask{};
                        ShotOutcome shot = runner.run(g, draw.mask, rng);
                        if (!shot.accepted) {
                            tally.discarded++;
                            continue;
                        }
                        for (size_t i = 0; i < shot.values.size(); i++) {
                            tally.observables[i].add(shot.values[i], draw.sign);
                        }
                        for (size_t i = 0; i < coeffs.size(); i++) {
                            double v = 0;
                            for (size_t j = 0; j < shot.values.size(); j++) {
                                v += coeffs[i][j] * shot.values[j];
                            }
                            tally.metrics[i].add(v, draw.sign);
                        }
                    }
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        };
        const int workers = static_cast<int>(std::min<uint64_t>(std::max(opts.workers, 1), blocks));
        if (workers == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; w++) {
                pool.emplace_back(work);
            }
            for (auto &t : pool) {
                t.join();
            }
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
        detail::GroupTally total(group.slots.size(), metrics.size(), xi);
        for (const auto &p : partial) {
            total.merge(p);
        }
        for (size_t i = 0; i < group.slots.size(); i++) {
            auto &obs = result.observables[group.slots[i].observable];
            obs.estimate = detail::finalize_or_nan(total.observables[i]);
            obs.shots_accepted = total.observables[i].count();
            obs.shots_discarded = total.discarded;
            obs.single_shot_variance = total.observables[i].single_shot_variance();
        }
        for (size_t i = 0; i < metrics.size(); i++) {
            bool touches = std::any_of(coeffs[i].begin(), coeffs[i].end(), [](double c) { return c != 0; });
            if (!touches) {
                continue;
            }
            Estimate e = detail::finalize_or_nan(total.metrics[i]);
            metric_values[i] += e.value;
            metric_variances[i] += e.std_error * e.std_error;
            metric_shots[i] += e.shots;
        }
    }
    for (size_t i = 0; i < metrics.size(); i++) {
        result.metrics.push_back(
            MetricEstimate{metrics[i].name, Estimate{metric_values[i], std::sqrt(metric_variances[i]), metric_shots[i]}});
    }
    return result;
}

inline EstimationResult estimate_observables(
    const DynamicCircuit &circuit,
    const NoiseInjector &noise,
    const MitigationWeights *weights,
    const EstimationOptions &opts,
    std::span<const LinearMetric> metrics = {}) {
    ShotRunner runner(circuit, noise, opts.terminal_rem);
    return estimate_observables(runner, weights, opts, metrics);
}

}  // namespace promkit
