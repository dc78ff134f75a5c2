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

#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "promkit/bitkit.hpp"
#include "promkit/readout.hpp"
#include "promkit/simulator/circuit.hpp"
#include "promkit/simulator/noise.hpp"
#include "promkit/simulator/observable.hpp"
#include "promkit/simulator/state_vector.hpp"

namespace promkit {

/// One observable inside a measurement group.
struct ObservableSlot {
    size_t observable = 0;
    /// Positions of the observable's support within the group's measured qubits; first is most significant.
    std::vector<int> positions;
    /// Support bits within the group's terminal outcome.
    uint64_t support_mask = 0;
    /// Pauli sign; the value is sign·(-1)^{wt(support bits)} when `values` is empty.
    int sign = 1;
    /// Explicit single-shot value for each outcome on the support, if not a plain parity.
    std::vector<double> values;

    double value(uint64_t terminal_bits, int k) const {
        if (values.empty()) {
            return (std::popcount(terminal_bits & support_mask) & 1) ? -sign : sign;
        }
        uint64_t idx = 0;
        for (int pos : positions) {
            idx = (idx << 1) | ((terminal_bits >> (k - 1 - pos)) & 1);
        }
        return values[idx];
    }

    /// Materializes the parity rule as a table.
    void expand_values() {
        if (!values.empty()) {
            return;
        }
        values.resize(size_t{1} << positions.size());
        for (uint64_t idx = 0; idx < values.size(); idx++) {
            values[idx] = (std::popcount(idx) & 1) ? -sign : sign;
        }
    }
};

/// Observables that share one terminal basis setting (qubit-wise commuting).
struct MeasurementGroup {
    std::vector<char> basis;
    std::vector<int> qubits;
    GateList rotation;
    std::vector<ObservableSlot> slots;
};

/// Greedy first-fit grouping of the circuit's observables by per-qubit basis.
inline std::vector<MeasurementGroup> group_observables(const DynamicCircuit &circuit) {
    const int n = circuit.num_qubits;
    std::vector<MeasurementGroup> groups;
    for (size_t b = 0; b < circuit.observables.size(); b++) {
        const auto &obs = circuit.observables[b];
        MeasurementGroup *home = nullptr;
        for (auto &g : groups) {
            bool fits = true;
            for (int q = 0; q < n && fits; q++) {
                char c = basis_letter(obs, q);
                fits = c == 0 || g.basis[q] == 0 || g.basis[q] == c;
            }
            if (fits) {
                home = &g;
                break;
            }
        }
        if (home == nullptr) {
            groups.push_back(MeasurementGroup{std::vector<char>(n, 0), {}, {}, {}});
            home = &groups.back();
        }
        for (int q = 0; q < n; q++) {
            if (char c = basis_letter(obs, q)) {
                home->basis[q] = c;
            }
        }
        home->slots.push_back(ObservableSlot{b, {}, 0, 1, {}});
    }
    for (auto &g : groups) {
        for (int q = 0; q < n; q++) {
            if (g.basis[q] != 0) {
                g.qubits.push_back(q);
                for (const auto &gate : basis_change_gates(g.basis[q], q)) {
                    g.rotation.push_back(gate);
                }
            }
        }
        for (auto &slot : g.slots) {
            const auto &obs = circuit.observables[slot.observable];
            for (size_t pos = 0; pos < g.qubits.size(); pos++) {
                if (basis_letter(obs, g.qubits[pos]) != 0) {
                    slot.positions.push_back(static_cast<int>(pos));
                }
            }
            const int k = static_cast<int>(g.qubits.size());
            for (int pos : slot.positions) {
                slot.support_mask |= uint64_t{1} << (k - 1 - pos);
            }
            if (auto *p = std::get_if<PauliObservable>(&obs.op)) {
                slot.sign = p->sign;
            } else {
                slot.values.assign(size_t{1} << slot.positions.size(), 0.0);
                slot.values[0] = 1;
            }
        }
    }
    return groups;
}

/// Replaces value tables v by Q⁻¹v for independent terminal flips, so the mean of the
/// reweighted values over noisy outcomes equals the noiseless expectation.
inline void apply_terminal_inversion(MeasurementGroup &group, const std::vector<double> &rates) {
    for (auto &slot : group.slots) {
        slot.expand_values();
        const int k = static_cast<int>(slot.positions.size());
        for (int j = 0; j < k; j++) {
            double r = rates[group.qubits[slot.positions[j]]];
            if (r == 0) {
                continue;
            }
            const double d = 1 - 2 * r;
            const uint64_t bit = uint64_t{1} << (k - 1 - j);
            for (uint64_t idx = 0; idx < slot.values.size(); idx++) {
                if (idx & bit) {
                    continue;
                }
                double a = slot.values[idx];
                double b = slot.values[idx | bit];
                slot.values[idx] = ((1 - r) * a - r * b) / d;
                slot.values[idx | bit] = ((1 - r) * b - r * a) / d;
            }
        }
    }
}

struct ShotOutcome {
    /// False when an all-agree repetition layer saw disagreement; later fields are then partial.
    bool accepted = true;
    /// Concatenated true outcomes s of all layers.
    uint64_t true_bits = 0;
    /// Concatenated reported outcomes (after consensus, before masking).
    uint64_t reported_bits = 0;
    /// Concatenated twirl strings t of the first repetition of each layer (zero without bfa).
    uint64_t twirl_bits = 0;
    /// Terminal outcome on the group's measured qubits, first qubit most significant.
    uint64_t terminal_bits = 0;
    /// Single-shot value of each observable in the group, in slot order.
    std::vector<double> values;
};

/// Executes single shots of a circuit under a noise model. Immutable after construction;
/// concurrent calls to run are safe given distinct generators.
class ShotRunner {
   public:
    static constexpr size_t NO_GROUP = std::numeric_limits<size_t>::max();

    ShotRunner(DynamicCircuit circuit, NoiseInjector noise, bool terminal_rem = false)
        : circuit_(std::move(circuit)), noise_(std::move(noise)) {
        circuit_.validate();
        const int m = circuit_.measurement_count();
        offsets_ = circuit_.layer_offsets();
        prep_state_ = StateVector(circuit_.num_qubits);
        prep_state_.apply(circuit_.prep);

        if (!noise_.terminal_rates.empty()) {
            if (static_cast<int>(noise_.terminal_rates.size()) != circuit_.num_qubits) {
                throw std::invalid_argument("terminal noise needs one flip rate per qubit");
            }
            for (double r : noise_.terminal_rates) {
                check_flip_rate(r);
            }
        }
        if (noise_.forced_syndrome && noise_.forced_syndrome->size() != m) {
            throw std::invalid_argument("forced syndrome length does not match measurement count");
        }
        bool repeated = false;
        for (const auto &layer : circuit_.layers) {
            repeated |= layer.repetitions > 1;
        }
        if (auto *sm = std::get_if<SyndromeMode>(&noise_.mode)) {
            if (!noise_.bfa) {
                throw std::invalid_argument("syndrome-mode noise is already symmetrized and requires bfa");
            }
            if (measurement_count(sm->model) != m) {
                throw std::invalid_argument(
                    "noise model covers " + std::to_string(measurement_count(sm->model)) +
                    " measurements but the circuit has " + std::to_string(m));
            }
            joint_ = SyndromeSampler(sm->model);
            if (repeated) {
                for (size_t l = 0; l < circuit_.layers.size(); l++) {
                    std::vector<int> keep(circuit_.layers[l].num_bits());
                    std::iota(keep.begin(), keep.end(), offsets_[l]);
                    layer_marginals_.emplace_back(marginal(sm->model, keep).probabilities());
                }
            }
        } else if (auto *am = std::get_if<AsymmetricMode>(&noise_.mode)) {
            if (am->per_layer.size() != circuit_.layers.size()) {
                throw std::invalid_argument("asymmetric noise needs one confusion matrix per layer");
            }
            for (size_t l = 0; l < circuit_.layers.size(); l++) {
                const auto &mat = am->per_layer[l];
                if (mat.num_bits() != circuit_.layers[l].num_bits()) {
                    throw std::invalid_argument("confusion matrix size does not match layer " + std::to_string(l));
                }
                std::vector<AliasSampler> cols;
                for (size_t s = 0; s < mat.dim(); s++) {
                    cols.emplace_back(mat.column(s));
                }
                columns_.push_back(std::move(cols));
            }
        }
        groups_ = group_observables(circuit_);
        if (terminal_rem && !noise_.terminal_rates.empty()) {
            for (auto &g : groups_) {
                apply_terminal_inversion(g, noise_.terminal_rates);
            }
        }
    }

    const DynamicCircuit &circuit() const {
        return circuit_;
    }

    const NoiseInjector &noise() const {
        return noise_;
    }

    const std::vector<MeasurementGroup> &groups() const {
        return groups_;
    }

    int num_bits() const {
        return circuit_.measurement_count();
    }

    /// One shot with feedforward lookups at reported ⊕ mask.
    ShotOutcome run(size_t group, uint64_t mask, Rng &rng) const {
        const int m = num_bits();
        if (m < 64 && (mask >> m) != 0) {
            throw std::invalid_argument("mask has bits beyond the measurement count");
        }
        ShotOutcome out;
        StateVector state = prep_state_;
        const bool syndrome_mode = std::holds_alternative<SyndromeMode>(noise_.mode);
        const auto *asym = std::get_if<AsymmetricMode>(&noise_.mode);
        const bool noisy = syndrome_mode || asym != nullptr || noise_.forced_syndrome.has_value();
        uint64_t joint = 0;
        if (noise_.forced_syndrome) {
            joint = noise_.forced_syndrome->index();
        } else if (syndrome_mode) {
            joint = joint_.draw(rng);
        }

        for (size_t l = 0; l < circuit_.layers.size(); l++) {
            const auto &layer = circuit_.layers[l];
            const int ml = layer.num_bits();
            const int shift = m - offsets_[l] - ml;
            const uint64_t lmask = (uint64_t{1} << ml) - 1;
            state.apply(layer.pre);
            const uint64_t s = measure_subset(state, layer.measured, rng).outcome;

            uint64_t votes[64] = {};
            uint64_t first = 0;
            bool agree = true;
            for (int rep = 0; rep < layer.repetitions; rep++) {
                uint64_t reported = s;
                // X^t before and after the measurement: the device sees s ⊕ t and the record is flipped back.
                uint64_t t = noisy && noise_.bfa ? rng.below(uint64_t{1} << ml) : 0;
                if (noise_.forced_syndrome || syndrome_mode) {
                    // A symmetrized channel is invariant under the twirl, so t cancels.
                    uint64_t e = (rep == 0 || noise_.forced_syndrome) ? (joint >> shift) & lmask
                                                                       : layer_marginals_[l].draw(rng);
                    reported = s ^ e;
                } else if (asym != nullptr) {
                    reported = columns_[l][s ^ t].draw(rng) ^ t;
                }
                if (rep == 0) {
                    first = reported;
                    out.twirl_bits = (out.twirl_bits << ml) | t;
                } else {
                    agree &= reported == first;
                }
                for (int j = 0; j < ml; j++) {
                    votes[j] += (reported >> j) & 1;
                }
            }
            uint64_t consensus = first;
            if (layer.repetitions > 1) {
                if (layer.consensus == Consensus::All) {
                    if (!agree) {
                        out.accepted = false;
                        return out;
                    }
                } else {
                    consensus = 0;
                    for (int j = 0; j < ml; j++) {
                        if (2 * votes[j] > static_cast<uint64_t>(layer.repetitions)) {
                            consensus |= uint64_t{1} << j;
                        }
                    }
                }
            }
            out.true_bits = (out.true_bits << ml) | s;
            out.reported_bits = (out.reported_bits << ml) | consensus;
            state.apply(layer.table[consensus ^ ((mask >> shift) & lmask)]);
        }
        state.apply(circuit_.post);
        if (group == NO_GROUP) {
            return out;
        }
        const auto &g = groups_.at(group);
        state.apply(g.rotation);
        const uint64_t basis_state = sample_basis_state(state, rng);
        const int k = static_cast<int>(g.qubits.size());
        uint64_t bits = StateVector::outcome_of(basis_state, g.qubits);
        if (!noise_.terminal_rates.empty()) {
            for (int j = 0; j < k; j++) {
                if (rng.bernoulli(noise_.terminal_rates[g.qubits[j]])) {
                    bits ^= uint64_t{1} << (k - 1 - j);
                }
            }
        }
        out.terminal_bits = bits;
        out.values.reserve(g.slots.size());
        for (const auto &slot : g.slots) {
            out.values.push_back(slot.value(bits, k));
        }
        return out;
    }

   private:
    DynamicCircuit circuit_;
    NoiseInjector noise_;
    StateVector prep_state_;
    std::vector<int> offsets_;
    SyndromeSampler joint_;
    std::vector<AliasSampler> layer_marginals_;
    std::vector<std::vector<AliasSampler>> columns_;
    std::vector<MeasurementGroup> groups_;
};

/// Convenience single-shot entry point; builds a runner per call.
inline ShotOutcome run_shot(
    const DynamicCircuit &circuit, const NoiseInjector &noise, const BitString &mask, Rng &rng, size_t group = 0) {
    ShotRunner runner(circuit, noise);
    if (mask.size() != runner.num_bits()) {
        throw std::invalid_argument("mask length does not match measurement count");
    }
    if (runner.groups().empty()) {
        group = ShotRunner::NO_GROUP;
    }
    return runner.run(group, mask.index(), rng);
}

}  // namespace promkit
