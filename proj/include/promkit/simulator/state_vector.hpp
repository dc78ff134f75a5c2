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
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "promkit/bitkit.hpp"
#include "promkit/simulator/gate.hpp"

namespace promkit {

/// Largest register the simulator will allocate.
inline constexpr int MAX_SIMULATED_QUBITS = 26;

/// Pure state on n qubits. Qubit q is bit q (least significant first) of the amplitude index.
///
/// Projections leave the state unnormalized; callers that want a normalized
/// post-measurement state use measure_subset.
class StateVector {
   public:
    StateVector() = default;

    explicit StateVector(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits < 0 || num_qubits > MAX_SIMULATED_QUBITS) {
            throw std::invalid_argument("qubit count must be in [0, 26], got " + std::to_string(num_qubits));
        }
        amps_.assign(size_t{1} << num_qubits, 0.0);
        amps_[0] = 1;
    }

    int num_qubits() const {
        return num_qubits_;
    }

    std::span<const Amplitude> amplitudes() const {
        return amps_;
    }

    std::span<Amplitude> amplitudes() {
        return amps_;
    }

    Amplitude operator[](uint64_t i) const {
        return amps_[i];
    }

    double norm_squared() const {
        double total = 0;
        for (const auto &a : amps_) {
            total += std::norm(a);
        }
        return total;
    }

    void scale(double factor) {
        for (auto &a : amps_) {
            a *= factor;
        }
    }

    void apply(const Gate &g) {
        check_qubit(g.target);
        switch (g.kind) {
            case GateKind::I:
                return;
            case GateKind::X:
                return apply_x(g.target);
            case GateKind::Z:
                return apply_phase(g.target, -1.0);
            case GateKind::S:
                return apply_phase(g.target, Amplitude(0, 1));
            case GateKind::Sdg:
                return apply_phase(g.target, Amplitude(0, -1));
            case GateKind::CX:
                check_qubit(g.control);
                if (g.control == g.target) {
                    throw std::invalid_argument("CX control and target coincide");
                }
                return apply_cx(g.control, g.target);
            default:
                return apply_matrix(g.target, g.matrix());
        }
    }

    void apply(std::span<const Gate> gates) {
        for (const auto &g : gates) {
            apply(g);
        }
    }

    void apply_matrix(int q, const Mat2 &m) {
        const uint64_t bit = uint64_t{1} << q;
        for (uint64_t i = 0; i < amps_.size(); i++) {
            if (i & bit) {
                continue;
            }
            Amplitude a = amps_[i];
            Amplitude b = amps_[i | bit];
            amps_[i] = m[0] * a + m[1] * b;
            amps_[i | bit] = m[2] * a + m[3] * b;
        }
    }

    void apply_x(int q) {
        const uint64_t bit = uint64_t{1} << q;
        for (uint64_t i = 0; i < amps_.size(); i++) {
            if (!(i & bit)) {
                std::swap(amps_[i], amps_[i | bit]);
            }
        }
    }

    void apply_phase(int q, Amplitude phase) {
        const uint64_t bit = uint64_t{1} << q;
        for (uint64_t i = 0; i < amps_.size(); i++) {
            if (i & bit) {
                amps_[i] *= phase;
            }
        }
    }

    void apply_cx(int control, int target) {
        const uint64_t c = uint64_t{1} << control;
        const uint64_t t = uint64_t{1} << target;
        for (uint64_t i = 0; i < amps_.size(); i++) {
            if ((i & c) && !(i & t)) {
                std::swap(amps_[i], amps_[i | t]);
            }
        }
    }

    /// Outcome index of basis state i on `qubits`; qubits[0] is the most significant bit.
    static uint64_t outcome_of(uint64_t i, std::span<const int> qubits) {
        uint64_t out = 0;
        for (int q : qubits) {
            out = (out << 1) | ((i >> q) & 1);
        }
        return out;
    }

    /// Born probabilities (relative to the current norm) of each outcome on `qubits`.
    std::vector<double> outcome_weights(std::span<const int> qubits) const {
        std::vector<double> w(size_t{1} << qubits.size(), 0.0);
        for (uint64_t i = 0; i < amps_.size(); i++) {
            w[outcome_of(i, qubits)] += std::norm(amps_[i]);
        }
        return w;
    }

    /// Zeroes amplitudes inconsistent with `outcome` on `qubits` and returns the remaining squared norm.
    double project(std::span<const int> qubits, uint64_t outcome) {
        double kept = 0;
        for (uint64_t i = 0; i < amps_.size(); i++) {
            if (outcome_of(i, qubits) != outcome) {
                amps_[i] = 0;
            } else {
                kept += std::norm(amps_[i]);
            }
        }
        return kept;
    }

    void check_qubit(int q) const {
        if (q < 0 || q >= num_qubits_) {
            throw std::invalid_argument(
                "qubit " + std::to_string(q) + " out of range for " + std::to_string(num_qubits_) + "-qubit state");
        }
    }

   private:
    int num_qubits_ = 0;
    std::vector<Amplitude> amps_{1.0};
};

/// Samples an index from unnormalized weights with the given total.
inline uint64_t sample_weighted(std::span<const double> weights, double total, Rng &rng) {
    double u = rng.uniform() * total;
    double acc = 0;
    uint64_t last_nonzero = 0;
    for (uint64_t i = 0; i < weights.size(); i++) {
        if (weights[i] > 0) {
            acc += weights[i];
            last_nonzero = i;
            if (u < acc) {
                return i;
            }
        }
    }
    return last_nonzero;
}

struct Measurement {
    uint64_t outcome = 0;
    double probability = 0;
};

/// Samples a joint computational-basis outcome on `qubits` and collapses the state.
///
/// The outcome index has qubits[0] as its most significant bit.
inline Measurement measure_subset(StateVector &state, std::span<const int> qubits, Rng &rng) {
    uint64_t seen = 0;
    for (int q : qubits) {
        state.check_qubit(q);
        if ((seen >> q) & 1) {
            throw std::invalid_argument("measure_subset: repeated qubit");
        }
        seen |= uint64_t{1} << q;
    }
    std::vector<double> w = state.outcome_weights(qubits);
    double total = 0;
    for (double x : w) {
        total += x;
    }
    Measurement out;
    out.outcome = sample_weighted(w, total, rng);
    if (!(w[out.outcome] > 0)) {
        throw std::logic_error("measure_subset sampled a zero-probability branch");
    }
    out.probability = w[out.outcome] / total;
    state.project(qubits, out.outcome);
    state.scale(1 / std::sqrt(w[out.outcome]));
    return out;
}

/// Samples a full basis-state index without collapsing.
inline uint64_t sample_basis_state(const StateVector &state, Rng &rng) {
    auto amps = state.amplitudes();
    double u = rng.uniform() * state.norm_squared();
    double acc = 0;
    uint64_t last_nonzero = 0;
    for (uint64_t i = 0; i < amps.size(); i++) {
        double p = std::norm(amps[i]);
        if (p > 0) {
            acc += p;
            last_nonzero = i;
            if (u < acc) {
                return i;
            }
        }
    }
    return last_nonzero;
}

}  // namespace promkit
