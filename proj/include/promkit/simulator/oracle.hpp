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
#include <stdexcept>
#include <string>
#include <vector>

#include "promkit/errors.hpp"
#include "promkit/prom/weights.hpp"
#include "promkit/readout.hpp"
#include "promkit/simulator/circuit.hpp"
#include "promkit/simulator/observable.hpp"
#include "promkit/simulator/state_vector.hpp"

namespace promkit {

struct OracleLimits {
    int max_qubits = 12;
    int max_measurements = 6;
};

/// T[b][s][s'] = <O_b> on the unnormalized branch W_{ss'}|psi>: true outcomes s, feedforward chosen by s'.
class TrajectoryTensor {
   public:
    TrajectoryTensor() = default;

    TrajectoryTensor(int num_bits, size_t num_observables)
        : num_bits_(num_bits),
          dim_(size_t{1} << num_bits),
          num_observables_(num_observables),
          values_(num_observables * dim_ * dim_, 0.0),
          branch_norms_(dim_ * dim_, 0.0) {
    }

    int num_bits() const {
        return num_bits_;
    }

    size_t dim() const {
        return dim_;
    }

    size_t num_observables() const {
        return num_observables_;
    }

    double operator()(size_t b, uint64_t s, uint64_t sp) const {
        return values_[(b * dim_ + s) * dim_ + sp];
    }

    double &at(size_t b, uint64_t s, uint64_t sp) {
        return values_[(b * dim_ + s) * dim_ + sp];
    }

    /// ‖W_{ss'}|psi>‖²: probability of true outcomes s when feedforward follows s'.
    double branch_norm(uint64_t s, uint64_t sp) const {
        return branch_norms_[s * dim_ + sp];
    }

    double &branch_norm_at(uint64_t s, uint64_t sp) {
        return branch_norms_[s * dim_ + sp];
    }

    /// Ideal expectation tr T_b.
    double trace(size_t b) const {
        double total = 0;
        for (uint64_t s = 0; s < dim_; s++) {
            total += (*this)(b, s, s);
        }
        return total;
    }

    std::vector<double> ideal() const {
        std::vector<double> out(num_observables_);
        for (size_t b = 0; b < num_observables_; b++) {
            out[b] = trace(b);
        }
        return out;
    }

   private:
    int num_bits_ = 0;
    size_t dim_ = 1;
    size_t num_observables_ = 0;
    std::vector<double> values_;
    std::vector<double> branch_norms_;
};

namespace detail {

inline void enumerate_branches(
    const DynamicCircuit &circuit,
    size_t layer,
    const StateVector &state,
    uint64_t s_prefix,
    uint64_t sp_prefix,
    TrajectoryTensor &out) {
    if (layer == circuit.layers.size()) {
        StateVector fin = state;
        fin.apply(circuit.post);
        out.branch_norm_at(s_prefix, sp_prefix) = fin.norm_squared();
        for (size_t b = 0; b < circuit.observables.size(); b++) {
            out.at(b, s_prefix, sp_prefix) = expectation(fin, circuit.observables[b]);
        }
        return;
    }
    const auto &l = circuit.layers[layer];
    const int ml = l.num_bits();
    StateVector before = state;
    before.apply(l.pre);
    for (uint64_t s = 0; s < (uint64_t{1} << ml); s++) {
        StateVector projected = before;
        projected.project(l.measured, s);
        for (uint64_t sp = 0; sp < (uint64_t{1} << ml); sp++) {
            StateVector branch = projected;
            branch.apply(l.table[sp]);
            enumerate_branches(circuit, layer + 1, branch, (s_prefix << ml) | s, (sp_prefix << ml) | sp, out);
        }
    }
}

}  // namespace detail

/// Exact trajectory tensor by enumerating every (s, s') branch pair.
///
/// Repetition counts are ignored: repeated QND measurements leave the branch states unchanged.
inline TrajectoryTensor exact_trajectory_tensor(const DynamicCircuit &circuit, OracleLimits limits = {}) {
    circuit.validate();
    if (circuit.num_qubits > limits.max_qubits) {
        throw SizeCapExceeded(
            "oracle supports at most " + std::to_string(limits.max_qubits) + " qubits, circuit has " +
            std::to_string(circuit.num_qubits));
    }
    const int m = circuit.measurement_count();
    if (m > limits.max_measurements) {
        throw SizeCapExceeded(
            "oracle supports at most " + std::to_string(limits.max_measurements) +
            " mid-circuit measurements, circuit has " + std::to_string(m));
    }
    TrajectoryTensor out(m, circuit.observables.size());
    StateVector state(circuit.num_qubits);
    state.apply(circuit.prep);
    detail::enumerate_branches(circuit, 0, state, 0, 0, out);
    return out;
}

inline void check_channel(const TrajectoryTensor &t, const SyndromeDistribution &q) {
    if (q.num_bits() != t.num_bits()) {
        throw std::invalid_argument("channel and trajectory tensor have different measurement counts");
    }
}

/// <O_b^(f)> = Σ_s Σ_s' q_{s⊕s'} T_{b,s,s'⊕f}.
inline std::vector<double> exact_masked_expectation(
    const TrajectoryTensor &t, const SyndromeDistribution &q, uint64_t f) {
    check_channel(t, q);
    if (f >= t.dim()) {
        throw std::invalid_argument("mask out of range");
    }
    std::vector<double> out(t.num_observables(), 0.0);
    for (size_t b = 0; b < t.num_observables(); b++) {
        double total = 0;
        for (uint64_t s = 0; s < t.dim(); s++) {
            for (uint64_t sp = 0; sp < t.dim(); sp++) {
                total += q[s ^ sp] * t(b, s, sp ^ f);
            }
        }
        out[b] = total;
    }
    return out;
}

/// Σ_f α_f <O_b^(f)> with the masked expectations evaluated on channel q.
inline std::vector<double> exact_mitigated_expectation(
    const TrajectoryTensor &t, const SyndromeDistribution &q, const MitigationWeights &weights) {
    check_channel(t, q);
    if (weights.num_bits() != t.num_bits()) {
        throw std::invalid_argument("weights and trajectory tensor have different measurement counts");
    }
    std::vector<double> out(t.num_observables(), 0.0);
    for (uint64_t f = 0; f < t.dim(); f++) {
        double a = weights.alpha(f);
        if (a == 0) {
            continue;
        }
        auto masked = exact_masked_expectation(t, q, f);
        for (size_t b = 0; b < out.size(); b++) {
            out[b] += a * masked[b];
        }
    }
    return out;
}

}  // namespace promkit
