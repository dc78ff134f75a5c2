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
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "promkit/simulator/gate.hpp"
#include "promkit/simulator/state_vector.hpp"

namespace promkit {

/// ±P for a Pauli string P. letters[q] acts on qubit q.
struct PauliObservable {
    int sign = 1;
    std::string letters;

    /// Accepts an optional leading '+' or '-' followed by letters from IXYZ.
    static PauliObservable parse(std::string_view text) {
        PauliObservable out;
        if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
            out.sign = text[0] == '-' ? -1 : 1;
            text.remove_prefix(1);
        }
        if (text.empty()) {
            throw std::invalid_argument("Pauli string has no letters");
        }
        for (char c : text) {
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
                throw std::invalid_argument("Pauli string contains '" + std::string(1, c) + "'");
            }
        }
        out.letters = std::string(text);
        return out;
    }

    std::string str() const {
        return (sign < 0 ? "-" : "") + letters;
    }

    bool operator==(const PauliObservable &other) const = default;
};

/// |0...0><0...0| on a subset of qubits.
struct ZeroProjector {
    std::vector<int> qubits;

    bool operator==(const ZeroProjector &other) const = default;
};

struct Observable {
    std::string name;
    std::variant<PauliObservable, ZeroProjector> op;

    static Observable pauli(std::string_view text) {
        PauliObservable p = PauliObservable::parse(text);
        return Observable{p.str(), p};
    }

    static Observable zero_projector(std::string name, std::vector<int> qubits) {
        return Observable{std::move(name), ZeroProjector{std::move(qubits)}};
    }
};

/// Measurement basis letter ('X', 'Y' or 'Z') the observable needs on qubit q, or 0 if q is outside its support.
inline char basis_letter(const Observable &obs, int q) {
    if (auto *p = std::get_if<PauliObservable>(&obs.op)) {
        char c = p->letters[q];
        return c == 'I' ? 0 : c;
    }
    for (int x : std::get<ZeroProjector>(obs.op).qubits) {
        if (x == q) {
            return 'Z';
        }
    }
    return 0;
}

/// Qubits the observable acts on, ascending.
inline std::vector<int> observable_support(const Observable &obs, int num_qubits) {
    std::vector<int> out;
    for (int q = 0; q < num_qubits; q++) {
        if (basis_letter(obs, q) != 0) {
            out.push_back(q);
        }
    }
    return out;
}

inline void validate_observable(const Observable &obs, int num_qubits) {
    if (auto *p = std::get_if<PauliObservable>(&obs.op)) {
        if (static_cast<int>(p->letters.size()) != num_qubits) {
            throw std::invalid_argument(
                "observable '" + obs.name + "' has " + std::to_string(p->letters.size()) + " letters for " +
                std::to_string(num_qubits) + " qubits");
        }
        if (p->sign != 1 && p->sign != -1) {
            throw std::invalid_argument("Pauli sign must be +1 or -1");
        }
        return;
    }
    const auto &qs = std::get<ZeroProjector>(obs.op).qubits;
    if (qs.empty()) {
        throw std::invalid_argument("projector '" + obs.name + "' has no qubits");
    }
    uint64_t seen = 0;
    for (int q : qs) {
        if (q < 0 || q >= num_qubits) {
            throw std::invalid_argument("projector '" + obs.name + "' refers to qubit " + std::to_string(q));
        }
        if ((seen >> q) & 1) {
            throw std::invalid_argument("projector '" + obs.name + "' repeats a qubit");
        }
        seen |= uint64_t{1} << q;
    }
}

/// Rotation taking the eigenbasis of `letter` to the computational basis.
inline GateList basis_change_gates(char letter, int q) {
    switch (letter) {
        case 'X':
            return {Gate::single(GateKind::H, q)};
        case 'Y':
            return {Gate::single(GateKind::Sdg, q), Gate::single(GateKind::H, q)};
        default:
            return {};
    }
}

/// <psi|O|psi> evaluated directly on the amplitudes (no normalization applied).
inline double expectation(const StateVector &state, const Observable &obs) {
    auto amps = state.amplitudes();
    if (auto *p = std::get_if<PauliObservable>(&obs.op)) {
        uint64_t xmask = 0, zmask = 0;
        int num_y = 0;
        for (size_t q = 0; q < p->letters.size(); q++) {
            char c = p->letters[q];
            if (c == 'X' || c == 'Y') {
                xmask |= uint64_t{1} << q;
            }
            if (c == 'Z' || c == 'Y') {
                zmask |= uint64_t{1} << q;
            }
            num_y += c == 'Y';
        }
        // P|i> = sign * i^{#Y} * (-1)^{|i & zmask|} |i ^ xmask>
        static const Amplitude powers_of_i[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        Amplitude global = powers_of_i[num_y % 4] * static_cast<double>(p->sign);
        Amplitude total = 0;
        for (uint64_t i = 0; i < amps.size(); i++) {
            Amplitude term = std::conj(amps[i ^ xmask]) * amps[i];
            total += (std::popcount(i & zmask) & 1) ? -term : term;
        }
        return (global * total).real();
    }
    uint64_t mask = 0;
    for (int q : std::get<ZeroProjector>(obs.op).qubits) {
        mask |= uint64_t{1} << q;
    }
    double total = 0;
    for (uint64_t i = 0; i < amps.size(); i++) {
        if ((i & mask) == 0) {
            total += std::norm(amps[i]);
        }
    }
    return total;
}

}  // namespace promkit
