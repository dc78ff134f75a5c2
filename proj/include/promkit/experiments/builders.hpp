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

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "promkit/experiments/stabilizers.hpp"
#include "promkit/simulator.hpp"

namespace promkit {

/// Single-qubit Pauli observable on qubit q of an n-qubit register.
inline Observable single_qubit_pauli(char letter, int q, int n) {
    std::string letters(static_cast<size_t>(n), 'I');
    letters[q] = letter;
    return Observable{std::string(1, letter), PauliObservable{1, letters}};
}

/// Reset benchmark. Qubit 0 and n+1 are spectators; 1..n are reset mid-circuit.
///
/// `u` holds one prep gate per system qubit, or a single gate for all; targets are ignored.
inline DynamicCircuit build_reset_circuit(int n, std::vector<Gate> u = {}, Gate v = Gate::single(GateKind::H, 0)) {
    if (n < 1) {
        throw std::invalid_argument("reset circuit needs at least one system qubit");
    }
    if (u.empty()) {
        u = {Gate::single(GateKind::H, 0)};
    }
    if (u.size() != 1 && static_cast<int>(u.size()) != n) {
        throw std::invalid_argument("reset circuit needs one prep gate or one per system qubit");
    }
    for (const auto &g : u) {
        if (g.is_two_qubit()) {
            throw std::invalid_argument("reset prep gates must act on one qubit");
        }
    }
    if (v.is_two_qubit()) {
        throw std::invalid_argument("spectator prep gate must act on one qubit");
    }
    DynamicCircuit c;
    c.num_qubits = n + 2;
    const int right = n + 1;
    for (int spectator : {0, right}) {
        Gate g = v;
        g.target = spectator;
        c.prep.push_back(g);
    }
    std::vector<int> system;
    for (int i = 0; i < n; i++) {
        Gate g = u.size() == 1 ? u[0] : u[i];
        g.target = i + 1;
        c.prep.push_back(g);
        system.push_back(i + 1);
    }
    FeedforwardLayer layer;
    layer.measured = system;
    layer.table = make_table(n, [&](uint64_t s) {
        GateList flips;
        for (int j = 0; j < n; j++) {
            if (index_bit(s, n, j)) {
                flips.push_back(Gate::single(GateKind::X, system[j]));
            }
        }
        return flips;
    });
    c.layers.push_back(layer);
    for (int spectator : {0, right}) {
        Gate g = v;
        g.target = spectator;
        c.post.push_back(inverse(g));
    }
    c.observables.push_back(Observable::zero_projector("system_zero", system));
    c.observables.push_back(Observable::zero_projector("spectator_zero", {0, right}));
    return c;
}

/// GHZ fan-out on qubits [offset, offset+p): H on a root then CX outward in both directions,
/// depth ceil(p/2). For odd p the first qubit finishes one layer before the last.
inline GateList ghz_fanout(int offset, int p) {
    if (p < 1) {
        throw std::invalid_argument("fan-out needs at least one qubit");
    }
    GateList out;
    if (p % 2 == 1) {
        const int c = p / 2;
        out.push_back(Gate::single(GateKind::H, offset + c));
        if (c >= 1) {
            out.push_back(Gate::cx(offset + c, offset + c - 1));
        }
        for (int t = 2;; t++) {
            bool any = false;
            if (c - t >= 0) {
                out.push_back(Gate::cx(offset + c - t + 1, offset + c - t));
                any = true;
            }
            if (c + t - 1 <= p - 1) {
                out.push_back(Gate::cx(offset + c + t - 2, offset + c + t - 1));
                any = true;
            }
            if (!any) {
                break;
            }
        }
    } else {
        const int c = p / 2 - 1;
        out.push_back(Gate::single(GateKind::H, offset + c));
        out.push_back(Gate::cx(offset + c, offset + c + 1));
        for (int t = 2;; t++) {
            bool any = false;
            if (c - t + 1 >= 0) {
                out.push_back(Gate::cx(offset + c - t + 2, offset + c - t + 1));
                any = true;
            }
            if (c + t <= p - 1) {
                out.push_back(Gate::cx(offset + c + t - 1, offset + c + t));
                any = true;
            }
            if (!any) {
                break;
            }
        }
    }
    return out;
}

/// Dynamic GHZ preparation from b blocks of p qubits, each followed by one ancilla.
///
/// Block j occupies qubits j(p+1) .. j(p+1)+p-1 and its ancilla is j(p+1)+p. The
/// first b-1 ancillae measure the parity across neighbouring block boundaries;
/// feedforward flips later blocks by the running parity and resets the ancilla.
/// All b ancillae are then absorbed, so the output is GHZ on b(p+1) qubits.
inline DynamicCircuit build_ghz_circuit(int b, int p) {
    if (b < 2 || p < 1) {
        throw std::invalid_argument("GHZ circuit needs b >= 2 blocks of p >= 1 qubits");
    }
    const int stride = p + 1;
    auto first = [&](int j) { return j * stride; };
    auto last = [&](int j) { return j * stride + p - 1; };
    auto ancilla = [&](int j) { return j * stride + p; };

    DynamicCircuit c;
    c.num_qubits = b * stride;
    for (int j = 0; j < b; j++) {
        for (const auto &g : ghz_fanout(first(j), p)) {
            c.prep.push_back(g);
        }
    }
    for (int j = 0; j + 1 < b; j++) {
        c.prep.push_back(Gate::cx(first(j + 1), ancilla(j)));
        c.prep.push_back(Gate::cx(last(j), ancilla(j)));
    }
    FeedforwardLayer layer;
    for (int j = 0; j + 1 < b; j++) {
        layer.measured.push_back(ancilla(j));
    }
    const int m = b - 1;
    layer.table = make_table(m, [&](uint64_t s) {
        GateList gates;
        bool parity = false;
        for (int j = 0; j < m; j++) {
            bool bit = index_bit(s, m, j);
            parity ^= bit;
            if (parity) {
                for (int q = first(j + 1); q <= last(j + 1); q++) {
                    gates.push_back(Gate::single(GateKind::X, q));
                }
            }
            if (bit) {
                gates.push_back(Gate::single(GateKind::X, ancilla(j)));
            }
        }
        return gates;
    });
    c.layers.push_back(layer);
    for (int j = 0; j < b; j++) {
        c.post.push_back(Gate::cx(last(j), ancilla(j)));
    }
    c.observables = ghz_stabilizers(c.num_qubits);
    return c;
}

/// Unitary GHZ_n by bidirectional fan-out: n-1 CX, depth ceil(n/2).
inline DynamicCircuit build_unitary_ghz(int n) {
    if (n < 1) {
        throw std::invalid_argument("GHZ needs at least one qubit");
    }
    DynamicCircuit c;
    c.num_qubits = n;
    c.prep = ghz_fanout(0, n);
    c.observables = ghz_stabilizers(n);
    return c;
}

/// Gates preparing e^{-i phi_z Z} e^{-i phi_x X}|0> on qubit q.
inline GateList teleport_input(int q, double phi_x, double phi_z) {
    return {
        Gate::single(GateKind::RX, q, {2 * phi_x, 0, 0}),
        Gate::single(GateKind::RZ, q, {2 * phi_z, 0, 0}),
    };
}

/// Bloch vector (<X>, <Y>, <Z>) of the teleport input state.
inline std::array<double, 3> teleport_ideal(double phi_x, double phi_z) {
    return {
        std::sin(2 * phi_x) * std::sin(2 * phi_z),
        -std::sin(2 * phi_x) * std::cos(2 * phi_z),
        std::cos(2 * phi_x),
    };
}

/// k-stage teleportation chain on 2k+1 qubits ending on qubit 2k, with X/Y/Z observables there.
///
/// Stage l (1-based) Bell-measures qubits 2l-2 and 2l-1; the table applies X
/// for the middle bit, then Z for the input bit, to qubit 2l.
inline DynamicCircuit build_teleport_circuit(int k, double phi_x, double phi_z) {
    if (k < 1) {
        throw std::invalid_argument("teleportation needs at least one stage");
    }
    DynamicCircuit c;
    c.num_qubits = 2 * k + 1;
    c.prep = teleport_input(0, phi_x, phi_z);
    for (int l = 1; l <= k; l++) {
        c.prep.push_back(Gate::single(GateKind::H, 2 * l - 1));
        c.prep.push_back(Gate::cx(2 * l - 1, 2 * l));
    }
    for (int l = 1; l <= k; l++) {
        const int in = 2 * l - 2, mid = 2 * l - 1, out = 2 * l;
        FeedforwardLayer layer;
        layer.pre = {Gate::cx(in, mid), Gate::single(GateKind::H, in)};
        layer.measured = {in, mid};
        layer.table = make_table(2, [&](uint64_t s) {
            GateList gates;
            if (s & 1) {
                gates.push_back(Gate::single(GateKind::X, out));
            }
            if (s & 2) {
                gates.push_back(Gate::single(GateKind::Z, out));
            }
            return gates;
        });
        c.layers.push_back(layer);
    }
    for (char letter : {'X', 'Y', 'Z'}) {
        c.observables.push_back(single_qubit_pauli(letter, 2 * k, c.num_qubits));
    }
    return c;
}

/// SWAP as three CX.
inline GateList swap_gates(int a, int b) {
    return {Gate::cx(a, b), Gate::cx(b, a), Gate::cx(a, b)};
}

/// Moves the teleport input from qubit 0 to qubit 2k with 2k nearest-neighbour SWAPs.
inline DynamicCircuit build_unitary_transport(int k, double phi_x, double phi_z) {
    if (k < 1) {
        throw std::invalid_argument("transport needs at least one stage");
    }
    DynamicCircuit c;
    c.num_qubits = 2 * k + 1;
    c.prep = teleport_input(0, phi_x, phi_z);
    for (int q = 0; q < 2 * k; q++) {
        for (const auto &g : swap_gates(q, q + 1)) {
            c.prep.push_back(g);
        }
    }
    for (char letter : {'X', 'Y', 'Z'}) {
        c.observables.push_back(single_qubit_pauli(letter, 2 * k, c.num_qubits));
    }
    return c;
}

}  // namespace promkit
