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
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace promkit {

using Amplitude = std::complex<double>;

/// Row-major 2x2 matrix {a00, a01, a10, a11}.
using Mat2 = std::array<Amplitude, 4>;

enum class GateKind { I, X, Y, Z, H, S, Sdg, T, Tdg, RX, RY, RZ, U, CX };

struct GateInfo {
    GateKind kind;
    std::string_view name;
    int num_qubits;
    int num_params;
};

inline constexpr std::array<GateInfo, 14> GATE_TABLE{{
    {GateKind::I, "i", 1, 0},
    {GateKind::X, "x", 1, 0},
    {GateKind::Y, "y", 1, 0},
    {GateKind::Z, "z", 1, 0},
    {GateKind::H, "h", 1, 0},
    {GateKind::S, "s", 1, 0},
    {GateKind::Sdg, "sdg", 1, 0},
    {GateKind::T, "t", 1, 0},
    {GateKind::Tdg, "tdg", 1, 0},
    {GateKind::RX, "rx", 1, 1},
    {GateKind::RY, "ry", 1, 1},
    {GateKind::RZ, "rz", 1, 1},
    {GateKind::U, "u", 1, 3},
    {GateKind::CX, "cx", 2, 0},
}};

inline const GateInfo &gate_info(GateKind kind) {
    for (const auto &info : GATE_TABLE) {
        if (info.kind == kind) {
            return info;
        }
    }
    throw std::invalid_argument("unknown gate kind");
}

inline std::optional<GateKind> gate_kind_from_name(std::string_view name) {
    for (const auto &info : GATE_TABLE) {
        if (info.name == name) {
            return info.kind;
        }
    }
    return std::nullopt;
}

/// A one-qubit unitary or a CX. For CX, `control` drives `target`.
struct Gate {
    GateKind kind = GateKind::I;
    int target = 0;
    int control = -1;
    std::array<double, 3> params{};

    static Gate single(GateKind kind, int target, std::array<double, 3> params = {}) {
        if (kind == GateKind::CX) {
            throw std::invalid_argument("Gate::single called with a two-qubit kind");
        }
        return Gate{kind, target, -1, params};
    }

    static Gate cx(int control, int target) {
        return Gate{GateKind::CX, target, control, {}};
    }

    bool is_two_qubit() const {
        return kind == GateKind::CX;
    }

    bool operator==(const Gate &other) const = default;

    Mat2 matrix() const {
        using namespace std::complex_literals;
        const double r = 1 / std::sqrt(2.0);
        switch (kind) {
            case GateKind::I:
                return {1, 0, 0, 1};
            case GateKind::X:
                return {0, 1, 1, 0};
            case GateKind::Y:
                return {0, -1i, 1i, 0};
            case GateKind::Z:
                return {1, 0, 0, -1};
            case GateKind::H:
                return {r, r, r, -r};
            case GateKind::S:
                return {1, 0, 0, 1i};
            case GateKind::Sdg:
                return {1, 0, 0, -1i};
            case GateKind::T:
                return {1, 0, 0, std::polar(1.0, M_PI / 4)};
            case GateKind::Tdg:
                return {1, 0, 0, std::polar(1.0, -M_PI / 4)};
            case GateKind::RX: {
                double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
                return {c, -1i * s, -1i * s, c};
            }
            case GateKind::RY: {
                double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
                return {c, -s, s, c};
            }
            case GateKind::RZ:
                return {std::polar(1.0, -params[0] / 2), 0, 0, std::polar(1.0, params[0] / 2)};
            case GateKind::U: {
                double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
                return {
                    c,
                    -std::polar(s, params[2]),
                    std::polar(s, params[1]),
                    std::polar(c, params[1] + params[2]),
                };
            }
            case GateKind::CX:
                break;
        }
        throw std::invalid_argument("CX has no 2x2 matrix");
    }
};

using GateList = std::vector<Gate>;

/// The adjoint gate.
inline Gate inverse(const Gate &g) {
    Gate out = g;
    switch (g.kind) {
        case GateKind::S:
            out.kind = GateKind::Sdg;
            break;
        case GateKind::Sdg:
            out.kind = GateKind::S;
            break;
        case GateKind::T:
            out.kind = GateKind::Tdg;
            break;
        case GateKind::Tdg:
            out.kind = GateKind::T;
            break;
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
            out.params[0] = -g.params[0];
            break;
        case GateKind::U:
            out.params = {-g.params[0], -g.params[2], -g.params[1]};
            break;
        default:
            break;
    }
    return out;
}

/// Adjoint of a sequence: reversed order, each gate inverted.
inline GateList inverse(const GateList &gates) {
    GateList out;
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        out.push_back(inverse(*it));
    }
    return out;
}

}  // namespace promkit
