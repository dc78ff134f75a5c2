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
#include <cstdio>
#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "promkit/prom.hpp"
#include "promkit/readout.hpp"
#include "promkit/simulator.hpp"

namespace promkit::cli {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

/// Input that does not match the expected schema.
class SchemaError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

inline void require_object(const json &j, std::string_view where) {
    if (!j.is_object()) {
        throw SchemaError(std::string(where) + ": expected an object");
    }
}

/// Rejects keys outside `allowed`.
inline void check_keys(const json &j, std::initializer_list<std::string_view> allowed, std::string_view where) {
    require_object(j, where);
    for (const auto &item : j.items()) {
        bool ok = false;
        for (auto a : allowed) {
            ok |= item.key() == a;
        }
        if (!ok) {
            throw SchemaError(std::string(where) + ": unknown key '" + item.key() + "'");
        }
    }
}

inline const json &require_key(const json &j, std::string_view key, std::string_view where) {
    auto it = j.find(std::string(key));
    if (it == j.end()) {
        throw SchemaError(std::string(where) + ": missing key '" + std::string(key) + "'");
    }
    return *it;
}

inline double get_number(const json &j, std::string_view where) {
    if (!j.is_number()) {
        throw SchemaError(std::string(where) + ": expected a number");
    }
    return j.get<double>();
}

inline int64_t get_integer(const json &j, std::string_view where) {
    if (!j.is_number_integer()) {
        throw SchemaError(std::string(where) + ": expected an integer");
    }
    return j.get<int64_t>();
}

inline uint64_t get_unsigned(const json &j, std::string_view where) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<int64_t>() < 0)) {
        throw SchemaError(std::string(where) + ": expected a non-negative integer");
    }
    return j.get<uint64_t>();
}

inline bool get_bool(const json &j, std::string_view where) {
    if (!j.is_boolean()) {
        throw SchemaError(std::string(where) + ": expected true or false");
    }
    return j.get<bool>();
}

inline std::string get_string(const json &j, std::string_view where) {
    if (!j.is_string()) {
        throw SchemaError(std::string(where) + ": expected a string");
    }
    return j.get<std::string>();
}

inline std::vector<double> get_numbers(const json &j, std::string_view where) {
    if (!j.is_array()) {
        throw SchemaError(std::string(where) + ": expected an array of numbers");
    }
    std::vector<double> out;
    for (const auto &x : j) {
        out.push_back(get_number(x, where));
    }
    return out;
}

inline SyndromeDistribution distribution_from_json(const json &j, std::string_view where) {
    try {
        return SyndromeDistribution(get_numbers(j, where));
    } catch (const SchemaError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw SchemaError(std::string(where) + ": " + e.what());
    }
}

/// Symmetrized readout model: {"type": general|layer_tensored|fully_tensored|uniform, ...}.
///
/// A uniform model without "count" takes `default_count`.
inline ReadoutModel readout_model_from_json(const json &j, int default_count = -1) {
    require_object(j, "readout model");
    std::string type = get_string(require_key(j, "type", "readout model"), "readout model type");
    ReadoutModel model;
    if (type == "general") {
        check_keys(j, {"type", "q"}, "general model");
        model = GeneralModel{distribution_from_json(require_key(j, "q", "general model"), "general model q")};
    } else if (type == "layer_tensored") {
        check_keys(j, {"type", "layers"}, "layer_tensored model");
        const json &layers = require_key(j, "layers", "layer_tensored model");
        if (!layers.is_array()) {
            throw SchemaError("layer_tensored model: layers must be an array");
        }
        LayerTensoredModel lt;
        for (const auto &part : layers) {
            lt.layers.push_back(distribution_from_json(part, "layer_tensored model layer"));
        }
        model = lt;
    } else if (type == "fully_tensored") {
        check_keys(j, {"type", "rates"}, "fully_tensored model");
        model = FullyTensoredModel{get_numbers(require_key(j, "rates", "fully_tensored model"), "rates")};
    } else if (type == "uniform") {
        check_keys(j, {"type", "rate", "count"}, "uniform model");
        UniformModel u;
        u.rate = get_number(require_key(j, "rate", "uniform model"), "uniform rate");
        if (j.contains("count")) {
            u.count = static_cast<int>(get_integer(j["count"], "uniform count"));
        } else if (default_count >= 0) {
            u.count = default_count;
        } else {
            throw SchemaError("uniform model: missing key 'count'");
        }
        model = u;
    } else {
        throw SchemaError("readout model: unknown type '" + type + "'");
    }
    try {
        validate(model);
    } catch (const std::invalid_argument &e) {
        throw SchemaError(std::string("readout model: ") + e.what());
    }
    return model;
}

inline ordered_json readout_model_to_json(const ReadoutModel &model) {
    return std::visit(
        [](const auto &v) -> ordered_json {
            using T = std::decay_t<decltype(v)>;
            ordered_json out;
            if constexpr (std::is_same_v<T, GeneralModel>) {
                out["type"] = "general";
                out["q"] = v.q.probabilities();
            } else if constexpr (std::is_same_v<T, LayerTensoredModel>) {
                out["type"] = "layer_tensored";
                out["layers"] = ordered_json::array();
                for (const auto &part : v.layers) {
                    out["layers"].push_back(part.probabilities());
                }
            } else if constexpr (std::is_same_v<T, FullyTensoredModel>) {
                out["type"] = "fully_tensored";
                out["rates"] = v.rates;
            } else {
                out["type"] = "uniform";
                out["rate"] = v.rate;
                out["count"] = v.count;
            }
            return out;
        },
        model);
}

inline ConfusionMatrix confusion_matrix_from_json(const json &j) {
    if (!j.is_array()) {
        throw SchemaError("confusion matrix: expected an array of rows");
    }
    std::vector<std::vector<double>> rows;
    for (const auto &row : j) {
        rows.push_back(get_numbers(row, "confusion matrix row"));
    }
    try {
        return ConfusionMatrix(rows);
    } catch (const std::invalid_argument &e) {
        throw SchemaError(std::string("confusion matrix: ") + e.what());
    }
}

/// Full per-index weight listing when small enough, plus the factor tables.
inline ordered_json weights_to_json(const MitigationWeights &w) {
    ordered_json out;
    out["structure"] = structure_name(w.structure());
    out["num_bits"] = w.num_bits();
    out["xi"] = w.xi();
    out["factors"] = ordered_json::array();
    for (const auto &f : w.factors()) {
        ordered_json fj;
        fj["num_bits"] = f.num_bits;
        fj["xi"] = f.xi;
        fj["alpha"] = f.alpha;
        out["factors"].push_back(fj);
    }
    out["layout"] = w.layout();
    if (w.num_bits() <= std::min(materialization_cap(), 16)) {
        auto alpha = w.expanded_alpha();
        ordered_json entries = ordered_json::array();
        for (uint64_t f = 0; f < alpha.size(); f++) {
            entries.push_back({{"f", BitString(f, w.num_bits()).str()}, {"alpha", alpha[f]}});
        }
        out["alpha"] = entries;
    }
    return out;
}

/// Gate as [name, qubit(s)..., param(s)...], e.g. ["h", 0], ["cx", 0, 1], ["rx", 2, 0.5].
inline Gate gate_from_json(const json &j) {
    if (!j.is_array() || j.empty()) {
        throw SchemaError("gate: expected [name, qubits..., params...]");
    }
    std::string name = get_string(j[0], "gate name");
    auto kind = gate_kind_from_name(name);
    if (!kind) {
        throw SchemaError("gate: unknown gate '" + name + "'");
    }
    const GateInfo &info = gate_info(*kind);
    if (j.size() != static_cast<size_t>(1 + info.num_qubits + info.num_params)) {
        throw SchemaError(
            "gate '" + name + "' takes " + std::to_string(info.num_qubits) + " qubit(s) and " +
            std::to_string(info.num_params) + " parameter(s)");
    }
    if (*kind == GateKind::CX) {
        return Gate::cx(
            static_cast<int>(get_integer(j[1], "gate qubit")), static_cast<int>(get_integer(j[2], "gate qubit")));
    }
    std::array<double, 3> params{};
    for (int i = 0; i < info.num_params; i++) {
        params[i] = get_number(j[2 + i], "gate parameter");
    }
    return Gate::single(*kind, static_cast<int>(get_integer(j[1], "gate qubit")), params);
}

inline GateList gates_from_json(const json &j, std::string_view where) {
    if (!j.is_array()) {
        throw SchemaError(std::string(where) + ": expected a gate list");
    }
    GateList out;
    for (const auto &g : j) {
        out.push_back(gate_from_json(g));
    }
    return out;
}

/// "ZZI", "-YY" or {"projector": [qubits], "name": "..."}.
inline Observable observable_from_json(const json &j) {
    if (j.is_string()) {
        try {
            return Observable::pauli(j.get<std::string>());
        } catch (const std::invalid_argument &e) {
            throw SchemaError(std::string("observable: ") + e.what());
        }
    }
    check_keys(j, {"projector", "name"}, "observable");
    std::vector<int> qubits;
    for (const auto &q : require_key(j, "projector", "observable")) {
        qubits.push_back(static_cast<int>(get_integer(q, "projector qubit")));
    }
    std::string name = j.contains("name") ? get_string(j["name"], "observable name") : "projector";
    return Observable::zero_projector(name, qubits);
}

/// {"num_qubits", "prep", "layers": [{"pre", "measure", "table": {"01": [...], ...}}], "post", "observables"}.
inline DynamicCircuit circuit_from_json(const json &j) {
    check_keys(j, {"num_qubits", "prep", "layers", "post", "observables"}, "circuit");
    DynamicCircuit c;
    c.num_qubits = static_cast<int>(get_integer(require_key(j, "num_qubits", "circuit"), "num_qubits"));
    if (j.contains("prep")) {
        c.prep = gates_from_json(j["prep"], "circuit prep");
    }
    if (j.contains("post")) {
        c.post = gates_from_json(j["post"], "circuit post");
    }
    if (j.contains("layers")) {
        if (!j["layers"].is_array()) {
            throw SchemaError("circuit layers: expected an array");
        }
        for (const auto &lj : j["layers"]) {
            check_keys(lj, {"pre", "measure", "table"}, "circuit layer");
            FeedforwardLayer layer;
            if (lj.contains("pre")) {
                layer.pre = gates_from_json(lj["pre"], "layer pre");
            }
            for (const auto &q : require_key(lj, "measure", "circuit layer")) {
                layer.measured.push_back(static_cast<int>(get_integer(q, "measured qubit")));
            }
            const int ml = static_cast<int>(layer.measured.size());
            if (ml == 0 || ml > 20) {
                throw SchemaError("circuit layer: must measure between 1 and 20 qubits");
            }
            const json &table = require_key(lj, "table", "circuit layer");
            require_object(table, "feedforward table");
            layer.table.assign(size_t{1} << ml, GateList{});
            std::vector<bool> filled(layer.table.size(), false);
            for (const auto &item : table.items()) {
                BitString key;
                try {
                    key = BitString::parse(item.key());
                } catch (const std::invalid_argument &e) {
                    throw SchemaError(std::string("feedforward table key: ") + e.what());
                }
                if (key.size() != ml) {
                    throw SchemaError("feedforward table key '" + item.key() + "' has the wrong length");
                }
                layer.table[key.index()] = gates_from_json(item.value(), "feedforward entry");
                filled[key.index()] = true;
            }
            for (size_t s = 0; s < filled.size(); s++) {
                if (!filled[s]) {
                    throw SchemaError(
                        "feedforward table is missing outcome '" + BitString(s, ml).str() + "'");
                }
            }
            c.layers.push_back(std::move(layer));
        }
    }
    if (j.contains("observables")) {
        for (const auto &oj : j["observables"]) {
            c.observables.push_back(observable_from_json(oj));
        }
    }
    try {
        c.validate();
    } catch (const std::invalid_argument &e) {
        throw SchemaError(std::string("circuit: ") + e.what());
    }
    return c;
}

/// Shortest decimal that round-trips, for stable CSV output.
inline std::string format_double(double x) {
    if (x != x) {
        return "nan";
    }
    char buf[64];
    for (int precision = 15; precision <= 17; precision++) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x) {
            break;
        }
    }
    return buf;
}

}  // namespace promkit::cli
