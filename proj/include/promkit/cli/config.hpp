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
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "promkit/cli/json_io.hpp"
#include "promkit/experiments.hpp"

namespace promkit::cli {

struct MitigationSpec {
    /// none | prom-general | prom-layered | prom-tensored | rep
    std::string mode = "none";
    int r = 1;
    Consensus consensus = Consensus::Majority;
    /// Channel the weights are solved for; defaults to the injected noise.
    std::optional<json> assumed_noise;
};

struct RunConfig {
    std::string experiment;
    json params = json::object();
    json noise = json{{"type", "none"}};
    std::optional<json> terminal_noise;
    MitigationSpec mitigation;
    bool terminal_rem = false;
    uint64_t shots = 10000;
    uint64_t trials = 1;
    uint64_t seed = 0;
    std::string output;
    std::string csv;
    /// Directory that relative paths in the config resolve against.
    std::filesystem::path base_dir;
};

inline json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot open '" + path.string() + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw SchemaError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

inline Consensus consensus_from_string(const std::string &s) {
    if (s == "maj" || s == "majority") {
        return Consensus::Majority;
    }
    if (s == "all") {
        return Consensus::All;
    }
    throw SchemaError("mitigation consensus must be 'maj' or 'all'");
}

inline const char *consensus_name(Consensus c) {
    return c == Consensus::Majority ? "maj" : "all";
}

inline MitigationSpec mitigation_from_json(const json &j) {
    if (j.is_string()) {
        return mitigation_from_json(json{{"mode", j}});
    }
    check_keys(j, {"mode", "r", "consensus", "assumed_noise"}, "mitigation");
    MitigationSpec m;
    m.mode = get_string(require_key(j, "mode", "mitigation"), "mitigation mode");
    static const std::array<std::string_view, 5> modes = {"none", "prom-general", "prom-layered", "prom-tensored", "rep"};
    if (std::find(modes.begin(), modes.end(), m.mode) == modes.end()) {
        throw SchemaError("mitigation: unknown mode '" + m.mode + "'");
    }
    if (m.mode == "rep") {
        m.r = static_cast<int>(get_integer(require_key(j, "r", "rep mitigation"), "mitigation r"));
        m.consensus = consensus_from_string(get_string(require_key(j, "consensus", "rep mitigation"), "consensus"));
        if (m.r < 1) {
            throw SchemaError("mitigation r must be positive");
        }
        if (m.consensus == Consensus::Majority && m.r % 2 == 0) {
            throw SchemaError("majority vote needs an odd r");
        }
    } else if (j.contains("r") || j.contains("consensus")) {
        throw SchemaError("mitigation: r and consensus only apply to mode 'rep'");
    }
    if (j.contains("assumed_noise")) {
        if (m.mode.rfind("prom-", 0) != 0) {
            throw SchemaError("mitigation: assumed_noise only applies to prom modes");
        }
        m.assumed_noise = j["assumed_noise"];
    }
    return m;
}

inline ordered_json mitigation_to_json(const MitigationSpec &m) {
    ordered_json out;
    out["mode"] = m.mode;
    if (m.mode == "rep") {
        out["r"] = m.r;
        out["consensus"] = consensus_name(m.consensus);
    }
    if (m.assumed_noise) {
        out["assumed_noise"] = *m.assumed_noise;
    }
    return out;
}

/// Validates the top-level schema. Experiment parameters and noise are checked when built.
inline RunConfig parse_run_config(const json &j, const std::filesystem::path &base_dir = {}) {
    check_keys(
        j,
        {"experiment", "params", "noise", "terminal_noise", "mitigation", "terminal_rem", "shots", "trials", "seed",
         "output", "csv"},
        "config");
    RunConfig c;
    c.base_dir = base_dir;
    c.experiment = get_string(require_key(j, "experiment", "config"), "experiment");
    if (c.experiment != "reset" && c.experiment != "ghz" && c.experiment != "teleport" && c.experiment != "custom") {
        throw SchemaError("experiment must be one of reset, ghz, teleport, custom");
    }
    if (j.contains("params")) {
        require_object(j["params"], "params");
        c.params = j["params"];
    }
    if (j.contains("noise")) {
        require_object(j["noise"], "noise");
        c.noise = j["noise"];
    }
    if (j.contains("terminal_noise")) {
        c.terminal_noise = j["terminal_noise"];
    }
    if (j.contains("mitigation")) {
        c.mitigation = mitigation_from_json(j["mitigation"]);
    }
    if (j.contains("terminal_rem")) {
        c.terminal_rem = get_bool(j["terminal_rem"], "terminal_rem");
    }
    if (j.contains("shots")) {
        c.shots = get_unsigned(j["shots"], "shots");
    }
    if (j.contains("trials")) {
        c.trials = get_unsigned(j["trials"], "trials");
    }
    if (j.contains("seed")) {
        c.seed = get_unsigned(j["seed"], "seed");
    }
    if (j.contains("output")) {
        c.output = get_string(j["output"], "output");
    }
    if (j.contains("csv")) {
        c.csv = get_string(j["csv"], "csv");
    }
    if (c.shots == 0) {
        throw SchemaError("shots must be positive");
    }
    if (c.trials == 0) {
        throw SchemaError("trials must be positive");
    }
    return c;
}

inline RunConfig load_run_config(const std::filesystem::path &path) {
    return parse_run_config(read_json_file(path), path.parent_path());
}

/// The fields that determine the result. Output paths are left out so that
/// records written to different files still compare equal.
inline ordered_json config_echo(const RunConfig &c) {
    ordered_json out;
    out["experiment"] = c.experiment;
    out["params"] = c.params;
    out["noise"] = c.noise;
    if (c.terminal_noise) {
        out["terminal_noise"] = *c.terminal_noise;
    }
    out["mitigation"] = mitigation_to_json(c.mitigation);
    out["terminal_rem"] = c.terminal_rem;
    out["shots"] = c.shots;
    out["trials"] = c.trials;
    out["seed"] = c.seed;
    return out;
}

/// A gate without a qubit: "h" or ["rx", 0.3].
inline Gate single_gate_from_json(const json &j) {
    json full = json::array();
    if (j.is_string()) {
        full = json::array({j, 0});
    } else if (j.is_array() && !j.empty()) {
        full.push_back(j[0]);
        full.push_back(0);
        for (size_t i = 1; i < j.size(); i++) {
            full.push_back(j[i]);
        }
    } else {
        throw SchemaError("gate: expected a name or [name, params...]");
    }
    Gate g = gate_from_json(full);
    if (g.is_two_qubit()) {
        throw SchemaError("gate: expected a single-qubit gate");
    }
    return g;
}

/// A circuit plus the derived metrics its report carries.
struct Experiment {
    std::string kind;
    DynamicCircuit circuit;
    std::vector<LinearMetric> metrics;
    /// Qubit count of the GHZ state whose fidelity is reported.
    int ghz_qubits = 0;
    /// Ideal Bloch vector of the teleported state.
    std::optional<std::array<double, 3>> bloch_ideal;
};

inline LinearMetric single_observable_metric(const std::string &name, size_t index, size_t count) {
    LinearMetric m{name, std::vector<double>(count, 0.0)};
    m.coefficients[index] = 1;
    return m;
}

inline Experiment ghz_experiment(DynamicCircuit circuit, int n) {
    Experiment e;
    e.kind = "ghz";
    const size_t count = circuit.observables.size();
    e.metrics.push_back(LinearMetric{"fidelity", std::vector<double>(count, 1.0 / static_cast<double>(count))});
    e.circuit = std::move(circuit);
    e.ghz_qubits = n;
    return e;
}

inline Experiment build_experiment(const RunConfig &c) {
    const json &p = c.params;
    Experiment e;
    try {
        if (c.experiment == "reset") {
            check_keys(p, {"n", "u", "v"}, "reset params");
            int n = p.contains("n") ? static_cast<int>(get_integer(p["n"], "n")) : 1;
            std::vector<Gate> u;
            if (p.contains("u")) {
                // An array without numbers is a per-qubit list; ["rx", 0.3] is one gate.
                const json &uj = p["u"];
                bool per_qubit = uj.is_array() && !uj.empty() &&
                                 std::none_of(uj.begin(), uj.end(), [](const json &x) { return x.is_number(); });
                if (per_qubit) {
                    for (const auto &g : uj) {
                        u.push_back(single_gate_from_json(g));
                    }
                } else {
                    u.push_back(single_gate_from_json(uj));
                }
            }
            Gate v = p.contains("v") ? single_gate_from_json(p["v"]) : Gate::single(GateKind::H, 0);
            e.kind = "reset";
            e.circuit = build_reset_circuit(n, u, v);
            e.metrics.push_back(single_observable_metric("system_fidelity", 0, 2));
            e.metrics.push_back(single_observable_metric("spectator_fidelity", 1, 2));
        } else if (c.experiment == "ghz") {
            check_keys(p, {"b", "p", "n", "unitary"}, "ghz params");
            bool unitary = p.contains("unitary") && get_bool(p["unitary"], "unitary");
            if (unitary) {
                if (p.contains("b") || p.contains("p")) {
                    throw SchemaError("ghz params: unitary GHZ takes n, not b and p");
                }
                int n = static_cast<int>(get_integer(require_key(p, "n", "ghz params"), "n"));
                if (n < 1 || n > MAX_STABILIZER_QUBITS) {
                    throw SchemaError("ghz params: n must be in 1.." + std::to_string(MAX_STABILIZER_QUBITS));
                }
                e = ghz_experiment(build_unitary_ghz(n), n);
            } else {
                if (p.contains("n")) {
                    throw SchemaError("ghz params: n only applies with unitary = true");
                }
                int b = static_cast<int>(get_integer(require_key(p, "b", "ghz params"), "b"));
                int pp = static_cast<int>(get_integer(require_key(p, "p", "ghz params"), "p"));
                if (b < 1 || pp < 1 || b * (pp + 1) > MAX_STABILIZER_QUBITS) {
                    throw SchemaError(
                        "ghz params: need b, p >= 1 and b(p+1) <= " + std::to_string(MAX_STABILIZER_QUBITS));
                }
                e = ghz_experiment(build_ghz_circuit(b, pp), b * (pp + 1));
            }
        } else if (c.experiment == "teleport") {
            check_keys(p, {"k", "phi_x", "phi_z", "unitary"}, "teleport params");
            int k = p.contains("k") ? static_cast<int>(get_integer(p["k"], "k")) : 1;
            double phi_x = p.contains("phi_x") ? get_number(p["phi_x"], "phi_x") : std::numbers::pi / 8;
            double phi_z = p.contains("phi_z") ? get_number(p["phi_z"], "phi_z") : 3 * std::numbers::pi / 8;
            bool unitary = p.contains("unitary") && get_bool(p["unitary"], "unitary");
            e.kind = "teleport";
            e.circuit = unitary ? build_unitary_transport(k, phi_x, phi_z) : build_teleport_circuit(k, phi_x, phi_z);
            e.bloch_ideal = teleport_ideal(phi_x, phi_z);
        } else {
            check_keys(p, {"circuit", "circuit_file"}, "custom params");
            if (p.contains("circuit") == p.contains("circuit_file")) {
                throw SchemaError("custom params: give exactly one of circuit, circuit_file");
            }
            json cj = p.contains("circuit")
                          ? p["circuit"]
                          : read_json_file(c.base_dir / get_string(p["circuit_file"], "circuit_file"));
            e.kind = "custom";
            e.circuit = circuit_from_json(cj);
        }
    } catch (const SchemaError &) {
        throw;
    } catch (const std::invalid_argument &err) {
        throw SchemaError(std::string(c.experiment) + " params: " + err.what());
    }
    if (c.mitigation.mode == "rep") {
        try {
            e.circuit = apply_rep_strategy(std::move(e.circuit), RepStrategy{c.mitigation.r, c.mitigation.consensus});
        } catch (const std::invalid_argument &err) {
            throw SchemaError(std::string("mitigation: ") + err.what());
        }
    }
    return e;
}

/// Injected noise: {"type": "none"}, a readout model, or
/// {"type": "asymmetric", "matrices": [per-layer confusion matrix], "bfa": bool}.
inline NoiseInjector build_noise(const RunConfig &c, const DynamicCircuit &circuit) {
    NoiseInjector out;
    const json &j = c.noise;
    std::string type = get_string(require_key(j, "type", "noise"), "noise type");
    const int m = circuit.measurement_count();
    if (type == "none") {
        check_keys(j, {"type"}, "noise");
    } else if (type == "asymmetric") {
        check_keys(j, {"type", "matrices", "bfa"}, "asymmetric noise");
        const json &mats = require_key(j, "matrices", "asymmetric noise");
        if (!mats.is_array()) {
            throw SchemaError("asymmetric noise: matrices must be an array");
        }
        std::vector<ConfusionMatrix> per_layer;
        for (const auto &mj : mats) {
            per_layer.push_back(confusion_matrix_from_json(mj));
        }
        auto sizes = circuit.layer_sizes();
        if (per_layer.size() != sizes.size()) {
            throw SchemaError("asymmetric noise: need one matrix per measurement layer");
        }
        for (size_t l = 0; l < sizes.size(); l++) {
            if (per_layer[l].num_bits() != sizes[l]) {
                throw SchemaError("asymmetric noise: matrix " + std::to_string(l) + " has the wrong size");
            }
        }
        bool bfa = !j.contains("bfa") || get_bool(j["bfa"], "bfa");
        out = NoiseInjector::asymmetric(std::move(per_layer), bfa);
    } else {
        ReadoutModel model = readout_model_from_json(j, m);
        if (measurement_count(model) != m) {
            throw SchemaError(
                "noise covers " + std::to_string(measurement_count(model)) + " measurements but the circuit has " +
                std::to_string(m));
        }
        out = NoiseInjector::syndrome(std::move(model));
    }
    if (c.terminal_noise) {
        const json &t = *c.terminal_noise;
        check_keys(t, {"rate", "rates"}, "terminal_noise");
        if (t.contains("rate") == t.contains("rates")) {
            throw SchemaError("terminal_noise: give exactly one of rate, rates");
        }
        if (t.contains("rate")) {
            out.terminal_rates.assign(circuit.num_qubits, get_number(t["rate"], "terminal rate"));
        } else {
            out.terminal_rates = get_numbers(t["rates"], "terminal rates");
            if (static_cast<int>(out.terminal_rates.size()) != circuit.num_qubits) {
                throw SchemaError("terminal_noise: need one rate per qubit");
            }
        }
        for (double r : out.terminal_rates) {
            if (!(r >= 0 && r < 0.5)) {
                throw SchemaError("terminal_noise: rates must lie in [0, 0.5)");
            }
        }
    }
    return out;
}

/// The symmetrized channel the mitigation assumes.
inline ReadoutModel channel_model(const RunConfig &c, const NoiseInjector &noise, const DynamicCircuit &circuit) {
    const int m = circuit.measurement_count();
    if (c.mitigation.assumed_noise) {
        ReadoutModel model = readout_model_from_json(*c.mitigation.assumed_noise, m);
        if (measurement_count(model) != m) {
            throw SchemaError("assumed_noise does not match the circuit's measurement count");
        }
        return model;
    }
    return std::visit(
        [&](const auto &mode) -> ReadoutModel {
            using T = std::decay_t<decltype(mode)>;
            if constexpr (std::is_same_v<T, NoNoise>) {
                return UniformModel{0.0, m};
            } else if constexpr (std::is_same_v<T, SyndromeMode>) {
                return mode.model;
            } else {
                LayerTensoredModel lt;
                for (const auto &matrix : mode.per_layer) {
                    lt.layers.push_back(symmetrize(matrix));
                }
                return lt;
            }
        },
        noise.mode);
}

/// Weights of the requested structure for `model`.
inline MitigationWeights weights_for_mode(
    const std::string &mode, const ReadoutModel &model, const DynamicCircuit &circuit) {
    if (mode == "prom-general") {
        return solve_weights_general(expand(model));
    }
    if (mode == "prom-layered") {
        std::vector<SyndromeDistribution> parts;
        auto sizes = circuit.layer_sizes();
        auto offsets = circuit.layer_offsets();
        for (size_t l = 0; l < sizes.size(); l++) {
            std::vector<int> keep;
            for (int j = 0; j < sizes[l]; j++) {
                keep.push_back(offsets[l] + j);
            }
            parts.push_back(marginal(model, keep));
        }
        return solve_weights_layered(parts);
    }
    if (mode == "prom-tensored") {
        std::vector<double> rates;
        for (int j = 0; j < circuit.measurement_count(); j++) {
            std::array<int, 1> keep{j};
            rates.push_back(marginal(model, keep)[1]);
        }
        return solve_weights_tensored(rates);
    }
    throw SchemaError("no weights for mitigation mode '" + mode + "'");
}

/// Weights used by `run`, or nothing for unmitigated and repetition modes.
inline std::optional<MitigationWeights> build_weights(
    const RunConfig &c, const NoiseInjector &noise, const DynamicCircuit &circuit) {
    if (c.mitigation.mode.rfind("prom-", 0) != 0 || circuit.measurement_count() == 0) {
        return std::nullopt;
    }
    return weights_for_mode(c.mitigation.mode, channel_model(c, noise, circuit), circuit);
}

}  // namespace promkit::cli
