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

#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "promkit/cli/config.hpp"

#ifndef PROMKIT_VERSION
#define PROMKIT_VERSION "0.1.0"
#endif

namespace promkit::cli {

inline constexpr const char *VERSION_STRING = "promkit " PROMKIT_VERSION;

inline constexpr const char *CSV_HEADER = "trial,observable,estimate,stderr,xi,shots_accepted,shots_discarded";

/// Command-line overrides applied on top of a config file.
struct Overrides {
    std::optional<uint64_t> seed;
    std::optional<uint64_t> shots;
    std::optional<uint64_t> trials;
    int workers = 1;
};

inline void apply_overrides(RunConfig &c, const Overrides &o) {
    if (o.seed) {
        c.seed = *o.seed;
    }
    if (o.shots) {
        if (*o.shots == 0) {
            throw SchemaError("shots must be positive");
        }
        c.shots = *o.shots;
    }
    if (o.trials) {
        if (*o.trials == 0) {
            throw SchemaError("trials must be positive");
        }
        c.trials = *o.trials;
    }
}

struct CommandOutput {
    ordered_json record;
    /// Empty for commands without tabular output.
    std::string csv;
};

struct DerivedValue {
    std::string name;
    double value = 0;
    double std_error = 0;
};

/// Derived metrics from per-observable values. `linear` holds jointly estimated
/// linear metrics; when empty they are combined from `values` directly.
inline std::vector<DerivedValue> derive_metrics(
    const Experiment &e,
    std::span<const double> values,
    std::span<const double> errors,
    std::span<const MetricEstimate> linear = {}) {
    std::vector<DerivedValue> out;
    for (size_t i = 0; i < e.metrics.size(); i++) {
        DerivedValue d{e.metrics[i].name, 0, 0};
        if (!linear.empty()) {
            d.value = linear[i].estimate.value;
            d.std_error = linear[i].estimate.std_error;
        } else {
            double var = 0;
            for (size_t b = 0; b < values.size(); b++) {
                double c = e.metrics[i].coefficients[b];
                d.value += c * values[b];
                var += c * c * errors[b] * errors[b];
            }
            d.std_error = std::sqrt(var);
        }
        out.push_back(d);
        if (e.ghz_qubits > 0 && d.name == "fidelity") {
            out.push_back(DerivedValue{"fidelity_clipped", std::clamp(d.value, 0.0, 1.0), d.std_error});
        }
    }
    if (e.bloch_ideal) {
        const auto &ideal = *e.bloch_ideal;
        std::array<double, 3> delta{};
        static const char *names[3] = {"delta_x", "delta_y", "delta_z"};
        for (int i = 0; i < 3; i++) {
            delta[i] = values[i] - ideal[i];
            out.push_back(DerivedValue{names[i], delta[i], errors[i]});
        }
        double dist = euclidean_error({values[0], values[1], values[2]}, ideal);
        double var = 0;
        if (dist > 0) {
            for (int i = 0; i < 3; i++) {
                var += delta[i] * delta[i] / (dist * dist) * errors[i] * errors[i];
            }
        }
        out.push_back(DerivedValue{"euclidean_error", dist, std::sqrt(var)});
    }
    return out;
}

inline ordered_json derived_to_json(const std::vector<DerivedValue> &derived) {
    ordered_json out = ordered_json::array();
    for (const auto &d : derived) {
        out.push_back({{"name", d.name}, {"estimate", d.value}, {"stderr", d.std_error}});
    }
    return out;
}

inline ordered_json circuit_summary(const DynamicCircuit &c, size_t groups) {
    ordered_json out;
    out["num_qubits"] = c.num_qubits;
    out["measurements"] = c.measurement_count();
    out["layers"] = c.layers.size();
    out["cx_count"] = cx_count(c);
    out["depth"] = circuit_depth(c);
    out["observables"] = c.observables.size();
    out["measurement_groups"] = groups;
    return out;
}

/// Mitigation summary: ξ of the weights and, when defined, the channel's η and 1/(1-2η).
inline ordered_json mitigation_summary(
    const RunConfig &c, const NoiseInjector &noise, const DynamicCircuit &circuit,
    const std::optional<MitigationWeights> &weights) {
    ordered_json out = mitigation_to_json(c.mitigation);
    out["xi"] = weights ? weights->xi() : 1.0;
    if (weights) {
        out["structure"] = structure_name(weights->structure());
        double eta = total_error_probability(channel_model(c, noise, circuit));
        out["eta"] = eta;
        out["overhead_bound"] = eta < 0.5 ? ordered_json(overhead_bound(eta)) : ordered_json(nullptr);
    }
    return out;
}

struct TrialTable {
    ordered_json trials = ordered_json::array();
    std::string csv_rows;
};

/// Runs every trial and collects records plus CSV rows (prefixed by `csv_prefix`).
inline TrialTable run_trials(
    const RunConfig &c, const Experiment &e, const ShotRunner &runner, const MitigationWeights *weights,
    int workers, const std::string &csv_prefix = "") {
    TrialTable out;
    std::ostringstream csv;
    const double xi = weights != nullptr ? weights->xi() : 1.0;
    for (uint64_t t = 0; t < c.trials; t++) {
        EstimationOptions opts;
        opts.shots = c.shots;
        opts.seed = c.seed;
        opts.trial = t;
        opts.workers = workers;
        opts.terminal_rem = c.terminal_rem;
        EstimationResult r = estimate_observables(runner, weights, opts, e.metrics);

        std::vector<double> values, errors;
        ordered_json obs = ordered_json::array();
        for (const auto &o : r.observables) {
            values.push_back(o.estimate.value);
            errors.push_back(o.estimate.std_error);
            obs.push_back(
                {{"name", o.name},
                 {"estimate", o.estimate.value},
                 {"stderr", o.estimate.std_error},
                 {"shots_accepted", o.shots_accepted},
                 {"shots_discarded", o.shots_discarded}});
            csv << csv_prefix << t << ',' << o.name << ',' << format_double(o.estimate.value) << ','
                << format_double(o.estimate.std_error) << ',' << format_double(xi) << ',' << o.shots_accepted << ','
                << o.shots_discarded << '\n';
        }
        uint64_t accepted = 0, discarded = 0;
        for (const auto &g : runner.groups()) {
            const auto &first = r.observables[g.slots.front().observable];
            accepted += first.shots_accepted;
            discarded += first.shots_discarded;
        }
        auto derived = derive_metrics(e, values, errors, r.metrics);
        for (const auto &d : derived) {
            csv << csv_prefix << t << ',' << d.name << ',' << format_double(d.value) << ','
                << format_double(d.std_error) << ',' << format_double(xi) << ',' << accepted << ',' << discarded
                << '\n';
        }
        ordered_json trial;
        trial["trial"] = t;
        trial["observables"] = obs;
        trial["derived"] = derived_to_json(derived);
        trial["shots_accepted"] = accepted;
        trial["shots_discarded"] = discarded;
        out.trials.push_back(trial);
    }
    out.csv_rows = csv.str();
    return out;
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// Executes trials × shots of the configured experiment.
inline CommandOutput run_command(RunConfig c, const Overrides &o) {
    auto start = std::chrono::steady_clock::now();
    apply_overrides(c, o);
    Experiment e = build_experiment(c);
    NoiseInjector noise = build_noise(c, e.circuit);
    auto weights = build_weights(c, noise, e.circuit);
    ShotRunner runner(e.circuit, noise, c.terminal_rem);
    TrialTable table = run_trials(c, e, runner, weights ? &*weights : nullptr, o.workers);

    CommandOutput out;
    auto &rec = out.record;
    rec["version"] = VERSION_STRING;
    rec["command"] = "run";
    rec["config"] = config_echo(c);
    rec["circuit"] = circuit_summary(e.circuit, runner.groups().size());
    rec["mitigation"] = mitigation_summary(c, noise, e.circuit, weights);
    rec["xi"] = weights ? weights->xi() : 1.0;
    rec["shots_per_group"] = c.shots;
    rec["seed"] = c.seed;
    rec["trials"] = table.trials;
    rec["wall_time_s"] = seconds_since(start);
    out.csv = std::string(CSV_HEADER) + "\n" + table.csv_rows;
    return out;
}

inline ordered_json named_values(const DynamicCircuit &c, const std::vector<double> &values) {
    ordered_json out = ordered_json::array();
    for (size_t b = 0; b < values.size(); b++) {
        out.push_back({{"name", c.observables[b].name}, {"value", values[b]}});
    }
    return out;
}

/// Exact ideal, per-mask, raw and mitigated expectations by branch enumeration.
///
/// Repetitions are ignored and the channel is the symmetrized one the mitigation assumes.
inline CommandOutput oracle_command(RunConfig c, const Overrides &o) {
    auto start = std::chrono::steady_clock::now();
    apply_overrides(c, o);
    Experiment e = build_experiment(c);
    NoiseInjector noise = build_noise(c, e.circuit);
    TrajectoryTensor t = exact_trajectory_tensor(e.circuit);
    const int m = e.circuit.measurement_count();
    ReadoutModel model = channel_model(c, noise, e.circuit);
    SyndromeDistribution q = m == 0 ? SyndromeDistribution() : expand(model);
    std::string mode = c.mitigation.mode.rfind("prom-", 0) == 0 ? c.mitigation.mode : "prom-general";
    MitigationWeights w = m == 0 ? solve_weights_general(q) : weights_for_mode(mode, model, e.circuit);

    auto ideal = t.ideal();
    auto raw = exact_masked_expectation(t, q, 0);
    auto mitigated = exact_mitigated_expectation(t, q, w);
    double deviation = 0;
    for (size_t b = 0; b < ideal.size(); b++) {
        deviation = std::max(deviation, std::abs(mitigated[b] - ideal[b]));
    }
    ordered_json per_mask = ordered_json::array();
    for (uint64_t f = 0; f < t.dim(); f++) {
        per_mask.push_back(
            {{"f", BitString(f, m).str()},
             {"alpha", w.alpha(f)},
             {"values", exact_masked_expectation(t, q, f)}});
    }
    std::vector<double> zeros(ideal.size(), 0.0);

    CommandOutput out;
    auto &rec = out.record;
    rec["version"] = VERSION_STRING;
    rec["command"] = "oracle";
    rec["config"] = config_echo(c);
    rec["circuit"] = circuit_summary(e.circuit, group_observables(e.circuit).size());
    rec["channel"] = {{"eta", q.eta()}, {"q", q.probabilities()}};
    rec["weights"] = {{"structure", structure_name(w.structure())}, {"xi", w.xi()}};
    rec["repetitions_ignored"] = c.mitigation.mode == "rep";
    rec["ideal"] = named_values(e.circuit, ideal);
    rec["raw"] = named_values(e.circuit, raw);
    rec["mitigated"] = named_values(e.circuit, mitigated);
    rec["max_mitigated_deviation"] = deviation;
    rec["derived"] = {
        {"ideal", derived_to_json(derive_metrics(e, ideal, zeros))},
        {"raw", derived_to_json(derive_metrics(e, raw, zeros))},
        {"mitigated", derived_to_json(derive_metrics(e, mitigated, zeros))},
    };
    rec["per_mask"] = per_mask;
    rec["wall_time_s"] = seconds_since(start);
    return out;
}

/// Weight table for a noise spec: {"noise": model, "structure": native|general|layered|tensored}.
///
/// Layered treats each block of the model as a layer.
inline CommandOutput weights_command(const json &j) {
    auto start = std::chrono::steady_clock::now();
    check_keys(j, {"noise", "structure", "output"}, "weights config");
    ReadoutModel model = readout_model_from_json(require_key(j, "noise", "weights config"));
    std::string structure = j.contains("structure") ? get_string(j["structure"], "structure") : "native";
    const int m = measurement_count(model);
    std::optional<MitigationWeights> w;
    if (structure == "native") {
        w = solve_weights(model);
    } else if (structure == "general") {
        w = solve_weights_general(expand(model));
    } else if (structure == "layered") {
        w = solve_weights_layered(model_blocks(model));
    } else if (structure == "tensored") {
        std::vector<double> rates;
        for (int i = 0; i < m; i++) {
            std::array<int, 1> keep{i};
            rates.push_back(marginal(model, keep)[1]);
        }
        w = solve_weights_tensored(rates);
    } else {
        throw SchemaError("structure must be native, general, layered or tensored");
    }
    double eta = total_error_probability(model);

    CommandOutput out;
    auto &rec = out.record;
    rec["version"] = VERSION_STRING;
    rec["command"] = "weights";
    rec["noise"] = readout_model_to_json(model);
    rec["eta"] = eta;
    rec["overhead_bound"] = eta < 0.5 ? ordered_json(overhead_bound(eta)) : ordered_json(nullptr);
    rec["weights"] = weights_to_json(*w);
    rec["wall_time_s"] = seconds_since(start);
    return out;
}

/// Synthetic calibration: prepare |0...0>, read out under the given noise, estimate q̂.
///
/// Config: {"noise": model | {"type": "asymmetric", "matrix": M}, "shots", "seed", "bfa"}.
inline CommandOutput calibrate_command(const json &j, const Overrides &o) {
    auto start = std::chrono::steady_clock::now();
    check_keys(j, {"noise", "shots", "seed", "bfa", "output"}, "calibrate config");
    const json &nj = require_key(j, "noise", "calibrate config");
    uint64_t shots = j.contains("shots") ? get_unsigned(j["shots"], "shots") : 100000;
    uint64_t seed = j.contains("seed") ? get_unsigned(j["seed"], "seed") : 0;
    bool bfa = !j.contains("bfa") || get_bool(j["bfa"], "bfa");
    if (o.shots) {
        shots = *o.shots;
    }
    if (o.seed) {
        seed = *o.seed;
    }
    if (shots == 0) {
        throw SchemaError("shots must be positive");
    }
    NoiseInjector noise;
    SyndromeDistribution q_true;
    int m = 0;
    require_object(nj, "noise");
    if (nj.contains("type") && nj["type"] == "asymmetric") {
        check_keys(nj, {"type", "matrix"}, "asymmetric calibration noise");
        ConfusionMatrix matrix = confusion_matrix_from_json(require_key(nj, "matrix", "asymmetric noise"));
        m = matrix.num_bits();
        q_true = symmetrize(matrix);
        noise = NoiseInjector::asymmetric({matrix}, bfa);
    } else {
        if (!bfa) {
            throw SchemaError("syndrome noise always uses twirling; bfa = false needs an asymmetric matrix");
        }
        ReadoutModel model = readout_model_from_json(nj);
        m = measurement_count(model);
        q_true = expand(model);
        noise = NoiseInjector::syndrome(model);
    }
    if (m < 1) {
        throw SchemaError("calibration needs at least one measured bit");
    }
    require_within_cap(m, materialization_cap(), "calibration circuit");
    DynamicCircuit circuit;
    circuit.num_qubits = m;
    FeedforwardLayer layer;
    for (int i = 0; i < m; i++) {
        layer.measured.push_back(i);
    }
    layer.table.assign(size_t{1} << m, GateList{});
    circuit.layers.push_back(layer);
    ShotRunner runner(circuit, noise);

    std::vector<CalibrationRecord> records;
    records.reserve(shots);
    for (uint64_t k = 0; k < shots; k++) {
        Rng rng = Rng::for_stream(seed, {0, k});
        ShotOutcome shot = runner.run(ShotRunner::NO_GROUP, 0, rng);
        records.push_back(
            CalibrationRecord{BitString::zeros(m), BitString(shot.reported_bits, m), BitString(shot.twirl_bits, m)});
    }
    Calibration cal = calibrate(records);

    CommandOutput out;
    auto &rec = out.record;
    rec["version"] = VERSION_STRING;
    rec["command"] = "calibrate";
    rec["num_bits"] = m;
    rec["shots"] = shots;
    rec["seed"] = seed;
    rec["bfa"] = bfa;
    rec["q_hat"] = cal.q_hat.probabilities();
    rec["counts"] = cal.counts;
    rec["q_true"] = q_true.probabilities();
    rec["total_variation"] = total_variation(cal.q_hat, q_true);
    rec["wall_time_s"] = seconds_since(start);
    std::ostringstream csv;
    csv << "syndrome,count,q_hat,q_true\n";
    for (size_t s = 0; s < cal.counts.size(); s++) {
        csv << BitString(s, m).str() << ',' << cal.counts[s] << ',' << format_double(cal.q_hat[s]) << ','
            << format_double(q_true[s]) << '\n';
    }
    out.csv = csv.str();
    return out;
}

/// Mitigation modes compared by `bench` unless the config names one.
inline std::vector<MitigationSpec> default_bench_modes(int m) {
    std::vector<MitigationSpec> modes;
    modes.push_back(MitigationSpec{"none", 1, Consensus::Majority, std::nullopt});
    modes.push_back(MitigationSpec{"rep", 3, Consensus::Majority, std::nullopt});
    modes.push_back(MitigationSpec{"rep", 2, Consensus::All, std::nullopt});
    modes.push_back(MitigationSpec{"prom-tensored", 1, Consensus::Majority, std::nullopt});
    modes.push_back(MitigationSpec{"prom-layered", 1, Consensus::Majority, std::nullopt});
    if (m <= std::min(materialization_cap(), 12)) {
        modes.push_back(MitigationSpec{"prom-general", 1, Consensus::Majority, std::nullopt});
    }
    return modes;
}

inline std::string mode_label(const MitigationSpec &s) {
    if (s.mode == "rep") {
        return std::string("rep-") + consensus_name(s.consensus) + "-r" + std::to_string(s.r);
    }
    return s.mode;
}

/// Repetition baselines against PROM on the same experiment, noise and seed.
///
/// A config whose mitigation mode is not "none" benches that mode alone against no mitigation.
inline CommandOutput bench_command(RunConfig c, const Overrides &o) {
    auto start = std::chrono::steady_clock::now();
    apply_overrides(c, o);
    RunConfig base = c;
    base.mitigation = MitigationSpec{};
    Experiment plain = build_experiment(base);
    std::vector<MitigationSpec> modes;
    if (c.mitigation.mode == "none") {
        modes = default_bench_modes(plain.circuit.measurement_count());
    } else {
        modes = {MitigationSpec{}, c.mitigation};
    }

    CommandOutput out;
    auto &rec = out.record;
    rec["version"] = VERSION_STRING;
    rec["command"] = "bench";
    rec["config"] = config_echo(c);
    rec["modes"] = ordered_json::array();
    std::string csv = std::string("mode,") + CSV_HEADER + "\n";
    for (const auto &spec : modes) {
        RunConfig rc = c;
        rc.mitigation = spec;
        Experiment e = build_experiment(rc);
        NoiseInjector noise = build_noise(rc, e.circuit);
        auto weights = build_weights(rc, noise, e.circuit);
        ShotRunner runner(e.circuit, noise, rc.terminal_rem);
        const std::string label = mode_label(spec);
        TrialTable table = run_trials(rc, e, runner, weights ? &*weights : nullptr, o.workers, label + ",");
        ordered_json mj;
        mj["label"] = label;
        mj["mitigation"] = mitigation_summary(rc, noise, e.circuit, weights);
        mj["circuit"] = circuit_summary(e.circuit, runner.groups().size());
        mj["trials"] = table.trials;
        rec["modes"].push_back(mj);
        csv += table.csv_rows;
    }
    rec["shots_per_group"] = c.shots;
    rec["seed"] = c.seed;
    rec["wall_time_s"] = seconds_since(start);
    out.csv = csv;
    return out;
}

}  // namespace promkit::cli
