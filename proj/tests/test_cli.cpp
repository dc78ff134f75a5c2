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


#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "promkit/cli/commands.hpp"

namespace promkit::cli {
namespace {

const ordered_json &find_named(const ordered_json &list, const std::string &name) {
    for (const auto &item : list) {
        if (item["name"] == name) {
            return item;
        }
    }
    throw std::runtime_error("no entry named " + name);
}

RunConfig config(const char *text) {
    return parse_run_config(json::parse(text));
}

TEST(Config, RejectsUnknownAndMissingKeys) {
    EXPECT_THROW(config(R"({"experiment": "reset", "shotz": 5})"), SchemaError);
    EXPECT_THROW(config(R"({"params": {}})"), SchemaError);
    EXPECT_THROW(config(R"({"experiment": "reset", "shots": -3})"), SchemaError);
    EXPECT_THROW(config(R"({"experiment": "reset", "shots": "many"})"), SchemaError);
    EXPECT_THROW(config(R"({"experiment": "reset", "mitigation": {"mode": "rep", "r": 3}})"), SchemaError);
    EXPECT_THROW(config(R"({"experiment": "reset", "mitigation": "prom-magic"})"), SchemaError);
    EXPECT_NO_THROW(config(R"({"experiment": "reset"})"));
}

TEST(Config, DefaultsAndEcho) {
    auto c = config(R"({"experiment": "teleport", "output": "x.json"})");
    EXPECT_EQ(c.shots, 10000u);
    EXPECT_EQ(c.trials, 1u);
    EXPECT_EQ(c.seed, 0u);
    EXPECT_EQ(c.mitigation.mode, "none");
    auto echo = config_echo(c);
    EXPECT_FALSE(echo.contains("output"));
    EXPECT_EQ(echo["experiment"], "teleport");
}

TEST(Config, ExperimentParamsAreChecked) {
    EXPECT_THROW(build_experiment(config(R"({"experiment": "ghz", "params": {"b": 1, "p": 1}})")), std::invalid_argument);
    EXPECT_THROW(build_experiment(config(R"({"experiment": "ghz", "params": {"b": 2, "q": 1}})")), SchemaError);
    EXPECT_THROW(build_experiment(config(R"({"experiment": "warp"})")), SchemaError);
    auto e = build_experiment(config(R"({"experiment": "ghz", "params": {"b": 3, "p": 2}})"));
    EXPECT_EQ(e.circuit.num_qubits, 9);
    EXPECT_EQ(e.ghz_qubits, 9);
}

TEST(JsonIo, CircuitRoundTripsThroughBuilderSemantics) {
    auto c = circuit_from_json(json::parse(R"({
        "num_qubits": 1,
        "prep": [["h", 0]],
        "layers": [{"measure": [0], "table": {"0": [], "1": [["x", 0]]}}],
        "observables": [{"projector": [0], "name": "zero"}, "Z"]
    })"));
    auto t = exact_trajectory_tensor(c);
    EXPECT_NEAR(t.trace(0), 1.0, 1e-15);
    EXPECT_THROW(
        circuit_from_json(json::parse(R"({"num_qubits": 1, "layers": [{"measure": [0], "table": {"0": []}}]})")),
        SchemaError);
}

TEST(JsonIo, FormatDoubleRoundTrips) {
    for (double x : {0.1, 1.0 / 3, 1e-300, -2.5, 0.0, 123456789.125}) {
        EXPECT_EQ(std::stod(format_double(x)), x);
    }
    EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(WeightsCommand, TwoOutcomeExample) {
    auto out = weights_command(json::parse(R"({"noise": {"type": "general", "q": [0.9, 0.1]}})")).record;
    EXPECT_NEAR(out["weights"]["xi"].get<double>(), 1.25, 1e-12);
    EXPECT_NEAR(out["overhead_bound"].get<double>(), 1.25, 1e-12);
}

TEST(WeightsCommand, OverheadBoundAtThirtyPercent) {
    auto out = weights_command(json::parse(R"({"noise": {"type": "fully_tensored", "rates": [0.3]}})")).record;
    EXPECT_NEAR(out["eta"].get<double>(), 0.3, 1e-15);
    EXPECT_NEAR(out["overhead_bound"].get<double>(), 2.5, 1e-12);
    EXPECT_NEAR(out["weights"]["xi"].get<double>(), 2.5, 1e-12);
}

TEST(WeightsCommand, SingularChannelThrows) {
    EXPECT_THROW(
        weights_command(json::parse(R"({"noise": {"type": "general", "q": [0.5, 0.5]}})")), SingularChannel);
}

TEST(OracleCommand, ResetMitigatesExactly) {
    auto rec = oracle_command(
                   config(R"({"experiment": "reset", "params": {"n": 2}, "noise": {"type": "uniform", "rate": 0.1}})"),
                   Overrides{})
                   .record;
    EXPECT_LT(rec["max_mitigated_deviation"].get<double>(), 1e-12);
    EXPECT_NEAR(find_named(rec["ideal"], "system_zero")["value"].get<double>(), 1.0, 1e-12);
    // Each flipped syndrome bit leaves its system qubit excited.
    EXPECT_NEAR(find_named(rec["raw"], "system_zero")["value"].get<double>(), 0.81, 1e-12);
    EXPECT_EQ(rec["per_mask"].size(), 4u);
}

TEST(OracleCommand, TeleportRawErrorWithinEnvelope) {
    auto c = config(R"({"experiment": "teleport", "params": {"k": 2}, "noise": {"type": "uniform", "rate": 0.05}})");
    auto rec = oracle_command(c, Overrides{}).record;
    double raw = find_named(rec["derived"]["raw"], "euclidean_error")["estimate"].get<double>();
    double eta = rec["channel"]["eta"].get<double>();
    EXPECT_GT(raw, 0.01);
    EXPECT_LE(raw, std::sqrt(3.0) * raw_error_bound(eta, 1.0));
    EXPECT_LT(find_named(rec["derived"]["mitigated"], "euclidean_error")["estimate"].get<double>(), 1e-12);
}

TEST(RunCommand, ResetWithinFiveSigma) {
    auto rec = run_command(
                   config(R"({"experiment": "reset", "noise": {"type": "uniform", "rate": 0.1},
                              "mitigation": "prom-tensored", "shots": 40000, "seed": 3})"),
                   Overrides{})
                   .record;
    const auto &obs = find_named(rec["trials"][0]["observables"], "system_zero");
    EXPECT_NEAR(obs["estimate"].get<double>(), 1.0, 5 * obs["stderr"].get<double>());
    EXPECT_NEAR(rec["xi"].get<double>(), 1.25, 1e-12);
}

TEST(RunCommand, CsvHasOneRowPerValue) {
    auto out = run_command(config(R"({"experiment": "teleport", "shots": 2000, "trials": 2})"), Overrides{});
    std::istringstream lines(out.csv);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, CSV_HEADER);
    int rows = 0;
    for (std::string line; std::getline(lines, line);) {
        rows++;
    }
    // Three observables plus four derived values per trial.
    EXPECT_EQ(rows, 2 * 7);
}

std::string without_wall_time(ordered_json rec) {
    rec.erase("wall_time_s");
    return rec.dump();
}

TEST(RunCommand, WorkerCountDoesNotChangeRecords) {
    auto c = config(R"({"experiment": "ghz", "params": {"b": 2, "p": 1}, "noise": {"type": "uniform", "rate": 0.05},
                        "mitigation": "prom-general", "shots": 5000, "trials": 2, "seed": 11})");
    Overrides one, many;
    many.workers = 5;
    auto a = run_command(c, one), b = run_command(c, many);
    EXPECT_EQ(without_wall_time(a.record), without_wall_time(b.record));
    EXPECT_EQ(a.csv, b.csv);
}

TEST(RunCommand, OverridesApply) {
    Overrides o;
    o.shots = 100;
    o.seed = 9;
    auto rec = run_command(config(R"({"experiment": "reset"})"), o).record;
    EXPECT_EQ(rec["shots_per_group"], 100u);
    EXPECT_EQ(rec["seed"], 9u);
}

TEST(CalibrateCommand, RecoversSyndromeDistribution) {
    auto rec = calibrate_command(
                   json::parse(R"({"noise": {"type": "fully_tensored", "rates": [0.1, 0.2]}, "shots": 100000, "seed": 4})"),
                   Overrides{})
                   .record;
    EXPECT_LT(rec["total_variation"].get<double>(), 0.01);
    EXPECT_EQ(rec["q_hat"].size(), 4u);
}

TEST(BenchCommand, ListsDefaultModes) {
    auto rec = bench_command(
                   config(R"({"experiment": "reset", "noise": {"type": "uniform", "rate": 0.1}, "shots": 500})"),
                   Overrides{})
                   .record;
    EXPECT_GE(rec["modes"].size(), 5u);
}

#ifdef PROMKIT_CLI_PATH
int run_binary(const std::string &args) {
    std::string cmd = std::string(PROMKIT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string write_temp(const std::string &name, const std::string &text) {
    auto dir = std::filesystem::temp_directory_path() / "promkit_cli_test";
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream(path) << text;
    return path.string();
}

TEST(Binary, ExitCodes) {
    EXPECT_EQ(run_binary("--version"), 0);
    EXPECT_EQ(run_binary("run"), 1);
    EXPECT_EQ(run_binary("run --config " + write_temp("bad.json", R"({"experiment": "reset", "nope": 1})")), 1);
    EXPECT_EQ(run_binary("weights --config " + write_temp("singular.json", R"({"noise": {"type": "general", "q": [0.5, 0.5]}})")), 2);
    EXPECT_EQ(
        run_binary("oracle --config " + write_temp("big.json", R"({"experiment": "ghz", "params": {"b": 8, "p": 1}})")),
        3);
    EXPECT_EQ(run_binary("weights --config " + write_temp("ok.json", R"({"noise": {"type": "general", "q": [0.9, 0.1]}})")), 0);
}
#endif

}  // namespace
}  // namespace promkit::cli
