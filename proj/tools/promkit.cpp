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

// promkit command-line driver.
//
// Exit codes: 0 ok, 1 usage or schema error, 2 singular channel, 3 size cap exceeded.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "promkit/cli/commands.hpp"

namespace {

namespace cli = promkit::cli;

enum ExitCode : int { OK = 0, USAGE = 1, SINGULAR = 2, SIZE_CAP = 3 };

struct Args {
    std::string config;
    std::string out;
    std::string csv;
    std::optional<uint64_t> seed;
    std::optional<uint64_t> shots;
    std::optional<uint64_t> trials;
    int workers = 1;
};

void write_text(const std::string &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw cli::SchemaError("cannot write '" + path + "'");
    }
    f << text;
}

/// JSON to --out (or the config's "output"), stdout when neither is set.
void emit(const cli::CommandOutput &result, const std::string &out, const std::string &csv) {
    std::string text = result.record.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        write_text(out, text);
    }
    if (!csv.empty() && !result.csv.empty()) {
        write_text(csv, result.csv);
    }
}

cli::Overrides overrides(const Args &a) {
    cli::Overrides o;
    o.seed = a.seed;
    o.shots = a.shots;
    o.trials = a.trials;
    o.workers = a.workers;
    return o;
}

/// Relative output paths in a config file resolve against the config's directory.
std::string resolve(const std::string &flag, const std::string &from_config, const std::filesystem::path &base) {
    if (!flag.empty()) {
        return flag;
    }
    if (from_config.empty()) {
        return "";
    }
    std::filesystem::path p(from_config);
    return p.is_absolute() ? p.string() : (base / p).string();
}

int dispatch(const std::string &command, const Args &a) {
    std::filesystem::path path(a.config);
    if (command == "run" || command == "oracle" || command == "bench") {
        cli::RunConfig c = cli::load_run_config(path);
        cli::CommandOutput result = command == "run"      ? cli::run_command(c, overrides(a))
                                    : command == "oracle" ? cli::oracle_command(c, overrides(a))
                                                          : cli::bench_command(c, overrides(a));
        emit(result, resolve(a.out, c.output, c.base_dir), resolve(a.csv, c.csv, c.base_dir));
        return OK;
    }
    cli::json j = cli::read_json_file(path);
    std::string from_config;
    if (j.is_object() && j.contains("output")) {
        from_config = cli::get_string(j["output"], "output");
    }
    std::string out = resolve(a.out, from_config, path.parent_path());
    if (command == "weights") {
        emit(cli::weights_command(j), out, "");
    } else {
        emit(cli::calibrate_command(j, overrides(a)), out, a.csv);
    }
    return OK;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Probabilistic readout error mitigation toolkit"};
    app.set_version_flag("--version", std::string(cli::VERSION_STRING));
    app.require_subcommand(1);

    Args args;
    struct Spec {
        const char *name;
        const char *help;
        bool sampling;
    };
    const Spec specs[] = {
        {"run", "Estimate the configured experiment's observables by sampling", true},
        {"oracle", "Exact ideal, per-mask and mitigated expectations", false},
        {"weights", "Solve the mitigation weights for a noise model", false},
        {"calibrate", "Generate synthetic calibration shots and estimate the syndrome distribution", true},
        {"bench", "Compare repetition baselines and mitigation modes", true},
    };
    for (const auto &s : specs) {
        CLI::App *sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", args.config, "JSON config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", args.out, "Write the JSON record here instead of stdout");
        if (std::string(s.name) != "weights") {
            sub->add_option("--seed", args.seed, "Override the config seed");
        }
        if (s.sampling) {
            sub->add_option("--shots", args.shots, "Override shots per measurement group");
            sub->add_option("--csv", args.csv, "Also write per-trial rows as CSV");
        }
        if (std::string(s.name) == "run" || std::string(s.name) == "bench") {
            sub->add_option("--trials", args.trials, "Override the trial count");
            sub->add_option("--workers", args.workers, "Worker threads; results do not depend on it")
                ->check(CLI::Range(1, 1024));
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? OK : USAGE;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return dispatch(command, args);
    } catch (const promkit::SingularChannel &e) {
        std::cerr << "error: " << e.what() << "\n";
        return SINGULAR;
    } catch (const promkit::SizeCapExceeded &e) {
        std::cerr << "error: " << e.what() << "\n";
        return SIZE_CAP;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return USAGE;
    }
}
