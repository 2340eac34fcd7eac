// Copyright 2026 The rfshare Authors
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

// rfsim: command-line driver for reference-frame sharing scenarios.
//
//   rfsim run --config <path> [--seed S] [--trials T] [--out <path>] [--format json|csv]
//   rfsim sweep --config <path> --param <key> --values <list> --out <dir>
//   rfsim selftest
//
// Exit codes: 0 success, 1 config error, 2 runtime or I/O error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rfshare/experiment/config.hpp"
#include "rfshare/experiment/report.hpp"
#include "rfshare/experiment/runner.hpp"
#include "rfshare/experiment/selftest.hpp"

namespace ex = rfshare::experiment;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
};

ex::Json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ex::IoError("cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return ex::Json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ex::ConfigError("", std::string("syntax error in ") + path + ": " + e.what());
    }
}

ex::ScenarioConfig build_config(const ex::Json& doc, const Overrides& o) {
    ex::ScenarioConfig c = ex::scenario_config_from_json(doc);
    if (o.seed) c.master_seed = *o.seed;
    if (o.trials) {
        if (*o.trials < 1) throw ex::ConfigError("trials", "must be at least 1 (from --trials)");
        c.trials = *o.trials;
    }
    return c;
}

ex::ReportFormat pick_format(const std::string& format, const std::string& out) {
    if (format == "json") return ex::ReportFormat::Json;
    if (format == "csv") return ex::ReportFormat::Csv;
    if (format.empty() && std::filesystem::path(out).extension() == ".csv") return ex::ReportFormat::Csv;
    return ex::ReportFormat::Json;
}

/// "n_qubits" -> "/n_qubits", "detectors.d1.k_sigma" -> "/detectors/d1/k_sigma".
nlohmann::json_pointer<std::string> pointer_for(const std::string& dotted) {
    std::string p;
    std::stringstream ss(dotted);
    std::string part;
    while (std::getline(ss, part, '.')) p += "/" + part;
    return nlohmann::json_pointer<std::string>(p);
}

/// Splits on commas outside brackets, so "[0,0,1],[1,0,0]" is two values.
std::vector<std::string> split_values(const std::string& list) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char ch : list) {
        if (ch == '[' || ch == '{') ++depth;
        if (ch == ']' || ch == '}') --depth;
        if (ch == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string sanitize(const std::string& s) {
    std::string out;
    for (char ch : s) {
        const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' || ch == '_';
        out += ok ? ch : '_';
    }
    return out;
}

void log_runtime(const char* what, std::chrono::steady_clock::time_point start) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << what << " finished in " << secs << " s\n";
}

int cmd_run(const std::string& config_path, const Overrides& o, const std::string& out,
            const std::string& format, unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    const ex::ScenarioConfig config = build_config(load_document(config_path), o);
    const auto results = ex::run_scenario(config, threads);
    const auto report = ex::summarize(results, config);
    const auto fmt = pick_format(format, out);
    if (out.empty() || out == "-") {
        if (fmt == ex::ReportFormat::Json) ex::write_report_json(std::cout, report, results);
        else ex::write_report_csv(std::cout, report, results);
    } else {
        ex::emit_report(report, results, fmt, out);
    }
    log_runtime("run", start);
    return 0;
}

int cmd_sweep(const std::string& config_path, const Overrides& o, const std::string& param,
              const std::string& values, const std::string& out_dir, const std::string& format,
              unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    const ex::Json base = load_document(config_path);
    const auto fmt = format == "csv" ? ex::ReportFormat::Csv : ex::ReportFormat::Json;
    const auto items = split_values(values);
    if (items.empty()) throw ex::ConfigError("--values", "no values given");

    // Validate every point before running any of them.
    std::vector<ex::ScenarioConfig> configs;
    for (const auto& v : items) {
        ex::Json doc = base;
        ex::Json value;
        try {
            value = ex::Json::parse(v);
        } catch (const nlohmann::json::parse_error&) {
            value = v;
        }
        try {
            doc[pointer_for(param)] = value;
        } catch (const nlohmann::json::exception& e) {
            throw ex::ConfigError(param, std::string("cannot set sweep parameter: ") + e.what());
        }
        configs.push_back(build_config(doc, o));
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw ex::IoError("cannot create " + out_dir + ": " + ec.message());

    std::ofstream index(std::filesystem::path(out_dir) / "sweep.csv", std::ios::binary | std::ios::trunc);
    if (!index) throw ex::IoError("cannot write sweep index in " + out_dir);
    index << "# sweep over " << param << "\n";
    bool header = false;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto results = ex::run_scenario(configs[i], threads);
        const auto report = ex::summarize(results, configs[i]);
        const std::string file = "point_" + std::to_string(i) + "_" + sanitize(items[i]) +
                                 (fmt == ex::ReportFormat::Csv ? ".csv" : ".json");
        ex::emit_report(report, results, fmt, (std::filesystem::path(out_dir) / file).string());
        if (!header) {
            index << "value,file,trials,mean_s,stddev_s,mean_angle_err_deg";
            for (const auto& [name, _] : report.detectors) index << "," << name << "_pass_rate";
            index << "\n";
            header = true;
        }
        std::string value = items[i];
        if (value.find(',') != std::string::npos) value = "\"" + value + "\"";
        index << value << "," << file << "," << report.trials << "," << ex::shortest_double(report.mean_s)
              << "," << ex::shortest_double(report.stddev_s) << ","
              << ex::shortest_double(report.mean_angle_error_deg);
        for (const auto& [_, d] : report.detectors) index << "," << ex::shortest_double(d.pass_rate);
        index << "\n";
    }
    if (!index.flush()) throw ex::IoError("failed writing sweep index");
    log_runtime("sweep", start);
    return 0;
}

int cmd_selftest() {
    const auto checks = ex::run_selftest();
    bool ok = true;
    for (const auto& c : checks) {
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << " (" << c.detail << ")\n";
        ok = ok && c.passed;
    }
    return ok ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulator for secret reference-frame sharing under attack", "rfsim"};
    app.require_subcommand(1);

    std::string config_path, out, format, param, values;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    unsigned threads = 1;

    auto* run = app.add_subcommand("run", "Run one scenario and write a report");
    run->add_option("--config", config_path, "Scenario JSON document")->required();
    run->add_option("--seed", seed, "Override master_seed");
    run->add_option("--trials", trials, "Override trials");
    run->add_option("--out", out, "Report path (stdout when omitted)");
    run->add_option("--format", format, "json or csv (default: from --out extension, else json)")
        ->check(CLI::IsMember({"json", "csv"}));
    run->add_option("--threads", threads, "Worker threads; output does not depend on it")
        ->check(CLI::PositiveNumber);

    auto* sweep = app.add_subcommand("sweep", "Run a scenario once per value of one config key");
    sweep->add_option("--config", config_path, "Scenario JSON document")->required();
    sweep->add_option("--param", param, "Dotted config key, e.g. n_qubits or detectors.d1.k_sigma")->required();
    sweep->add_option("--values", values, "Comma-separated JSON values")->required();
    sweep->add_option("--out", out, "Output directory")->required();
    sweep->add_option("--seed", seed, "Override master_seed");
    sweep->add_option("--trials", trials, "Override trials");
    sweep->add_option("--format", format, "json or csv per point (default json)")
        ->check(CLI::IsMember({"json", "csv"}));
    sweep->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    app.add_subcommand("selftest", "Run the analytic-oracle checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    const Overrides o{seed, trials};
    try {
        if (*run) return cmd_run(config_path, o, out, format, threads);
        if (*sweep) return cmd_sweep(config_path, o, param, values, out, format, threads);
        return cmd_selftest();
    } catch (const ex::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
