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

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "rfshare/detection.hpp"
#include "rfshare/experiment/config.hpp"
#include "rfshare/experiment/runner.hpp"

namespace rfshare::experiment {

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct DetectorSummary {
    std::size_t passes = 0;
    std::size_t fails = 0;
    double pass_rate = 0.0;
    double fail_rate = 0.0;
};

struct SummaryReport {
    std::size_t trials = 0;
    std::uint64_t master_seed = 0;
    /// Ordered d1, d2, d3 for the enabled detectors.
    std::map<std::string, DetectorSummary> detectors;
    double mean_s = 0.0;
    double stddev_s = 0.0;
    /// Estimate versus z_A, degrees.
    double mean_angle_error_deg = 0.0;
    /// Estimate versus R_e z_A, degrees; rotation attacks only.
    std::optional<double> mean_attacked_angle_error_deg;
    /// Mean rotation_angle(R_e), degrees; rotation attacks only.
    std::optional<double> mean_mismatch_angle_deg;
    Json config;
};

inline double to_degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

inline SummaryReport summarize(std::span<const TrialResult> results, const ScenarioConfig& config) {
    if (results.empty()) throw ContractError("summarize: no trial results");
    SummaryReport r;
    r.trials = results.size();
    r.master_seed = config.master_seed;
    r.config = to_json(config);

    auto tally = [&](const std::string& name, auto member) {
        DetectorSummary d;
        for (const auto& t : results) {
            const auto& v = t.*member;
            if (!v) throw ContractError("summarize: trial " + std::to_string(t.trial_index) +
                                        " lacks a " + name + " verdict");
            (v->passed ? d.passes : d.fails)++;
        }
        const double n = static_cast<double>(results.size());
        d.pass_rate = static_cast<double>(d.passes) / n;
        d.fail_rate = static_cast<double>(d.fails) / n;
        r.detectors[name] = d;
    };
    if (config.detectors.d1) tally("d1", &TrialResult::d1);
    if (config.detectors.d2) tally("d2", &TrialResult::d2);
    if (config.detectors.d3) tally("d3", &TrialResult::d3);

    const double n = static_cast<double>(results.size());
    double sum_s = 0.0, sum_err = 0.0, sum_att = 0.0, sum_mis = 0.0;
    for (const auto& t : results) {
        sum_s += t.estimate.s_statistic;
        sum_err += t.angle_error;
        if (t.attacked_angle_error) sum_att += *t.attacked_angle_error;
        sum_mis += t.mismatch_angle;
    }
    r.mean_s = sum_s / n;
    double ss = 0.0;
    for (const auto& t : results) ss += (t.estimate.s_statistic - r.mean_s) * (t.estimate.s_statistic - r.mean_s);
    r.stddev_s = results.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    r.mean_angle_error_deg = to_degrees(sum_err / n);
    if (config.attack.is_rotation()) {
        r.mean_attacked_angle_error_deg = to_degrees(sum_att / n);
        r.mean_mismatch_angle_deg = to_degrees(sum_mis / n);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Shortest representation that parses back to the same double.
inline std::string shortest_double(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// 17 significant digits; always round-trips.
inline std::string json_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Writes `j` with floating-point numbers at 17 significant digits.
inline void write_json(std::ostream& os, const Json& j, int indent = 2, int depth = 0) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) os << ",\n";
                first = false;
                os << pad << Json(k).dump() << ": ";
                write_json(os, v, indent, depth + 1);
            }
            os << "\n" << close_pad << "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // Short numeric arrays stay on one line.
            const bool inline_array =
                j.size() <= 4 && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
            os << (inline_array ? "[" : "[\n");
            bool first = true;
            for (const auto& v : j) {
                if (!first) os << (inline_array ? ", " : ",\n");
                first = false;
                if (!inline_array) os << pad;
                write_json(os, v, indent, depth + 1);
            }
            os << (inline_array ? "]" : "\n" + close_pad + "]");
            return;
        }
        case Json::value_t::number_float: os << json_double(j.get<double>()); return;
        default: os << j.dump(); return;
    }
}

namespace detail {

inline Json verdict_json(const Verdict& v) {
    Json j;
    j["statistic"] = v.statistic;
    j["threshold"] = v.threshold;
    j["passed"] = v.passed;
    Json d = Json::object();
    for (const auto& [k, x] : v.detail) d[k] = x;
    j["detail"] = d;
    return j;
}

inline Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace detail

inline Json trial_json(const TrialResult& t) {
    using detail::vector_json;
    Json j;
    j["trial_index"] = t.trial_index;
    j["seed"] = t.seed;
    j["cosines"] = Json::array({t.estimate.raw_cosines.x, t.estimate.raw_cosines.y, t.estimate.raw_cosines.z});
    j["s_statistic"] = t.estimate.s_statistic;
    j["direction_bob"] = vector_json(t.estimate.direction);
    j["direction_lab"] = vector_json(t.estimate_lab);
    j["transmitted_direction"] = vector_json(t.z_a);
    j["attacked_direction"] = t.attacked_direction ? vector_json(*t.attacked_direction) : Json(nullptr);
    j["angle_error_rad"] = t.angle_error;
    j["attacked_angle_error_rad"] = detail::opt_json(t.attacked_angle_error);
    j["mismatch_angle_rad"] = t.mismatch_angle;
    Json rates = Json::object();
    const char* names[3] = {"x", "y", "z"};
    for (int m = 0; m < 3; ++m) {
        rates[names[m]] = {{"errors", t.rates.axes[m].errors}, {"trials", t.rates.axes[m].trials}};
    }
    j["error_counts"] = rates;
    Json verdicts = Json::object();
    if (t.d1) verdicts["d1"] = detail::verdict_json(*t.d1);
    if (t.d2) verdicts["d2"] = detail::verdict_json(*t.d2);
    if (t.d3) verdicts["d3"] = detail::verdict_json(*t.d3);
    j["verdicts"] = verdicts;
    return j;
}

inline Json summary_json(const SummaryReport& r) {
    Json j;
    j["trials"] = r.trials;
    j["master_seed"] = r.master_seed;
    Json det = Json::object();
    for (const auto& [name, d] : r.detectors) {
        det[name] = {{"passes", d.passes}, {"fails", d.fails}, {"pass_rate", d.pass_rate},
                     {"fail_rate", d.fail_rate}};
    }
    j["detectors"] = det;
    j["mean_s"] = r.mean_s;
    j["stddev_s"] = r.stddev_s;
    j["mean_angle_error_deg"] = r.mean_angle_error_deg;
    j["mean_attacked_angle_error_deg"] = detail::opt_json(r.mean_attacked_angle_error_deg);
    j["mean_mismatch_angle_deg"] = detail::opt_json(r.mean_mismatch_angle_deg);
    return j;
}

/// One document: {"summary", "config", "trials": [...]}.
inline Json report_json(const SummaryReport& r, std::span<const TrialResult> results) {
    Json j;
    j["summary"] = summary_json(r);
    j["config"] = r.config;
    Json trials = Json::array();
    for (const auto& t : results) trials.push_back(trial_json(t));
    j["trials"] = trials;
    return j;
}

inline void write_report_json(std::ostream& os, const SummaryReport& r,
                              std::span<const TrialResult> results) {
    write_json(os, report_json(r, results));
    os << "\n";
}

/// CSV columns, in order.
inline std::vector<std::string> csv_columns(const SummaryReport& r) {
    std::vector<std::string> cols{"trial_index", "s_statistic", "cos_x", "cos_y", "cos_z", "angle_err_deg"};
    for (const auto& [name, _] : r.detectors) cols.push_back(name + "_pass");
    return cols;
}

/// Commented summary block, a header row, then one row per trial.
inline void write_report_csv(std::ostream& os, const SummaryReport& r,
                             std::span<const TrialResult> results) {
    os << "# rfshare report\n";
    os << "# trials: " << r.trials << "\n";
    os << "# master_seed: " << r.master_seed << "\n";
    for (const auto& [name, d] : r.detectors) {
        os << "# " << name << ": passes=" << d.passes << " fails=" << d.fails
           << " pass_rate=" << shortest_double(d.pass_rate) << "\n";
    }
    os << "# mean_s: " << shortest_double(r.mean_s) << "\n";
    os << "# stddev_s: " << shortest_double(r.stddev_s) << "\n";
    os << "# mean_angle_error_deg: " << shortest_double(r.mean_angle_error_deg) << "\n";
    if (r.mean_attacked_angle_error_deg) {
        os << "# mean_attacked_angle_error_deg: " << shortest_double(*r.mean_attacked_angle_error_deg) << "\n";
        os << "# mean_mismatch_angle_deg: " << shortest_double(*r.mean_mismatch_angle_deg) << "\n";
    }
    os << "# config: " << r.config.dump() << "\n";

    const auto cols = csv_columns(r);
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
    for (const auto& t : results) {
        os << t.trial_index << "," << shortest_double(t.estimate.s_statistic) << ","
           << shortest_double(t.estimate.raw_cosines.x) << "," << shortest_double(t.estimate.raw_cosines.y)
           << "," << shortest_double(t.estimate.raw_cosines.z) << ","
           << shortest_double(to_degrees(t.angle_error));
        for (const auto& [name, _] : r.detectors) {
            const auto& v = name == "d1" ? t.d1 : name == "d2" ? t.d2 : t.d3;
            os << "," << (v && v->passed ? 1 : 0);
        }
        os << "\n";
    }
}

enum class ReportFormat { Json, Csv };

/// Writes the report to `path`.
inline void emit_report(const SummaryReport& r, std::span<const TrialResult> results,
                        ReportFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    if (format == ReportFormat::Json) write_report_json(out, r, results);
    else write_report_csv(out, r, results);
    out.flush();
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace rfshare::experiment
