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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rfshare/geometry.hpp"

namespace rfshare::experiment {

using Json = nlohmann::ordered_json;

/// Invalid scenario document. `key_path()` names the offending entry
/// ("attack.axis", "detectors.d2.rounds", ...); empty for syntax errors.
class ConfigError : public std::runtime_error {
   public:
    ConfigError(std::string key_path, const std::string& message)
        : std::runtime_error(key_path.empty() ? message : key_path + ": " + message),
          key_path_(std::move(key_path)) {}

    const std::string& key_path() const { return key_path_; }

   private:
    std::string key_path_;
};

enum class Scenario { Protocol1, SingletTransmission };

inline const char* to_string(Scenario s) {
    return s == Scenario::Protocol1 ? "protocol1" : "singlet_transmission";
}

struct FrameSpec {
    enum class Kind { Aligned, Lab, Random, Explicit };
    Kind kind = Kind::Aligned;
    std::optional<Frame> frame;  // Explicit only
};

/// Either a fixed axis/angle or a Haar draw (optionally rejecting draws
/// with a smaller rotation angle than min_angle_deg).
struct RotationSpec {
    bool haar = true;
    UnitVector3 axis = UnitVector3::unit_z();
    double angle_deg = 0.0;
    double min_angle_deg = 0.0;
};

struct AttackSpec {
    enum class Kind { None, Rotation, RoundtripRotation, Intercept };
    Kind kind = Kind::None;
    RotationSpec rotation;
    std::optional<UnitVector3> intercept_axis;  // nullopt: fresh random axis per qubit

    bool is_rotation() const { return kind == Kind::Rotation || kind == Kind::RoundtripRotation; }
};

struct D1Params {
    double k_sigma = 4.0;
};
struct D2Params {
    std::size_t rounds = 3000;
};
struct D3Params {
    std::size_t pairs = 3000;
};

struct DetectorSet {
    std::optional<D1Params> d1;
    std::optional<D2Params> d2;
    std::optional<D3Params> d3;

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        if (d1) out.emplace_back("d1");
        if (d2) out.emplace_back("d2");
        if (d3) out.emplace_back("d3");
        return out;
    }
};

struct ScenarioConfig {
    Scenario scenario = Scenario::Protocol1;
    std::size_t n_qubits = 0;
    std::size_t trials = 0;
    std::uint64_t master_seed = 1;
    std::optional<UnitVector3> alice_direction = UnitVector3::unit_z();  // nullopt: random
    FrameSpec bob_frame;
    AttackSpec attack;
    DetectorSet detectors;
};

namespace detail {

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline std::string join_path(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

/// Rejects keys of `obj` not in `allowed`, suggesting the closest match.
inline void check_keys(const Json& obj, const std::string& path,
                       std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
        std::string_view best;
        std::size_t best_d = 4;
        for (auto cand : allowed) {
            std::size_t d = edit_distance(key, cand);
            if (cand.find(key) != std::string_view::npos) d = std::min<std::size_t>(d, 1);
            if (d < best_d) {
                best_d = d;
                best = cand;
            }
        }
        std::string msg = "unknown key";
        if (!best.empty()) msg += " (did you mean \"" + std::string(best) + "\"?)";
        throw ConfigError(join_path(path, key), msg);
    }
}

inline std::uint64_t read_unsigned(const Json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        throw ConfigError(path, "must be non-negative, got " + v.dump());
    }
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d >= 0.0 && d < 1.8e19 && std::floor(d) == d) return static_cast<std::uint64_t>(d);
    }
    throw ConfigError(path, "expected a non-negative integer, got " + v.dump());
}

inline std::size_t read_count(const Json& v, const std::string& path, std::size_t min_value) {
    const std::uint64_t n = read_unsigned(v, path);
    if (n < min_value) {
        throw ConfigError(path, "must be at least " + std::to_string(min_value) + ", got " +
                                    std::to_string(n));
    }
    return static_cast<std::size_t>(n);
}

inline double read_real(const Json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number, got " + v.dump());
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
    return d;
}

/// A 3-element array that is unit norm to 1e-9.
inline UnitVector3 read_unit_vector(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) {
        throw ConfigError(path, "expected a 3-element array, got " + v.dump());
    }
    const double x = read_real(v[0], path + "[0]");
    const double y = read_real(v[1], path + "[1]");
    const double z = read_real(v[2], path + "[2]");
    const double n = std::sqrt(x * x + y * y + z * z);
    if (std::abs(n - 1.0) > 1e-9) {
        throw ConfigError(path, "vector must be unit norm, has norm " + std::to_string(n));
    }
    return UnitVector3(x, y, z);
}

inline RotationSpec read_rotation(const Json& obj, const std::string& path) {
    RotationSpec r;
    const bool has_axis = obj.contains("axis");
    const bool has_angle = obj.contains("angle_deg");
    const bool haar = obj.contains("haar") ? [&] {
        if (!obj["haar"].is_boolean()) throw ConfigError(join_path(path, "haar"), "expected a boolean");
        return obj["haar"].get<bool>();
    }()
                                           : !(has_axis || has_angle);
    if (haar) {
        if (has_axis || has_angle) {
            throw ConfigError(join_path(path, "haar"), "cannot be combined with axis/angle_deg");
        }
        r.haar = true;
        if (obj.contains("min_angle_deg")) {
            r.min_angle_deg = read_real(obj["min_angle_deg"], join_path(path, "min_angle_deg"));
            if (r.min_angle_deg < 0.0 || r.min_angle_deg >= 179.0) {
                throw ConfigError(join_path(path, "min_angle_deg"), "must lie in [0, 179)");
            }
        }
        return r;
    }
    if (!has_axis) throw ConfigError(join_path(path, "axis"), "required for a fixed rotation");
    if (!has_angle) throw ConfigError(join_path(path, "angle_deg"), "required for a fixed rotation");
    if (obj.contains("min_angle_deg")) {
        throw ConfigError(join_path(path, "min_angle_deg"), "only applies to Haar rotations");
    }
    r.haar = false;
    r.axis = read_unit_vector(obj["axis"], join_path(path, "axis"));
    r.angle_deg = read_real(obj["angle_deg"], join_path(path, "angle_deg"));
    return r;
}

inline AttackSpec read_attack(const Json& v, const std::string& path) {
    AttackSpec a;
    std::string type;
    if (v.is_string()) {
        type = v.get<std::string>();
    } else if (v.is_object()) {
        if (!v.contains("type") || !v["type"].is_string()) {
            throw ConfigError(join_path(path, "type"), "required string");
        }
        type = v["type"].get<std::string>();
    } else {
        throw ConfigError(path, "expected a string or an object");
    }
    const Json obj = v.is_object() ? v : Json::object();
    if (type == "none") {
        check_keys(obj, path, {"type"});
        a.kind = AttackSpec::Kind::None;
    } else if (type == "rotation" || type == "roundtrip_rotation") {
        check_keys(obj, path, {"type", "haar", "axis", "angle_deg", "min_angle_deg"});
        a.kind = type == "rotation" ? AttackSpec::Kind::Rotation : AttackSpec::Kind::RoundtripRotation;
        a.rotation = read_rotation(obj, path);
    } else if (type == "intercept") {
        check_keys(obj, path, {"type", "policy", "fixed_axis"});
        a.kind = AttackSpec::Kind::Intercept;
        std::string policy = obj.contains("fixed_axis") ? "fixed" : "fresh_random";
        if (obj.contains("policy")) {
            if (!obj["policy"].is_string()) throw ConfigError(join_path(path, "policy"), "expected a string");
            policy = obj["policy"].get<std::string>();
        }
        if (policy == "fixed") {
            if (!obj.contains("fixed_axis")) {
                throw ConfigError(join_path(path, "fixed_axis"), "required for the fixed policy");
            }
            a.intercept_axis = read_unit_vector(obj["fixed_axis"], join_path(path, "fixed_axis"));
        } else if (policy == "fresh_random") {
            if (obj.contains("fixed_axis")) {
                throw ConfigError(join_path(path, "fixed_axis"), "not allowed with fresh_random");
            }
        } else {
            throw ConfigError(join_path(path, "policy"),
                              "expected \"fixed\" or \"fresh_random\", got \"" + policy + "\"");
        }
    } else {
        throw ConfigError(join_path(path, "type"),
                          "expected none, rotation, roundtrip_rotation or intercept, got \"" + type + "\"");
    }
    return a;
}

inline FrameSpec read_frame(const Json& v, const std::string& path) {
    FrameSpec f;
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "aligned") f.kind = FrameSpec::Kind::Aligned;
        else if (s == "lab") f.kind = FrameSpec::Kind::Lab;
        else if (s == "random") f.kind = FrameSpec::Kind::Random;
        else throw ConfigError(path, "expected aligned, lab, random or an object, got \"" + s + "\"");
        return f;
    }
    if (!v.is_object()) throw ConfigError(path, "expected a string or an object");
    f.kind = FrameSpec::Kind::Explicit;
    if (v.contains("x_axis") || v.contains("y_axis") || v.contains("z_axis")) {
        check_keys(v, path, {"x_axis", "y_axis", "z_axis"});
        for (const char* k : {"x_axis", "y_axis", "z_axis"}) {
            if (!v.contains(k)) throw ConfigError(join_path(path, k), "required");
        }
        try {
            f.frame = Frame(read_unit_vector(v["x_axis"], join_path(path, "x_axis")),
                            read_unit_vector(v["y_axis"], join_path(path, "y_axis")),
                            read_unit_vector(v["z_axis"], join_path(path, "z_axis")));
        } catch (const ContractError& e) {
            throw ConfigError(path, e.what());
        }
        return f;
    }
    check_keys(v, path, {"axis", "angle_deg"});
    if (!v.contains("axis")) throw ConfigError(join_path(path, "axis"), "required");
    if (!v.contains("angle_deg")) throw ConfigError(join_path(path, "angle_deg"), "required");
    const auto axis = read_unit_vector(v["axis"], join_path(path, "axis"));
    const double deg = read_real(v["angle_deg"], join_path(path, "angle_deg"));
    f.frame = Frame::from_rotation(Rotation::from_axis_angle(axis, deg * std::numbers::pi / 180.0));
    return f;
}

inline DetectorSet read_detectors(const Json& v, const std::string& path) {
    DetectorSet d;
    auto enable = [&](const std::string& name, const Json& params, const std::string& p) {
        if (!params.is_object()) throw ConfigError(p, "expected an object of parameters");
        if (name == "d1") {
            check_keys(params, p, {"k_sigma"});
            d.d1 = D1Params{};
            if (params.contains("k_sigma")) {
                d.d1->k_sigma = read_real(params["k_sigma"], join_path(p, "k_sigma"));
                if (!(d.d1->k_sigma > 0.0)) throw ConfigError(join_path(p, "k_sigma"), "must be positive");
            }
        } else if (name == "d2") {
            check_keys(params, p, {"rounds"});
            d.d2 = D2Params{};
            if (params.contains("rounds")) d.d2->rounds = read_count(params["rounds"], join_path(p, "rounds"), 1);
        } else if (name == "d3") {
            check_keys(params, p, {"pairs"});
            d.d3 = D3Params{};
            if (params.contains("pairs")) d.d3->pairs = read_count(params["pairs"], join_path(p, "pairs"), 1);
        } else {
            throw ConfigError(p, "unknown detector \"" + name + "\" (expected d1, d2 or d3)");
        }
    };
    if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string p = path + "[" + std::to_string(i) + "]";
            if (!v[i].is_string()) throw ConfigError(p, "expected a detector name");
            enable(v[i].get<std::string>(), Json::object(), p);
        }
    } else if (v.is_object()) {
        for (const auto& [name, params] : v.items()) enable(name, params, join_path(path, name));
    } else {
        throw ConfigError(path, "expected an array of names or an object");
    }
    return d;
}

inline Json vector_json(const UnitVector3& u) { return Json::array({u.x(), u.y(), u.z()}); }

}  // namespace detail

/// Validates a parsed document and fills documented defaults.
inline ScenarioConfig scenario_config_from_json(const Json& doc) {
    using namespace detail;
    if (!doc.is_object()) throw ConfigError("", "config document must be a JSON object");
    check_keys(doc, "", {"scenario", "n_qubits", "trials", "master_seed", "alice_direction",
                         "bob_frame", "attack", "detectors"});
    ScenarioConfig c;
    if (doc.contains("scenario")) {
        const auto& s = doc["scenario"];
        if (s == "protocol1") c.scenario = Scenario::Protocol1;
        else if (s == "singlet_transmission") c.scenario = Scenario::SingletTransmission;
        else throw ConfigError("scenario", "expected protocol1 or singlet_transmission, got " + s.dump());
    }
    if (!doc.contains("n_qubits")) throw ConfigError("n_qubits", "required");
    c.n_qubits = read_count(doc["n_qubits"], "n_qubits", 3);
    if (!doc.contains("trials")) throw ConfigError("trials", "required");
    c.trials = read_count(doc["trials"], "trials", 1);
    if (doc.contains("master_seed")) c.master_seed = read_unsigned(doc["master_seed"], "master_seed");
    if (doc.contains("alice_direction")) {
        const auto& a = doc["alice_direction"];
        if (a.is_string()) {
            if (a != "random") throw ConfigError("alice_direction", "expected \"random\" or a unit vector");
            c.alice_direction.reset();
        } else {
            c.alice_direction = read_unit_vector(a, "alice_direction");
        }
    }
    if (doc.contains("bob_frame")) c.bob_frame = read_frame(doc["bob_frame"], "bob_frame");
    if (doc.contains("attack")) c.attack = read_attack(doc["attack"], "attack");
    if (doc.contains("detectors")) c.detectors = read_detectors(doc["detectors"], "detectors");
    if (c.scenario == Scenario::SingletTransmission && c.attack.kind != AttackSpec::Kind::None) {
        throw ConfigError("attack", "singlet_transmission sends nothing over the quantum channel; use none");
    }
    return c;
}

inline ScenarioConfig parse_scenario_config(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", std::string("syntax error: ") + e.what());
    }
    return scenario_config_from_json(doc);
}

/// The fully resolved configuration, defaults included.
inline Json to_json(const ScenarioConfig& c) {
    using detail::vector_json;
    Json j;
    j["scenario"] = to_string(c.scenario);
    j["n_qubits"] = c.n_qubits;
    j["trials"] = c.trials;
    j["master_seed"] = c.master_seed;
    j["alice_direction"] = c.alice_direction ? vector_json(*c.alice_direction) : Json("random");
    switch (c.bob_frame.kind) {
        case FrameSpec::Kind::Aligned: j["bob_frame"] = "aligned"; break;
        case FrameSpec::Kind::Lab: j["bob_frame"] = "lab"; break;
        case FrameSpec::Kind::Random: j["bob_frame"] = "random"; break;
        case FrameSpec::Kind::Explicit:
            j["bob_frame"] = {{"x_axis", vector_json(c.bob_frame.frame->x_axis())},
                              {"y_axis", vector_json(c.bob_frame.frame->y_axis())},
                              {"z_axis", vector_json(c.bob_frame.frame->z_axis())}};
            break;
    }
    Json attack;
    switch (c.attack.kind) {
        case AttackSpec::Kind::None: attack["type"] = "none"; break;
        case AttackSpec::Kind::Rotation: attack["type"] = "rotation"; break;
        case AttackSpec::Kind::RoundtripRotation: attack["type"] = "roundtrip_rotation"; break;
        case AttackSpec::Kind::Intercept: attack["type"] = "intercept"; break;
    }
    if (c.attack.is_rotation()) {
        attack["haar"] = c.attack.rotation.haar;
        if (c.attack.rotation.haar) {
            attack["min_angle_deg"] = c.attack.rotation.min_angle_deg;
        } else {
            attack["axis"] = vector_json(c.attack.rotation.axis);
            attack["angle_deg"] = c.attack.rotation.angle_deg;
        }
    } else if (c.attack.kind == AttackSpec::Kind::Intercept) {
        attack["policy"] = c.attack.intercept_axis ? "fixed" : "fresh_random";
        if (c.attack.intercept_axis) attack["fixed_axis"] = vector_json(*c.attack.intercept_axis);
    }
    j["attack"] = attack;
    Json det = Json::object();
    if (c.detectors.d1) det["d1"] = {{"k_sigma", c.detectors.d1->k_sigma}};
    if (c.detectors.d2) det["d2"] = {{"rounds", c.detectors.d2->rounds}};
    if (c.detectors.d3) det["d3"] = {{"pairs", c.detectors.d3->pairs}};
    j["detectors"] = det;
    return j;
}

}  // namespace rfshare::experiment
