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

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rfshare/adversary.hpp"
#include "rfshare/errors.hpp"
#include "rfshare/geometry.hpp"
#include "rfshare/quantum.hpp"
#include "rfshare/random.hpp"

namespace rfshare {

/// Secret bits shared by Alice and Bob. Bit 0 means spin up, 1 spin down.
struct SessionKey {
    std::vector<std::uint8_t> bits;

    std::size_t size() const { return bits.size(); }
    bool operator==(const SessionKey&) const = default;
};

/// Outcome Bob expects for a key bit when frames agree.
constexpr Outcome expected_outcome(std::uint8_t bit) { return bit == 0 ? Outcome::Plus : Outcome::Minus; }

struct AxisTally {
    std::size_t errors = 0;
    std::size_t trials = 0;

    double rate() const { return trials == 0 ? 0.0 : static_cast<double>(errors) / trials; }
    bool operator==(const AxisTally&) const = default;
};

/// Per-axis mismatch counts between Bob's outcomes and the key.
struct ErrorRates {
    std::array<AxisTally, 3> axes{};

    const AxisTally& operator[](AxisLabel a) const { return axes[static_cast<int>(a)]; }
    AxisTally& operator[](AxisLabel a) { return axes[static_cast<int>(a)]; }
    std::size_t total_trials() const { return axes[0].trials + axes[1].trials + axes[2].trials; }
    bool operator==(const ErrorRates&) const = default;
};

/// Bob's reconstruction of Alice's direction, in Bob's frame coordinates.
struct DirectionEstimate {
    /// c_m = 1 - 2 e_m, clamped to [-1, 1].
    Vec3 raw_cosines;
    /// c_x^2 + c_y^2 + c_z^2; equals 1 for a consistent pure-state run.
    double s_statistic = 0.0;
    UnitVector3 direction = UnitVector3::unit_z();
    /// theta_m = arccos(c_m).
    std::array<double, 3> angles{};
};

inline SessionKey generate_key(std::size_t n, Stream& rng) {
    SessionKey key;
    key.bits.resize(n);
    for (auto& b : key.bits) b = static_cast<std::uint8_t>(rng.bit());
    return key;
}

/// Qubit i is +z_A for bit 0 and -z_A for bit 1.
inline std::vector<PureQubit> alice_emit(const SessionKey& key, const UnitVector3& z_a) {
    std::vector<PureQubit> out;
    out.reserve(key.size());
    const UnitVector3 down = -z_a;
    for (auto b : key.bits) out.push_back(PureQubit{b == 0 ? z_a : down});
    return out;
}

/// X, Y, Z, X, Y, Z, ...
inline std::vector<AxisLabel> bob_axis_schedule(std::size_t n) {
    std::vector<AxisLabel> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<AxisLabel>(i % 3);
    return out;
}

/// Measures each state along the frame axis named by the schedule.
inline std::vector<Outcome> measure_sequence(std::span<const PureQubit> states, const Frame& frame,
                                             std::span<const AxisLabel> schedule, Stream& rng) {
    if (states.size() != schedule.size()) {
        throw ContractError("measure_sequence: " + std::to_string(states.size()) +
                            " states but " + std::to_string(schedule.size()) + " schedule entries");
    }
    std::vector<Outcome> out;
    out.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        out.push_back(measure(states[i], frame.axis(schedule[i]), rng).first);
    }
    return out;
}

/// Sends every state Alice to Bob through `channel`, then measures in Bob's frame.
inline std::vector<Outcome> transmit_and_measure(std::span<const PureQubit> states, Channel& channel,
                                                 const Frame& frame_b,
                                                 std::span<const AxisLabel> schedule, Stream& rng) {
    if (states.size() != schedule.size()) {
        throw ContractError("transmit_and_measure: " + std::to_string(states.size()) +
                            " states but " + std::to_string(schedule.size()) + " schedule entries");
    }
    std::vector<PureQubit> arrived;
    arrived.reserve(states.size());
    for (const auto& s : states) arrived.push_back(channel.apply(Direction::AliceToBob, s));
    return measure_sequence(arrived, frame_b, schedule, rng);
}

inline ErrorRates tally_errors(const SessionKey& key, std::span<const AxisLabel> schedule,
                               std::span<const Outcome> outcomes) {
    if (key.size() != schedule.size() || key.size() != outcomes.size()) {
        throw ContractError("tally_errors: length mismatch (key " + std::to_string(key.size()) +
                            ", schedule " + std::to_string(schedule.size()) + ", outcomes " +
                            std::to_string(outcomes.size()) + ")");
    }
    ErrorRates rates;
    for (std::size_t i = 0; i < key.size(); ++i) {
        AxisTally& t = rates[schedule[i]];
        ++t.trials;
        if (outcomes[i] != expected_outcome(key.bits[i])) ++t.errors;
    }
    return rates;
}

/// Cosines from error rates via c = 1 - 2e.
inline DirectionEstimate estimate_direction(const ErrorRates& rates) {
    std::array<double, 3> c{};
    for (int m = 0; m < 3; ++m) {
        const AxisTally& t = rates.axes[m];
        if (t.trials == 0) {
            throw InsufficientDataError(std::string("estimate_direction: no trials on axis ") +
                                        to_string(static_cast<AxisLabel>(m)));
        }
        c[m] = std::clamp(1.0 - 2.0 * t.rate(), -1.0, 1.0);
    }
    const Vec3 cos_vec{c[0], c[1], c[2]};
    const double norm = cos_vec.norm();
    if (norm <= 1e-6) {
        throw DegenerateEstimateError("estimate_direction: cosine vector has norm " +
                                      std::to_string(norm));
    }
    DirectionEstimate est;
    est.raw_cosines = cos_vec;
    est.s_statistic = dot(cos_vec, cos_vec);
    est.direction = UnitVector3(cos_vec);
    for (int m = 0; m < 3; ++m) est.angles[m] = std::acos(c[m]);
    return est;
}

/// Probability that Bob's outcome disagrees with `bit` when the qubit that
/// reaches him is `arrived` and he measures along `axis`.
inline double qubit_error_probability(const PureQubit& arrived, std::uint8_t bit,
                                      const UnitVector3& axis) {
    const double p_plus = born_probability(arrived, axis);
    return bit == 0 ? 1.0 - p_plus : p_plus;
}

struct SessionResult {
    SessionKey key;
    ErrorRates rates;
    DirectionEstimate estimate;
    /// Estimate (in lab coordinates) versus the direction the channel delivered.
    double true_mismatch_angle = 0.0;
    /// Estimate mapped back into lab coordinates.
    UnitVector3 estimate_lab = UnitVector3::unit_z();
};

/// The direction a channel actually delivers to Bob: R_e z_A for rotation
/// attacks, z_A otherwise (a measuring channel only shrinks the ensemble).
inline UnitVector3 delivered_direction(const Channel& channel, const UnitVector3& z_a) {
    if (auto r = channel.unitary(Direction::AliceToBob)) return rotate(*r, z_a);
    return z_a;
}

/// One complete run: key, emission, channel, Bob's measurements, estimate.
inline SessionResult run_direction_session(std::size_t n_qubits, const UnitVector3& z_a,
                                           const Frame& frame_b, Channel& channel, Stream& rng) {
    if (n_qubits < 3) {
        throw ContractError("run_direction_session: n_qubits must be at least 3, got " +
                            std::to_string(n_qubits));
    }
    SessionResult res;
    res.key = generate_key(n_qubits, rng);
    const auto states = alice_emit(res.key, z_a);
    const auto schedule = bob_axis_schedule(n_qubits);
    const auto outcomes = transmit_and_measure(states, channel, frame_b, schedule, rng);
    res.rates = tally_errors(res.key, schedule, outcomes);
    res.estimate = estimate_direction(res.rates);
    res.estimate_lab = UnitVector3(frame_b.to_lab(res.estimate.direction.vec()));
    res.true_mismatch_angle = angle_between(res.estimate_lab, delivered_direction(channel, z_a));
    return res;
}

}  // namespace rfshare
