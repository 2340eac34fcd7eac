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
#include <cstddef>
#include <cstdint>
#include <exception>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rfshare/adversary.hpp"
#include "rfshare/detection.hpp"
#include "rfshare/experiment/config.hpp"
#include "rfshare/experiment/seed.hpp"
#include "rfshare/geometry.hpp"
#include "rfshare/protocol.hpp"
#include "rfshare/random.hpp"

namespace rfshare::experiment {

struct TrialResult {
    std::size_t trial_index = 0;
    std::uint64_t seed = 0;
    ErrorRates rates;
    DirectionEstimate estimate;
    /// Estimate mapped into lab coordinates.
    UnitVector3 estimate_lab = UnitVector3::unit_z();
    /// Alice's transmitted direction.
    UnitVector3 z_a = UnitVector3::unit_z();
    /// R_e z_A, present under rotation attacks.
    std::optional<UnitVector3> attacked_direction;
    /// Angle between the estimate and z_A, radians.
    double angle_error = 0.0;
    /// Angle between the estimate and R_e z_A, radians.
    std::optional<double> attacked_angle_error;
    /// rotation_angle(R_e) under rotation attacks, 0 otherwise; radians.
    double mismatch_angle = 0.0;
    std::optional<Verdict> d1;
    std::optional<Verdict> d2;
    std::optional<Verdict> d3;
};

/// Trial failure tagged with its index.
class TrialError : public std::runtime_error {
   public:
    TrialError(std::size_t index, const std::string& what)
        : std::runtime_error("trial " + std::to_string(index) + ": " + what), index_(index) {}
    std::size_t trial_index() const { return index_; }

   private:
    std::size_t index_;
};

namespace detail {

inline Rotation resolve_rotation(const RotationSpec& spec, Stream& rng) {
    if (!spec.haar) {
        return Rotation::from_axis_angle(spec.axis, spec.angle_deg * std::numbers::pi / 180.0);
    }
    const double min_rad = spec.min_angle_deg * std::numbers::pi / 180.0;
    for (;;) {
        const Rotation r = haar_random_rotation(rng);
        if (rotation_angle(r) > min_rad || min_rad == 0.0) return r;
    }
}

inline Channel make_channel(const AttackSpec& attack, const std::optional<Rotation>& r_e,
                            std::uint64_t stream_seed) {
    switch (attack.kind) {
        case AttackSpec::Kind::None: return identity_channel();
        case AttackSpec::Kind::Rotation: return rotation_channel(*r_e);
        case AttackSpec::Kind::RoundtripRotation: return roundtrip_rotation_channel(*r_e);
        case AttackSpec::Kind::Intercept: {
            const AxisPolicy policy = attack.intercept_axis ? AxisPolicy::fixed(*attack.intercept_axis)
                                                            : AxisPolicy::fresh_random();
            return intercept_resend_channel(policy, Stream(stream_seed));
        }
    }
    return identity_channel();
}

}  // namespace detail

/// Runs one trial; the result depends only on (config, trial_index).
inline TrialResult run_trial(const ScenarioConfig& config, std::size_t trial_index) {
    TrialResult res;
    res.trial_index = trial_index;
    res.seed = derive_trial_seed(config.master_seed, trial_index);
    Stream resolve(substream_seed(res.seed, StreamId::Resolve));

    // Alice's frame and the direction she sends (its z axis).
    const Frame frame_a = config.alice_direction ? Frame::with_z_axis(*config.alice_direction)
                                                 : Frame::from_rotation(haar_random_rotation(resolve));
    res.z_a = frame_a.z_axis();

    Frame frame_b = frame_a;
    switch (config.bob_frame.kind) {
        case FrameSpec::Kind::Aligned: frame_b = frame_a; break;
        case FrameSpec::Kind::Lab: frame_b = Frame::lab(); break;
        case FrameSpec::Kind::Random: frame_b = Frame::from_rotation(haar_random_rotation(resolve)); break;
        case FrameSpec::Kind::Explicit: frame_b = *config.bob_frame.frame; break;
    }

    std::optional<Rotation> r_e;
    if (config.attack.is_rotation()) r_e = detail::resolve_rotation(config.attack.rotation, resolve);

    Stream session_rng(substream_seed(res.seed, StreamId::Session));
    if (config.scenario == Scenario::Protocol1) {
        Channel channel =
            detail::make_channel(config.attack, r_e, substream_seed(res.seed, StreamId::Channel));
        SessionResult s = run_direction_session(config.n_qubits, res.z_a, frame_b, channel, session_rng);
        res.rates = s.rates;
        res.estimate = s.estimate;
        res.estimate_lab = s.estimate_lab;
    } else {
        SingletTransmissionResult s = singlet_rf_session(res.z_a, frame_b, config.n_qubits, session_rng);
        res.rates = s.rates;
        res.estimate = s.estimate;
        res.estimate_lab = UnitVector3(frame_b.to_lab(s.estimate.direction.vec()));
    }

    res.angle_error = angle_between(res.estimate_lab, res.z_a);
    if (r_e) {
        res.attacked_direction = rotate(*r_e, res.z_a);
        res.attacked_angle_error = angle_between(res.estimate_lab, *res.attacked_direction);
        res.mismatch_angle = rotation_angle(*r_e);
    }

    // Under a rotation attack the frame Bob ends up with is R_e applied to Alice's.
    const Frame frame_received = r_e ? frame_a.rotated(*r_e) : frame_a;

    if (config.detectors.d1) {
        const double eps = d1_threshold(res.rates, config.detectors.d1->k_sigma);
        res.d1 = d1_check(res.estimate, eps);
    }
    if (config.detectors.d2) {
        Channel back =
            detail::make_channel(config.attack, r_e, substream_seed(res.seed, StreamId::D2Channel));
        Stream rng(substream_seed(res.seed, StreamId::D2));
        res.d2 = d2_prepare_and_measure(frame_a, frame_received, back, config.detectors.d2->rounds, rng);
    }
    if (config.detectors.d3) {
        Stream rng(substream_seed(res.seed, StreamId::D3));
        res.d3 = d3_singlet_consistency(frame_a, frame_received, config.detectors.d3->pairs, rng);
    }
    return res;
}

/// Runs every trial, optionally across worker threads. Results are ordered by
/// trial index and independent of `threads`.
inline std::vector<TrialResult> run_scenario(const ScenarioConfig& config, unsigned threads = 1) {
    std::vector<TrialResult> results(config.trials);
    const unsigned workers =
        static_cast<unsigned>(std::clamp<std::size_t>(threads == 0 ? 1 : threads, 1, config.trials));
    std::vector<std::exception_ptr> errors(config.trials);

    auto work = [&](unsigned w) {
        for (std::size_t i = w; i < config.trials; i += workers) {
            try {
                results[i] = run_trial(config, i);
            } catch (const std::exception& e) {
                errors[i] = std::make_exception_ptr(TrialError(i, e.what()));
            }
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

}  // namespace rfshare::experiment
