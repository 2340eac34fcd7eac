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
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "rfshare/adversary.hpp"
#include "rfshare/errors.hpp"
#include "rfshare/geometry.hpp"
#include "rfshare/protocol.hpp"
#include "rfshare/quantum.hpp"
#include "rfshare/random.hpp"

namespace rfshare {

/// Outcome of one consistency check.
struct Verdict {
    double statistic = 0.0;
    double threshold = 0.0;
    bool passed = false;
    /// Auxiliary counts and rates, keyed by name.
    std::map<std::string, double> detail;
};

// ---------------------------------------------------------------------------
// D1: squared-cosine consistency of Bob's own estimate.
// ---------------------------------------------------------------------------

/// Allowed |S - 1| for the squared-cosine check.
///
/// With per-axis variance s_m^2 = 4 e_m (1 - e_m) / n_m of the cosine
/// estimate c_m, S = sum c_m^2 has variance
///   sum_m (2 c_m)^2 s_m^2 + 2 s_m^4
/// (delta method plus the second-order term, which dominates on axes where
/// c_m ~ 0). The threshold is k_sigma times its square root. When every
/// empirical rate is 0 or 1 the variance estimate vanishes and the floor
/// k_sigma * 2 / sqrt(min n_m) is used instead.
inline double d1_threshold(const ErrorRates& rates, double k_sigma) {
    std::size_t n_min = rates.axes[0].trials;
    for (const auto& t : rates.axes) {
        if (t.trials < 2) {
            throw ContractError("d1_threshold: each axis needs at least 2 trials");
        }
        n_min = std::min(n_min, t.trials);
    }
    if (!(k_sigma > 0.0)) throw ContractError("d1_threshold: k_sigma must be positive");
    double var = 0.0;
    bool all_degenerate = true;
    for (const auto& t : rates.axes) {
        const double e = t.rate();
        const double c = std::clamp(1.0 - 2.0 * e, -1.0, 1.0);
        const double s2 = 4.0 * e * (1.0 - e) / static_cast<double>(t.trials);
        if (e * (1.0 - e) > 0.0) all_degenerate = false;
        var += 4.0 * c * c * s2 + 2.0 * s2 * s2;
    }
    if (all_degenerate) return k_sigma * 2.0 / std::sqrt(static_cast<double>(n_min));
    return k_sigma * std::sqrt(var);
}

/// Passes when |S - 1| <= epsilon.
inline Verdict d1_check(const DirectionEstimate& estimate, double epsilon) {
    if (!(epsilon > 0.0)) throw ContractError("d1_check: epsilon must be positive");
    Verdict v;
    v.statistic = estimate.s_statistic;
    v.threshold = epsilon;
    v.passed = std::abs(estimate.s_statistic - 1.0) <= epsilon;
    v.detail["deviation"] = estimate.s_statistic - 1.0;
    return v;
}

/// Binomial 3-sigma bound used by D2 and D3 at p = 1/2: 3 sqrt(0.25 / n).
inline double three_sigma_rate_threshold(std::size_t n) {
    return 3.0 / (2.0 * std::sqrt(static_cast<double>(n)));
}

// ---------------------------------------------------------------------------
// D2: prepare-and-measure over the quantum channel, Bob to Alice.
// ---------------------------------------------------------------------------

/// Analytic probability that Alice sees -1 for the state Bob prepares along
/// his `label` axis, for channels that act deterministically.
inline std::optional<double> d2_error_probability(const Frame& frame_a,
                                                  const Frame& frame_b_received,
                                                  const Channel& channel, AxisLabel label) {
    const auto back = channel.unitary(Direction::BobToAlice);
    if (!back) return std::nullopt;
    const PureQubit arrived{rotate(*back, frame_b_received.axis(label))};
    return 1.0 - born_probability(arrived, frame_a.axis(label));
}

inline Verdict d2_prepare_and_measure(const Frame& frame_a, const Frame& frame_b_received,
                                      Channel& channel, std::size_t rounds, Stream& rng) {
    if (rounds < 1) throw ContractError("d2_prepare_and_measure: rounds must be at least 1");
    std::size_t errors = 0;
    std::array<std::size_t, 3> label_errors{};
    std::array<std::size_t, 3> label_rounds{};
    for (std::size_t i = 0; i < rounds; ++i) {
        const auto label = static_cast<AxisLabel>(i % 3);
        const PureQubit prepared{frame_b_received.axis(label)};
        const PureQubit arrived = channel.apply(Direction::BobToAlice, prepared);
        const Outcome o = measure(arrived, frame_a.axis(label), rng).first;
        ++label_rounds[i % 3];
        if (o != Outcome::Plus) {
            ++errors;
            ++label_errors[i % 3];
        }
    }
    Verdict v;
    v.statistic = static_cast<double>(errors) / static_cast<double>(rounds);
    v.threshold = three_sigma_rate_threshold(rounds);
    v.passed = v.statistic <= v.threshold;
    v.detail["errors"] = static_cast<double>(errors);
    v.detail["rounds"] = static_cast<double>(rounds);
    const char* names[3] = {"x", "y", "z"};
    for (int m = 0; m < 3; ++m) {
        v.detail[std::string("errors_") + names[m]] = static_cast<double>(label_errors[m]);
        v.detail[std::string("rounds_") + names[m]] = static_cast<double>(label_rounds[m]);
        if (auto p = d2_error_probability(frame_a, frame_b_received, channel,
                                          static_cast<AxisLabel>(m))) {
            v.detail[std::string("p_error_") + names[m]] = *p;
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// D3: pre-shared singlets measured along same-labelled axes.
// ---------------------------------------------------------------------------

/// Analytic probability of equal outcomes for the `label` axes.
inline double d3_equal_probability(const Frame& frame_a, const Frame& frame_b_received,
                                   AxisLabel label) {
    return singlet_joint_distribution(frame_a.axis(label), frame_b_received.axis(label)).p_equal();
}

inline Verdict d3_singlet_consistency(const Frame& frame_a, const Frame& frame_b_received,
                                      std::size_t pairs, Stream& rng) {
    if (pairs < 1) throw ContractError("d3_singlet_consistency: pairs must be at least 1");
    std::size_t equal = 0;
    std::array<std::size_t, 3> label_equal{};
    std::array<std::size_t, 3> label_pairs{};
    for (std::size_t i = 0; i < pairs; ++i) {
        const auto label = static_cast<AxisLabel>(i % 3);
        const auto [s, t] = sample_singlet(frame_a.axis(label), frame_b_received.axis(label), rng);
        ++label_pairs[i % 3];
        if (s == t) {
            ++equal;
            ++label_equal[i % 3];
        }
    }
    Verdict v;
    v.statistic = static_cast<double>(equal) / static_cast<double>(pairs);
    v.threshold = three_sigma_rate_threshold(pairs);
    v.passed = v.statistic <= v.threshold;
    v.detail["equal"] = static_cast<double>(equal);
    v.detail["pairs"] = static_cast<double>(pairs);
    const char* names[3] = {"x", "y", "z"};
    for (int m = 0; m < 3; ++m) {
        v.detail[std::string("equal_") + names[m]] = static_cast<double>(label_equal[m]);
        v.detail[std::string("pairs_") + names[m]] = static_cast<double>(label_pairs[m]);
        v.detail[std::string("p_equal_") + names[m]] =
            d3_equal_probability(frame_a, frame_b_received, static_cast<AxisLabel>(m));
    }
    return v;
}

// ---------------------------------------------------------------------------
// Direction transmission over pre-shared singlets.
// ---------------------------------------------------------------------------

struct SingletTransmissionResult {
    SessionKey announced;
    ErrorRates rates;
    DirectionEstimate estimate;
};

/// Alice measures her halves along z_A and announces b = 1 for +1, 0 for -1,
/// which leaves Bob holding +z_A for b = 0 and -z_A for b = 1. Bob measures
/// round-robin in his frame and estimates as for keyed transmission.
inline SingletTransmissionResult singlet_rf_session(const UnitVector3& z_a, const Frame& frame_b,
                                                    std::size_t pairs, Stream& rng) {
    if (pairs < 3) {
        throw ContractError("singlet_rf_transmission: pairs must be at least 3, got " +
                            std::to_string(pairs));
    }
    SingletTransmissionResult res;
    res.announced.bits.resize(pairs);
    const auto schedule = bob_axis_schedule(pairs);
    std::vector<Outcome> bob(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        const auto [s, t] = sample_singlet(z_a, frame_b.axis(schedule[i]), rng);
        res.announced.bits[i] = s == Outcome::Plus ? 1 : 0;
        bob[i] = t;
    }
    res.rates = tally_errors(res.announced, schedule, bob);
    res.estimate = estimate_direction(res.rates);
    return res;
}

inline DirectionEstimate singlet_rf_transmission(const UnitVector3& z_a, const Frame& frame_b,
                                                 std::size_t pairs, Stream& rng) {
    return singlet_rf_session(z_a, frame_b, pairs, rng).estimate;
}

/// Per-pair probability that Bob's outcome disagrees with the announced bit
/// when he measures along `axis`, summed over Alice's two results.
inline double singlet_transmission_error_probability(const UnitVector3& z_a,
                                                     const UnitVector3& axis) {
    const JointDistribution d = singlet_joint_distribution(z_a, axis);
    // Announced 1 (s = +1): Bob expects -1, errs on t = +1.
    // Announced 0 (s = -1): Bob expects +1, errs on t = -1.
    return d.p(Outcome::Plus, Outcome::Plus) + d.p(Outcome::Minus, Outcome::Minus);
}

}  // namespace rfshare
