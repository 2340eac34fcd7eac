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

#include <optional>
#include <string>
#include <type_traits>
#include <variant>

#include "rfshare/geometry.hpp"
#include "rfshare/quantum.hpp"
#include "rfshare/random.hpp"

namespace rfshare {

enum class Direction { AliceToBob, BobToAlice };

/// How an intercept-resend eavesdropper picks her measurement axis.
class AxisPolicy {
   public:
    static AxisPolicy fixed(const UnitVector3& axis) { return AxisPolicy(axis); }
    static AxisPolicy fresh_random() { return AxisPolicy(std::nullopt); }

    bool is_fixed() const { return axis_.has_value(); }
    const std::optional<UnitVector3>& fixed_axis() const { return axis_; }

   private:
    explicit AxisPolicy(std::optional<UnitVector3> axis) : axis_(std::move(axis)) {}
    std::optional<UnitVector3> axis_;
};

/// Eve's action on the quantum channel. Direction-aware: qubits travelling
/// Alice to Bob and Bob to Alice may be treated differently.
class Channel {
   public:
    struct Identity {};
    /// Fixed R_e on the forward leg only.
    struct ForwardRotation {
        Rotation r_e;
    };
    /// R_e forward, R_e^-1 on the way back.
    struct RoundtripRotation {
        Rotation r_e;
    };
    struct InterceptResend {
        AxisPolicy policy;
        Stream rng;
    };
    using Behavior = std::variant<Identity, ForwardRotation, RoundtripRotation, InterceptResend>;

    explicit Channel(Behavior b) : behavior_(std::move(b)) {}

    PureQubit apply(Direction dir, const PureQubit& state) {
        return std::visit(
            [&](auto& b) -> PureQubit {
                using T = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<T, Identity>) {
                    return state;
                } else if constexpr (std::is_same_v<T, ForwardRotation>) {
                    if (dir == Direction::BobToAlice) return state;
                    return PureQubit{rotate(b.r_e, state.bloch)};
                } else if constexpr (std::is_same_v<T, RoundtripRotation>) {
                    const Rotation r = dir == Direction::AliceToBob ? b.r_e : inverse(b.r_e);
                    return PureQubit{rotate(r, state.bloch)};
                } else {
                    const UnitVector3 axis =
                        b.policy.is_fixed() ? *b.policy.fixed_axis() : random_unit_vector(b.rng);
                    // Eve's record is discarded; only the collapsed state moves on.
                    return measure(state, axis, b.rng).second;
                }
            },
            behavior_);
    }

    /// The rotation applied in `dir` when the channel is deterministic,
    /// nullopt for measuring channels.
    std::optional<Rotation> unitary(Direction dir) const {
        return std::visit(
            [&](const auto& b) -> std::optional<Rotation> {
                using T = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<T, Identity>) {
                    return Rotation::identity();
                } else if constexpr (std::is_same_v<T, ForwardRotation>) {
                    return dir == Direction::AliceToBob ? b.r_e : Rotation::identity();
                } else if constexpr (std::is_same_v<T, RoundtripRotation>) {
                    return dir == Direction::AliceToBob ? b.r_e : inverse(b.r_e);
                } else {
                    return std::nullopt;
                }
            },
            behavior_);
    }

    /// R_e for the rotation attacks.
    std::optional<Rotation> attack_rotation() const {
        if (const auto* f = std::get_if<ForwardRotation>(&behavior_)) return f->r_e;
        if (const auto* r = std::get_if<RoundtripRotation>(&behavior_)) return r->r_e;
        return std::nullopt;
    }

    const Behavior& behavior() const { return behavior_; }

    std::string name() const {
        switch (behavior_.index()) {
            case 0: return "none";
            case 1: return "rotation";
            case 2: return "roundtrip_rotation";
            default: return "intercept";
        }
    }

   private:
    Behavior behavior_;
};

inline Channel identity_channel() { return Channel(Channel::Identity{}); }

inline Channel rotation_channel(const Rotation& r_e) {
    return Channel(Channel::ForwardRotation{r_e});
}

inline Channel roundtrip_rotation_channel(const Rotation& r_e) {
    return Channel(Channel::RoundtripRotation{r_e});
}

/// Measure-and-forward eavesdropper with a private stream.
inline Channel intercept_resend_channel(const AxisPolicy& policy, Stream rng) {
    return Channel(Channel::InterceptResend{policy, std::move(rng)});
}

}  // namespace rfshare
