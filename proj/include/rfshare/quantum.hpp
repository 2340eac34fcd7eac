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
#include <complex>
#include <utility>

#include "rfshare/geometry.hpp"
#include "rfshare/random.hpp"

namespace rfshare {

/// Pure spin-1/2 state, represented by its Bloch vector. Spin up along n has
/// Bloch vector n, spin down has -n.
struct PureQubit {
    UnitVector3 bloch;

    bool operator==(const PureQubit&) const = default;
};

/// Result of a projective spin measurement.
enum class Outcome : int { Minus = -1, Plus = +1 };

constexpr int sign(Outcome o) { return static_cast<int>(o); }
constexpr Outcome opposite(Outcome o) { return o == Outcome::Plus ? Outcome::Minus : Outcome::Plus; }

/// Probabilities of the four outcome pairs (s, t) of a two-qubit measurement.
struct JointDistribution {
    double p_pp = 0.0;
    double p_pm = 0.0;
    double p_mp = 0.0;
    double p_mm = 0.0;

    double p(Outcome s, Outcome t) const {
        if (s == Outcome::Plus) return t == Outcome::Plus ? p_pp : p_pm;
        return t == Outcome::Plus ? p_mp : p_mm;
    }
    double p_equal() const { return p_pp + p_mm; }
    /// E[s t].
    double correlator() const { return p_pp + p_mm - p_pm - p_mp; }
};

/// Probability of outcome +1 when measuring `state` along `axis`.
inline double born_probability(const PureQubit& state, const UnitVector3& axis) {
    return std::clamp(0.5 * (1.0 + dot(state.bloch, axis)), 0.0, 1.0);
}

/// Projective measurement with collapse onto +/- axis.
inline std::pair<Outcome, PureQubit> measure(const PureQubit& state, const UnitVector3& axis,
                                             Stream& rng) {
    if (rng.bernoulli(born_probability(state, axis))) return {Outcome::Plus, PureQubit{axis}};
    return {Outcome::Minus, PureQubit{-axis}};
}

/// Outcome statistics of the singlet (|01> - |10>)/sqrt(2) measured along
/// a (first qubit) and b (second qubit): P(s, t) = (1 - s t a.b) / 4.
inline JointDistribution singlet_joint_distribution(const UnitVector3& a, const UnitVector3& b) {
    const double c = std::clamp(dot(a, b), -1.0, 1.0);
    const double same = 0.25 * (1.0 - c);
    const double diff = 0.25 * (1.0 + c);
    return {same, diff, diff, same};
}

/// Draws one outcome pair from the singlet statistics.
inline std::pair<Outcome, Outcome> sample_singlet(const UnitVector3& a, const UnitVector3& b,
                                                  Stream& rng) {
    // First qubit is marginally unbiased; second is conditioned on it.
    const Outcome s = rng.bernoulli(0.5) ? Outcome::Plus : Outcome::Minus;
    const JointDistribution d = singlet_joint_distribution(a, b);
    const double p_t_plus = 2.0 * d.p(s, Outcome::Plus);
    const Outcome t = rng.bernoulli(p_t_plus) ? Outcome::Plus : Outcome::Minus;
    return {s, t};
}

/// Independent route to the singlet statistics through an explicit
/// four-dimensional state vector and spin projectors. Used to cross-check
/// singlet_joint_distribution; not used on the simulation path.
inline JointDistribution singlet_statevector_oracle(const UnitVector3& a, const UnitVector3& b) {
    using cplx = std::complex<double>;
    using Mat2 = std::array<std::array<cplx, 2>, 2>;
    using State = std::array<cplx, 4>;
    const cplx i{0.0, 1.0};

    // (I + sgn n.sigma) / 2 in the computational basis |0> = up_z, |1> = down_z.
    auto projector = [&](const UnitVector3& n, int sgn) {
        const double s = sgn;
        Mat2 p{};
        p[0][0] = 0.5 * (1.0 + s * n.z());
        p[0][1] = 0.5 * s * (n.x() - i * n.y());
        p[1][0] = 0.5 * s * (n.x() + i * n.y());
        p[1][1] = 0.5 * (1.0 - s * n.z());
        return p;
    };

    const double r = 1.0 / std::sqrt(2.0);
    // Basis order |00>, |01>, |10>, |11>; first index belongs to qubit a.
    const State psi{0.0, r, -r, 0.0};

    auto prob = [&](int sa, int sb) {
        const Mat2 pa = projector(a, sa);
        const Mat2 pb = projector(b, sb);
        State out{};
        for (int ia = 0; ia < 2; ++ia)
            for (int ib = 0; ib < 2; ++ib)
                for (int ja = 0; ja < 2; ++ja)
                    for (int jb = 0; jb < 2; ++jb)
                        out[2 * ia + ib] += pa[ia][ja] * pb[ib][jb] * psi[2 * ja + jb];
        cplx amp = 0.0;
        for (int k = 0; k < 4; ++k) amp += std::conj(psi[k]) * out[k];
        return amp.real();
    };

    return {prob(+1, +1), prob(+1, -1), prob(-1, +1), prob(-1, -1)};
}

}  // namespace rfshare
