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
#include <numbers>
#include <string>
#include <vector>

#include "rfshare/geometry.hpp"
#include "rfshare/quantum.hpp"
#include "rfshare/random.hpp"
#include "rfshare/stats.hpp"
#include "rfshare/testing/oracles.hpp"

namespace rfshare::experiment {

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Max |analytic - statevector| over a 20x20 axis grid and `haar_pairs`
/// randomly rotated pairs.
inline double singlet_oracle_max_diff(std::size_t haar_pairs, Stream& rng) {
    auto diff = [](const UnitVector3& a, const UnitVector3& b) {
        const auto p = singlet_joint_distribution(a, b);
        const auto q = singlet_statevector_oracle(a, b);
        return std::max({std::abs(p.p_pp - q.p_pp), std::abs(p.p_pm - q.p_pm),
                         std::abs(p.p_mp - q.p_mp), std::abs(p.p_mm - q.p_mm)});
    };
    double worst = 0.0;
    const auto grid = testing::sphere_grid(20);
    for (const auto& a : grid)
        for (const auto& b : grid) worst = std::max(worst, diff(a, b));
    for (std::size_t i = 0; i < haar_pairs; ++i) {
        const auto a = random_unit_vector(rng);
        const auto b = rotate(haar_random_rotation(rng), a);
        worst = std::max(worst, diff(a, b));
    }
    return worst;
}

/// Chi-square of `shots` Born-rule measurements against (p, 1 - p).
inline stats::ChiSquareResult born_sampler_gof(const PureQubit& state, const UnitVector3& axis,
                                               std::size_t shots, Stream& rng) {
    std::array<std::size_t, 2> counts{};
    for (std::size_t i = 0; i < shots; ++i) {
        counts[measure(state, axis, rng).first == Outcome::Plus ? 0 : 1]++;
    }
    const double p = born_probability(state, axis);
    const std::array<double, 2> probs{p, 1.0 - p};
    return stats::chi_square_gof(counts, probs);
}

/// Chi-square of `draws` singlet samples against the four closed-form cells.
inline stats::ChiSquareResult singlet_sampler_gof(const UnitVector3& a, const UnitVector3& b,
                                                  std::size_t draws, Stream& rng) {
    std::array<std::size_t, 4> counts{};
    for (std::size_t i = 0; i < draws; ++i) {
        const auto [s, t] = sample_singlet(a, b, rng);
        counts[(s == Outcome::Plus ? 0 : 2) + (t == Outcome::Plus ? 0 : 1)]++;
    }
    const auto d = singlet_joint_distribution(a, b);
    const std::array<double, 4> probs{d.p_pp, d.p_pm, d.p_mp, d.p_mm};
    return stats::chi_square_gof(counts, probs);
}

/// The analytic-oracle suite behind `rfsim selftest`.
inline std::vector<SelftestCheck> run_selftest(std::uint64_t seed = 20260101) {
    std::vector<SelftestCheck> out;
    auto add = [&](std::string name, bool ok, std::string detail) {
        out.push_back({std::move(name), ok, std::move(detail)});
    };
    Stream rng(seed);

    {
        const UnitVector3 axis(1.0, 1.0, 1.0);
        const double angle = 2.0 * std::numbers::pi / 3.0;
        const Vec3 q = rotate(Rotation::from_axis_angle(axis, angle), UnitVector3::unit_x()).vec();
        const Vec3 m = testing::apply(testing::rotation_matrix(axis, angle), {1.0, 0.0, 0.0});
        const double d = (q - m).norm();
        add("rotate matches Rodrigues matrix", d < 1e-12, "diff=" + std::to_string(d));
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Rotation a = haar_random_rotation(rng);
            const Rotation b = haar_random_rotation(rng);
            worst = std::max(worst, testing::max_abs_diff(testing::rotation_matrix(compose(a, b)),
                                                          testing::multiply(testing::rotation_matrix(a),
                                                                            testing::rotation_matrix(b))));
        }
        add("compose matches matrix product", worst < 1e-12, "max diff=" + std::to_string(worst));
    }
    {
        const double d = singlet_oracle_max_diff(100, rng);
        add("singlet closed form matches statevector", d < 1e-12, "max diff=" + std::to_string(d));
    }
    {
        const auto r = born_sampler_gof(PureQubit{UnitVector3(1.0, 0.0, 1.0)}, UnitVector3::unit_z(),
                                        100000, rng);
        add("Born sampler chi-square", r.p_value > 0.001, "p=" + std::to_string(r.p_value));
    }
    {
        const UnitVector3 a = UnitVector3::unit_z();
        const UnitVector3 b(std::sin(std::numbers::pi / 3.0), 0.0, std::cos(std::numbers::pi / 3.0));
        const auto r = singlet_sampler_gof(a, b, 100000, rng);
        add("singlet sampler chi-square", r.p_value > 0.001, "p=" + std::to_string(r.p_value));
    }
    {
        double sum = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) sum += rotation_angle(haar_random_rotation(rng));
        const double mean = sum / n;
        const double target = std::numbers::pi / 2.0 + 2.0 / std::numbers::pi;
        add("Haar mean rotation angle", std::abs(mean - target) < 0.01,
            "mean=" + std::to_string(mean) + " target=" + std::to_string(target));
    }
    {
        const auto iv = stats::wilson_interval(0, 10, 0.95);
        const double z = stats::z_for_confidence(0.95);
        const double hi = z * z / (10.0 + z * z);
        add("Wilson interval at k=0", iv.lo == 0.0 && std::abs(iv.hi - hi) < 1e-12,
            "hi=" + std::to_string(iv.hi));
    }
    return out;
}

}  // namespace rfshare::experiment
