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
#include <span>
#include <string>
#include <utility>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "rfshare/errors.hpp"

namespace rfshare::stats {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Wilson score interval for k successes in n trials at z standard deviations.
inline Interval wilson_interval_z(std::size_t k, std::size_t n, double z) {
    if (n == 0 || k > n) {
        throw ContractError("wilson_interval: need 0 <= k <= n and n >= 1 (k=" + std::to_string(k) +
                            ", n=" + std::to_string(n) + ")");
    }
    if (!(z > 0.0)) throw ContractError("wilson_interval: z must be positive");
    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(k);
    const double z2 = z * z;
    const double denom = nn + z2;
    const double center = (kk + 0.5 * z2) / denom;
    const double half = z / denom * std::sqrt(kk * (nn - kk) / nn + 0.25 * z2);
    Interval iv{center - half, center + half};
    // The closed form hits 0 and 1 exactly at k = 0 and k = n; pin them.
    if (k == 0) iv.lo = 0.0;
    if (k == n) iv.hi = 1.0;
    iv.lo = std::max(iv.lo, 0.0);
    iv.hi = std::min(iv.hi, 1.0);
    return iv;
}

/// Two-sided normal quantile for a central confidence level.
inline double z_for_confidence(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw ContractError("confidence must lie in (0, 1), got " + std::to_string(confidence));
    }
    const boost::math::normal_distribution<double> normal;
    return boost::math::quantile(normal, 0.5 + 0.5 * confidence);
}

inline Interval wilson_interval(std::size_t k, std::size_t n, double confidence) {
    return wilson_interval_z(k, n, z_for_confidence(confidence));
}

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

/// Pearson goodness-of-fit of observed counts against cell probabilities.
/// Cells with zero expected probability must have zero counts and are skipped.
inline ChiSquareResult chi_square_gof(std::span<const std::size_t> observed,
                                      std::span<const double> probabilities) {
    if (observed.size() != probabilities.size() || observed.empty()) {
        throw ContractError("chi_square_gof: observed and probabilities must be equal, nonempty");
    }
    std::size_t total = 0;
    for (auto o : observed) total += o;
    ChiSquareResult r;
    int cells = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = probabilities[i] * static_cast<double>(total);
        if (expected == 0.0) {
            if (observed[i] != 0) return {INFINITY, 0, 0.0};
            continue;
        }
        const double d = static_cast<double>(observed[i]) - expected;
        r.statistic += d * d / expected;
        ++cells;
    }
    r.dof = cells - 1;
    if (r.dof < 1) return {r.statistic, r.dof, 1.0};
    const boost::math::chi_squared_distribution<double> dist(r.dof);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    return r;
}

}  // namespace rfshare::stats
