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

#include <cstdint>

namespace rfshare::experiment {

/// 64-bit avalanche mix of (master_seed, trial_index).
///
/// The constants below are part of the reproducibility contract: changing
/// them changes every report. The pre-mix master + golden * (index + 1) is
/// injective in the index for a fixed master, and the finalizer is a
/// bijection, so distinct indices never collide.
constexpr std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (trial_index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Independent sub-streams inside one trial.
enum class StreamId : std::uint64_t {
    Resolve = 0,  // random frames and R_e
    Session = 1,  // key bits and Bob's measurements
    Channel = 2,  // forward-leg eavesdropper
    D2 = 3,
    D3 = 4,
    D2Channel = 5,  // reverse-leg eavesdropper during D2
};

constexpr std::uint64_t substream_seed(std::uint64_t trial_seed, StreamId id) {
    return derive_trial_seed(trial_seed, static_cast<std::uint64_t>(id));
}

}  // namespace rfshare::experiment
