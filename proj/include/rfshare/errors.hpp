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

#include <stdexcept>
#include <string>

namespace rfshare {

/// Raised when a caller violates an operation's input contract
/// (mismatched lengths, out-of-range counts, malformed vectors).
class ContractError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Not enough trials on some measurement axis to form an estimate.
class InsufficientDataError : public ContractError {
   public:
    using ContractError::ContractError;
};

/// The estimated cosine vector is too short to define a direction.
class DegenerateEstimateError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace rfshare
