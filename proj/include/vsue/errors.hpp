// Copyright 2026 The vsue-sim Authors
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

namespace vsue {

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Dimension or length mismatch between operands.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Result would exceed a configured size limit.
struct SizeError : std::length_error {
    using std::length_error::length_error;
};

/// Inconsistent or invalid parameters handed to a simulator or CLI.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Hash seed with a = 0 has no inverse.
struct NonInvertibleSeedError : DomainError {
    using DomainError::DomainError;
};

/// Iterative method ran out of budget before meeting its tolerance.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace vsue
