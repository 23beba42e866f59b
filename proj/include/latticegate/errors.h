// Copyright 2026 The latticegate Authors
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

#ifndef LATTICEGATE_ERRORS_H
#define LATTICEGATE_ERRORS_H

#include <stdexcept>
#include <string>

namespace latticegate {

/// Input outside the domain of a physical formula (non-positive wavelength, negative depth, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct CalibrationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A pulse sequence that has not been validated, or failed validation, was handed to an engine.
struct ProtocolError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Requested system size exceeds a configured engine limit.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace latticegate

#endif
