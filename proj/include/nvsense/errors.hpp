// Copyright 2026 The nvsense Authors
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

namespace nvsense {

// Bad argument values (non-positive frequencies, negative rates, ...).
struct InvalidInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The Liouvillian null space is degenerate; no unique steady state exists.
struct IllPosedSteadyStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integrator step too large for the spectral radius of the generator.
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sampling preconditions of the mixing oracle violated.
struct AliasingError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Response function evaluated on a real-axis pole.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Phase of the zero phasor requested.
struct UndefinedPhaseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Finite-difference stencil straddles a phase wrap.
struct StepTooLargeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration file problems; carries the offending key when known.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nvsense
