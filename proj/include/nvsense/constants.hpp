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

namespace nvsense {

// Physical constants. Fixed CODATA values, never configurable.
struct PhysConstants {
    static constexpr double hbar = 1.054571817e-34;     // J s
    static constexpr double gamma_e = 1.76085963e11;    // rad/(s T), electron gyromagnetic ratio
    static constexpr double k_B = 1.380649e-23;         // J/K
};

inline constexpr double two_pi = 6.283185307179586476925286766559;

}  // namespace nvsense
