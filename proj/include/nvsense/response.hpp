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

#include <complex>

#include "nvsense/errors.hpp"
#include "nvsense/lindblad.hpp"
#include "nvsense/model.hpp"

namespace nvsense {

// Term selection for the linear-response sum. rwa_term_only keeps the
// near-resonant term and matches the regime the scattering formulas assume;
// both_terms adds the counter-rotating one for sensitivity analysis.
enum class ChiMode {
    rwa_term_only,
    both_terms,
};

// One chi(omega) sample together with the populations that produced it.
// Sign convention, fixed project-wide: the resonant denominator is
// omega - omega_sys + i gamma/2, so Im chi <= 0 for non-inverted populations.
struct Susceptibility {
    double omega = 0.0;                   // rad/s
    std::complex<double> value{};         // 1/(rad/s)
    LevelPopulations populations{};
    ChiMode mode = ChiMode::rwa_term_only;
};

inline Susceptibility susceptibility(const SpinModel& spin, const LevelPopulations& pops,
                                     double omega, ChiMode mode = ChiMode::rwa_term_only) {
    if (!(omega > 0.0)) throw InvalidInputError("susceptibility: omega must be > 0");

    const double z2 = spin.z_element * spin.z_element;
    const double contrast = pops.p_g() - pops.p_e();
    const std::complex<double> half_gamma(0.0, 0.5 * spin.gamma_coh);

    // (m, n) = (g, e): E_g - E_e = -omega_sys.
    const std::complex<double> resonant_den = omega + (pops.energy[0] - pops.energy[1]) + half_gamma;
    if (resonant_den == std::complex<double>(0.0, 0.0))
        throw SingularityError("susceptibility: pole on the real axis (gamma_coh = 0 at resonance)");
    std::complex<double> chi = contrast * z2 / resonant_den;

    if (mode == ChiMode::both_terms) {
        // (m, n) = (e, g): the counter-rotating partner.
        const std::complex<double> cr_den = omega + (pops.energy[1] - pops.energy[0]) + half_gamma;
        if (cr_den == std::complex<double>(0.0, 0.0))
            throw SingularityError("susceptibility: pole on the real axis in counter-rotating term");
        chi += -contrast * z2 / cr_den;
    }

    return Susceptibility{omega, chi, pops, mode};
}

}  // namespace nvsense
