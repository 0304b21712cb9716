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

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "nvsense/errors.hpp"

namespace nvsense {

// All frequencies and rates below are angular (rad/s for frequencies,
// 1/s for incoherent rates). Configuration files speak ordinary Hz; the
// loader multiplies by 2*pi exactly once.

// Effective two-level spin: |g> = m_s 0, |e> = m_s -1.
struct SpinModel {
    double omega_sys = 0.0;        // transition frequency, rad/s
    double rabi = 0.0;             // Rabi frequency Omega_R, rad/s
    double gamma_coh = 0.0;        // coherence decay rate of the response function, 1/s
    double pump_rate = 0.0;        // incoherent optical pumping |e> -> |g>, 1/s
    double t1_rate = 0.0;          // longitudinal relaxation |e> -> |g>, 1/s
    double thermal_rate = 0.0;     // thermal excitation |g> -> |e>, 1/s
    double dephasing_rate = 0.0;   // pure dephasing, 1/s
    double z_element = 1.0;        // |Z_ge|, dimensionless transition matrix element
};

// Coherence decay implied by the dissipator set: half the total population
// transfer rate plus pure dephasing. Offered as a consistency helper, not
// enforced: gamma_coh may be set independently.
inline double consistent_gamma_coh(const SpinModel& s) {
    return 0.5 * (s.pump_rate + s.t1_rate + s.thermal_rate) + s.dephasing_rate;
}

inline void validate(const SpinModel& s) {
    if (!(s.omega_sys > 0.0)) throw InvalidInputError("spin.omega_sys must be > 0");
    if (!(s.gamma_coh > 0.0)) throw InvalidInputError("spin.gamma_coh must be > 0");
    if (!(s.rabi >= 0.0)) throw InvalidInputError("spin.rabi must be >= 0");
    if (!(s.pump_rate >= 0.0)) throw InvalidInputError("spin.pump_rate must be >= 0");
    if (!(s.t1_rate >= 0.0)) throw InvalidInputError("spin.t1_rate must be >= 0");
    if (!(s.thermal_rate >= 0.0)) throw InvalidInputError("spin.thermal_rate must be >= 0");
    if (!(s.dephasing_rate >= 0.0)) throw InvalidInputError("spin.dephasing_rate must be >= 0");
    if (!(s.z_element >= 0.0)) throw InvalidInputError("spin.z_element must be >= 0");
}

// Single-mode cavity with two ports. kappa = omega_cav / Q, split as
// kappa1 + kappa2 = kappa.
struct CavityModel {
    double omega_cav = 0.0;   // rad/s
    double q_factor = 0.0;    // loaded quality factor
    double kappa = 0.0;       // total loss, rad/s
    double kappa1 = 0.0;      // input port coupling, rad/s
    double kappa2 = 0.0;      // output port coupling, rad/s
    double g_ens = 0.0;       // collective coupling, rad/s
};

// split_fraction f gives kappa1 = f*kappa; kappa2 is computed as the exact
// complement so the loss split sums back to kappa at machine precision.
inline CavityModel make_cavity(double omega_cav, double q_factor, double split_fraction,
                               double g_ens) {
    if (!(omega_cav > 0.0)) throw InvalidInputError("cavity.omega_cav must be > 0");
    if (!(q_factor > 0.0)) throw InvalidInputError("cavity.q_factor must be > 0");
    if (!(split_fraction >= 0.0 && split_fraction <= 1.0))
        throw InvalidInputError("cavity.split_fraction must lie in [0, 1]");
    if (!(g_ens >= 0.0)) throw InvalidInputError("cavity.g_ens must be >= 0");
    CavityModel c;
    c.omega_cav = omega_cav;
    c.q_factor = q_factor;
    c.kappa = omega_cav / q_factor;
    c.kappa1 = split_fraction * c.kappa;
    c.kappa2 = c.kappa - c.kappa1;
    return c;
}

// Collective coupling from the single-spin coupling and the ensemble size.
inline double collective_coupling(double g_single, double n_spins) {
    if (!(g_single >= 0.0)) throw InvalidInputError("g_single must be >= 0");
    if (!(n_spins >= 0.0)) throw InvalidInputError("n_spins must be >= 0");
    return g_single * std::sqrt(n_spins);
}

inline void validate(const CavityModel& c) {
    if (!(c.omega_cav > 0.0)) throw InvalidInputError("cavity.omega_cav must be > 0");
    if (!(c.q_factor > 0.0)) throw InvalidInputError("cavity.q_factor must be > 0");
    if (!(c.kappa1 >= 0.0)) throw InvalidInputError("cavity.kappa1 must be >= 0");
    if (!(c.kappa2 >= 0.0)) throw InvalidInputError("cavity.kappa2 must be >= 0");
    if (!(c.g_ens >= 0.0)) throw InvalidInputError("cavity.g_ens must be >= 0");
    const double tol = 8.0 * 2.220446049250313e-16 * c.kappa;
    if (std::abs(c.kappa - c.omega_cav / c.q_factor) > tol)
        throw InvalidInputError("cavity.kappa must equal omega_cav / q_factor");
    if (std::abs(c.kappa1 + c.kappa2 - c.kappa) > tol)
        throw InvalidInputError("cavity.kappa1 + cavity.kappa2 must equal cavity.kappa");
}

// Two geometrically orthogonal cavity modes, each wired to its own port.
// Port 2 input is vacuum by construction.
struct TwoModeCavityModel {
    double omega1 = 0.0;   // rad/s
    double omega2 = 0.0;   // rad/s
    double kappa1 = 0.0;   // rad/s
    double kappa2 = 0.0;   // rad/s
    double g1 = 0.0;       // rad/s
    double g2 = 0.0;       // rad/s
};

// g1/g2 = 0 are admitted (uncoupled mode): the S21 channel is well defined
// and identically zero there.
inline void validate(const TwoModeCavityModel& c) {
    if (!(c.omega1 > 0.0)) throw InvalidInputError("two_mode.omega1 must be > 0");
    if (!(c.omega2 > 0.0)) throw InvalidInputError("two_mode.omega2 must be > 0");
    if (!(c.kappa1 > 0.0)) throw InvalidInputError("two_mode.kappa1 must be > 0");
    if (!(c.kappa2 > 0.0)) throw InvalidInputError("two_mode.kappa2 must be > 0");
    if (!(c.g1 >= 0.0)) throw InvalidInputError("two_mode.g1 must be >= 0");
    if (!(c.g2 >= 0.0)) throw InvalidInputError("two_mode.g2 must be >= 0");
}

struct DriveModel {
    double omega_ex = 0.0;   // external field frequency, rad/s
    double power_in = 0.0;   // W
    double tau = 0.0;        // observation time, s
};

inline void validate(const DriveModel& d) {
    if (!(d.omega_ex > 0.0)) throw InvalidInputError("drive.omega_ex must be > 0");
    if (!(d.power_in > 0.0)) throw InvalidInputError("drive.power_in must be > 0");
    if (!(d.tau > 0.0)) throw InvalidInputError("drive.tau must be > 0");
}

struct DemodModel {
    double nf_db = 0.0;   // noise figure, dB
};

inline void validate(const DemodModel& d) {
    if (!(d.nf_db >= 0.0)) throw InvalidInputError("demod.nf_db must be >= 0");
}

// Dispersive-regime check: kappa, |omega - omega_cav| and the dispersive
// shift must all be small against omega_cav. Advisory only; never aborts
// a computation.
struct RegimeReport {
    std::array<double, 3> ratios{};   // kappa, detuning, |g^2 Re chi|, each over omega_cav
    bool pass = false;
    double threshold = 0.0;
};

inline RegimeReport validate_regime(const CavityModel& cavity, std::complex<double> chi,
                                    double omega, double threshold) {
    if (!(omega > 0.0)) throw InvalidInputError("validate_regime: omega must be > 0");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw InvalidInputError("validate_regime: threshold must lie in (0, 1)");
    validate(cavity);
    RegimeReport r;
    r.threshold = threshold;
    r.ratios[0] = cavity.kappa / cavity.omega_cav;
    r.ratios[1] = std::abs(omega - cavity.omega_cav) / cavity.omega_cav;
    r.ratios[2] = std::abs(cavity.g_ens * cavity.g_ens * chi.real()) / cavity.omega_cav;
    r.pass = r.ratios[0] < threshold && r.ratios[1] < threshold && r.ratios[2] < threshold;
    return r;
}

}  // namespace nvsense
