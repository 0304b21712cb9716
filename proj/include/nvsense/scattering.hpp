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

#include <cmath>
#include <complex>

#include "nvsense/errors.hpp"
#include "nvsense/model.hpp"

namespace nvsense {

enum class Channel {
    one_mode_t,
    one_mode_r,
    two_mode_s21,
};

inline const char* channel_name(Channel c) {
    switch (c) {
        case Channel::one_mode_t: return "one_mode_t";
        case Channel::one_mode_r: return "one_mode_r";
        case Channel::two_mode_s21: return "two_mode_s21";
    }
    return "?";
}

// Complex port amplitude ratio b_out / b_in for one probe frequency.
struct ScatteringResponse {
    double omega = 0.0;                   // rad/s
    std::complex<double> amplitude{};
    Channel channel = Channel::one_mode_t;
    double power_transmittance = 0.0;     // |amplitude|^2
};

// t = i sqrt(k1 k2) / (omega_cav - omega + g^2 chi - i kappa/2).
inline ScatteringResponse transmission_one_mode(const CavityModel& cavity,
                                                std::complex<double> chi, double omega) {
    if (!(omega > 0.0)) throw InvalidInputError("transmission_one_mode: omega must be > 0");
    const std::complex<double> den =
        cavity.omega_cav - omega + cavity.g_ens * cavity.g_ens * chi -
        std::complex<double>(0.0, 0.5 * cavity.kappa);
    const std::complex<double> amp =
        std::complex<double>(0.0, std::sqrt(cavity.kappa1 * cavity.kappa2)) / den;
    return {omega, amp, Channel::one_mode_t, std::norm(amp)};
}

// r = 1 + i k1 / (omega_cav - omega + g^2 chi - i kappa/2).
inline ScatteringResponse reflection_one_mode(const CavityModel& cavity,
                                              std::complex<double> chi, double omega) {
    if (!(omega > 0.0)) throw InvalidInputError("reflection_one_mode: omega must be > 0");
    const std::complex<double> den =
        cavity.omega_cav - omega + cavity.g_ens * cavity.g_ens * chi -
        std::complex<double>(0.0, 0.5 * cavity.kappa);
    const std::complex<double> amp = 1.0 + std::complex<double>(0.0, cavity.kappa1) / den;
    return {omega, amp, Channel::one_mode_r, std::norm(amp)};
}

// Port-1 to port-2 transmission through two orthogonal modes. The numerator
// is proportional to chi: with the spin far detuned (chi -> 0) the ports are
// decoupled and S21 vanishes identically.
//
//        g1 g2 chi sqrt(k1 k2)
// S21 = ------------------------------------------------------------------
//       (i(w - w1) - i g1^2 chi - k1/2)(i(w - w2) - i g2^2 chi - k2/2)
//                                                         + g1^2 g2^2 chi^2
inline ScatteringResponse s21_two_modes(const TwoModeCavityModel& c, std::complex<double> chi,
                                        double omega_ex) {
    if (!(omega_ex > 0.0)) throw InvalidInputError("s21_two_modes: omega_ex must be > 0");
    const std::complex<double> im(0.0, 1.0);
    const std::complex<double> f1 =
        im * (omega_ex - c.omega1) - im * (c.g1 * c.g1) * chi - 0.5 * c.kappa1;
    const std::complex<double> f2 =
        im * (omega_ex - c.omega2) - im * (c.g2 * c.g2) * chi - 0.5 * c.kappa2;
    const std::complex<double> num = c.g1 * c.g2 * chi * std::sqrt(c.kappa1 * c.kappa2);
    const std::complex<double> den = f1 * f2 + (c.g1 * c.g1) * (c.g2 * c.g2) * chi * chi;
    const std::complex<double> amp = num / den;
    return {omega_ex, amp, Channel::two_mode_s21, std::norm(amp)};
}

}  // namespace nvsense
