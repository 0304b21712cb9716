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
#include <cstddef>
#include <span>
#include <vector>

#include "nvsense/constants.hpp"
#include "nvsense/errors.hpp"

namespace nvsense {

// IQ convention: S = I + iQ = A e^{i phi}, i.e. I = A cos phi, Q = A sin phi,
// phase in (-pi, pi].
struct IQSample {
    double i_val = 0.0;
    double q_val = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
};

inline IQSample iq_from_phasor(double amplitude, double phase) {
    if (!(amplitude >= 0.0)) throw InvalidInputError("iq_from_phasor: amplitude must be >= 0");
    IQSample s;
    s.i_val = amplitude * std::cos(phase);
    s.q_val = amplitude * std::sin(phase);
    s.amplitude = amplitude;
    s.phase = std::atan2(s.q_val, s.i_val);
    return s;
}

inline IQSample phasor_from_iq(double i_val, double q_val) {
    if (i_val == 0.0 && q_val == 0.0)
        throw UndefinedPhaseError("phasor_from_iq: phase of the zero phasor is undefined");
    IQSample s;
    s.i_val = i_val;
    s.q_val = q_val;
    s.amplitude = std::hypot(i_val, q_val);
    s.phase = std::atan2(q_val, i_val);
    return s;
}

// Time-domain demodulation oracle for a sampled waveform A cos(omega t - phi),
// sampled at t_n = n / sample_rate starting at t = 0. Multiplies by
// 2 cos(omega t) and 2 sin(omega t) (the factor 2 restores the gain the
// product-to-sum identity halves), low-passes with a one-carrier-period
// moving average, and averages the settled tail. The cutoff argument is
// validated against the carrier but the filter itself is the fixed moving
// average.
inline IQSample mix_and_filter(std::span<const double> rf, double omega, double sample_rate,
                               double cutoff) {
    if (!(omega > 0.0)) throw InvalidInputError("mix_and_filter: omega must be > 0");
    const double f_carrier = omega / two_pi;
    if (!(sample_rate > 10.0 * f_carrier))
        throw AliasingError("mix_and_filter: sample_rate must exceed 10x the carrier frequency");
    if (!(cutoff > 0.0 && cutoff < 0.5 * f_carrier))
        throw AliasingError("mix_and_filter: cutoff must lie below half the carrier frequency");
    const double span_cycles = static_cast<double>(rf.size()) / sample_rate * f_carrier;
    if (span_cycles < 20.0)
        throw AliasingError("mix_and_filter: waveform must span at least 20 carrier cycles");

    const std::size_t n = rf.size();
    std::vector<double> ci(n + 1, 0.0), cq(n + 1, 0.0);   // prefix sums of the mixed products
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / sample_rate;
        ci[k + 1] = ci[k] + rf[k] * 2.0 * std::cos(omega * t);
        cq[k + 1] = cq[k] + rf[k] * 2.0 * std::sin(omega * t);
    }

    const auto window = static_cast<std::size_t>(std::llround(sample_rate / f_carrier));
    double sum_i = 0.0, sum_q = 0.0;
    std::size_t count = 0;
    for (std::size_t end = window; end <= n; ++end) {
        sum_i += (ci[end] - ci[end - window]) / static_cast<double>(window);
        sum_q += (cq[end] - cq[end - window]) / static_cast<double>(window);
        ++count;
    }

    IQSample s;
    s.i_val = sum_i / static_cast<double>(count);
    s.q_val = sum_q / static_cast<double>(count);
    s.amplitude = std::hypot(s.i_val, s.q_val);
    s.phase = std::atan2(s.q_val, s.i_val);
    return s;
}

// N = |t|^2 P_in tau / (hbar omega_c): photons reaching the detector.
inline double photon_count(double power_in, double power_transmittance, double omega_c,
                           double tau) {
    if (!(power_in >= 0.0)) throw InvalidInputError("photon_count: power_in must be >= 0");
    if (!(power_transmittance >= 0.0))
        throw InvalidInputError("photon_count: power_transmittance must be >= 0");
    if (!(omega_c > 0.0)) throw InvalidInputError("photon_count: omega_c must be > 0");
    if (!(tau >= 0.0)) throw InvalidInputError("photon_count: tau must be >= 0");
    return power_transmittance * power_in * tau / (PhysConstants::hbar * omega_c);
}

// Shot-noise phase error of the demodulator, delta_phi = 10^(NF/20)/sqrt(N).
// NF = 0 dB is the standard quantum limit 1/sqrt(N).
inline double phase_noise(double n_photons, double nf_db) {
    if (!(n_photons > 0.0))
        throw InvalidInputError("phase_noise: n_photons must be > 0 (zero transmitted power "
                                "gives unbounded phase error)");
    return std::pow(10.0, nf_db / 20.0) / std::sqrt(n_photons);
}

struct PhaseNoise {
    double n_photons = 0.0;
    double nf_db = 0.0;
    double delta_phi = 0.0;
};

inline PhaseNoise make_phase_noise(double n_photons, double nf_db) {
    return {n_photons, nf_db, phase_noise(n_photons, nf_db)};
}

}  // namespace nvsense
