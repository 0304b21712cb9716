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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nvsense/demod.hpp"
#include "nvsense/errors.hpp"
#include "nvsense/lindblad.hpp"
#include "nvsense/model.hpp"
#include "nvsense/response.hpp"
#include "nvsense/scattering.hpp"

namespace nvsense {

// End-to-end pipeline parameters. The map sweeps move omega_cav and omega_ex
// relative to the spin; all other model quantities stay at their configured
// values. frozen_pops bypasses the Lindblad solve and is a test mode only.
struct PipelineConfig {
    SpinModel spin;
    CavityModel cavity;
    TwoModeCavityModel cav2;
    DriveModel drive;
    DemodModel demod;
    Channel channel = Channel::one_mode_t;
    double fd_step = 0.0;       // finite-difference step h, rad/s
    ChiMode chi_mode = ChiMode::rwa_term_only;
    double steady_tol = 1e-10;
    std::optional<LevelPopulations> frozen_pops;
};

inline void validate(const PipelineConfig& c) {
    validate(c.spin);
    validate(c.cavity);
    validate(c.cav2);
    validate(c.drive);
    validate(c.demod);
    if (!(c.fd_step > 0.0 && c.fd_step < c.spin.gamma_coh / 10.0))
        throw InvalidInputError("pipeline.fd_step must lie in (0, gamma_coh/10)");
    if (!(c.steady_tol > 0.0)) throw InvalidInputError("pipeline.steady_tol must be > 0");
}

enum class PointFlag : int {
    ok = 0,
    infinite = 1,   // eta = +inf from zero slope or zero photon flux
    failed = 2,     // a per-point computation error; stored, never rethrown by the map
};

inline const char* point_flag_name(PointFlag f) {
    switch (f) {
        case PointFlag::ok: return "ok";
        case PointFlag::infinite: return "infinite";
        case PointFlag::failed: return "failed";
    }
    return "?";
}

struct SensitivityPoint {
    double delta_cav = 0.0;     // omega_cav - omega_sys, rad/s
    double delta_ex = 0.0;      // omega_ex - omega_sys, rad/s
    double phase = 0.0;         // rad
    double slope = 0.0;         // d(phase)/d(omega_sys), rad/(rad/s)
    double n_photons = 0.0;
    double delta_phi = 0.0;     // rad
    double delta_omega = 0.0;   // rad/s
    double eta = 0.0;           // Tesla (T/sqrt(Hz) at tau = 1 s)
    PointFlag flag = PointFlag::ok;
};

struct PhasePoint {
    double phase = 0.0;
    double power_transmittance = 0.0;
};

namespace detail {

inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t fnv1a64_str(const std::string& s) { return fnv1a64(s.data(), s.size()); }

// Effective one-mode cavity at a sweep point: the resonator is tuned to
// omega_sys + delta_cav at constant Q and split, so kappa = omega_cav/Q
// holds at every point.
inline CavityModel swept_cavity(const PipelineConfig& c, double omega_sys, double delta_cav) {
    const double split = c.cavity.kappa > 0.0 ? c.cavity.kappa1 / c.cavity.kappa : 0.5;
    return make_cavity(omega_sys + delta_cav, c.cavity.q_factor, split, c.cavity.g_ens);
}

// Two-mode frequencies are rebased preserving their configured offsets from
// the one-mode cavity frequency; couplings and linewidths stay fixed.
inline TwoModeCavityModel swept_two_mode(const PipelineConfig& c, double omega_sys,
                                         double delta_cav) {
    TwoModeCavityModel m = c.cav2;
    m.omega1 = omega_sys + delta_cav + (c.cav2.omega1 - c.cavity.omega_cav);
    m.omega2 = omega_sys + delta_cav + (c.cav2.omega2 - c.cavity.omega_cav);
    return m;
}

inline double wrap_angle(double d) {
    if (d > 3.14159265358979323846) d -= two_pi;
    if (d <= -3.14159265358979323846) d += two_pi;
    return d;
}

}  // namespace detail

// Phase and power transmittance of the configured channel with
// omega_cav = omega_sys + delta_cav and omega_ex = omega_sys + delta_ex.
// The Lindblad steady state is driven at delta_ex.
inline PhasePoint response_phase(const PipelineConfig& config, double delta_cav, double delta_ex,
                                 double omega_sys) {
    SpinModel spin = config.spin;
    spin.omega_sys = omega_sys;
    const double omega_ex = omega_sys + delta_ex;

    LevelPopulations pops;
    if (config.frozen_pops) {
        pops = *config.frozen_pops;
        pops.energy = {-0.5 * omega_sys, 0.5 * omega_sys};
    } else {
        const auto rho = steady_state(
            liouvillian(rwa_hamiltonian(delta_ex, spin.rabi), dissipator_channels(spin)),
            config.steady_tol);
        pops = level_populations(rho, spin);
    }
    const std::complex<double> chi =
        susceptibility(spin, pops, omega_ex, config.chi_mode).value;

    ScatteringResponse resp;
    switch (config.channel) {
        case Channel::one_mode_t:
            resp = transmission_one_mode(detail::swept_cavity(config, omega_sys, delta_cav), chi,
                                         omega_ex);
            break;
        case Channel::one_mode_r:
            resp = reflection_one_mode(detail::swept_cavity(config, omega_sys, delta_cav), chi,
                                       omega_ex);
            break;
        case Channel::two_mode_s21:
            resp = s21_two_modes(detail::swept_two_mode(config, omega_sys, delta_cav), chi,
                                 omega_ex);
            break;
    }
    return {std::atan2(resp.amplitude.imag(), resp.amplitude.real()), resp.power_transmittance};
}

// Central difference d(phase)/d(omega_sys) at fixed omega_cav and omega_ex:
// shifting the spin by +-h shifts both detunings by -+h. The two half-step
// phase differences are unwrapped against the midpoint before differencing.
inline double phase_slope(const PipelineConfig& config, double delta_cav, double delta_ex,
                          double omega_sys) {
    const double h = config.fd_step;
    if (!(h > 0.0)) throw InvalidInputError("phase_slope: fd_step must be > 0");

    const double phi0 = response_phase(config, delta_cav, delta_ex, omega_sys).phase;
    const double phip = response_phase(config, delta_cav - h, delta_ex - h, omega_sys + h).phase;
    const double phim = response_phase(config, delta_cav + h, delta_ex + h, omega_sys - h).phase;

    const double dp = detail::wrap_angle(phip - phi0);
    const double dm = detail::wrap_angle(phi0 - phim);
    if (std::abs(dp) + std::abs(dm) > 3.14159265358979323846)
        throw StepTooLargeError(
            "phase_slope: phase wraps by more than pi across the stencil; reduce fd_step");
    return (dp + dm) / (2.0 * h);
}

// Full shot-noise sensitivity at one sweep point: eta = delta_omega / gamma_e
// with delta_omega = delta_phi / |slope|. Zero photon flux or zero slope give
// eta = +inf with the infinite flag, never an abort. The photon-count carrier
// is the swept cavity frequency.
inline SensitivityPoint shot_noise_sensitivity(const PipelineConfig& config, double delta_cav,
                                               double delta_ex, double omega_sys) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    SensitivityPoint pt;
    pt.delta_cav = delta_cav;
    pt.delta_ex = delta_ex;

    const PhasePoint rp = response_phase(config, delta_cav, delta_ex, omega_sys);
    pt.phase = rp.phase;
    pt.n_photons = photon_count(config.drive.power_in, rp.power_transmittance,
                                omega_sys + delta_cav, config.drive.tau);
    if (pt.n_photons <= 0.0) {
        // No photons reach the detector; the slope stencil is meaningless.
        pt.slope = 0.0;
        pt.delta_phi = inf;
        pt.delta_omega = inf;
        pt.eta = inf;
        pt.flag = PointFlag::infinite;
        return pt;
    }

    pt.slope = phase_slope(config, delta_cav, delta_ex, omega_sys);
    pt.delta_phi = phase_noise(pt.n_photons, config.demod.nf_db);
    if (pt.slope == 0.0) {
        pt.delta_omega = inf;
        pt.eta = inf;
        pt.flag = PointFlag::infinite;
        return pt;
    }
    pt.delta_omega = pt.delta_phi / std::abs(pt.slope);
    pt.eta = pt.delta_omega / PhysConstants::gamma_e;
    return pt;
}

struct SensitivityMap {
    std::vector<double> delta_cav_axis;   // rad/s, strictly increasing
    std::vector<double> delta_ex_axis;    // rad/s, strictly increasing
    std::vector<SensitivityPoint> values; // row-major [i_cav * n_ex + j_ex]
    Channel channel = Channel::one_mode_t;
    std::string fingerprint;

    std::size_t n_cav() const { return delta_cav_axis.size(); }
    std::size_t n_ex() const { return delta_ex_axis.size(); }
    const SensitivityPoint& at(std::size_t i, std::size_t j) const {
        return values[i * delta_ex_axis.size() + j];
    }
};

// Opaque digest of every pipeline parameter that affects map values.
inline std::string pipeline_fingerprint(const PipelineConfig& c) {
    const double nums[] = {
        c.spin.omega_sys, c.spin.rabi, c.spin.gamma_coh, c.spin.pump_rate, c.spin.t1_rate,
        c.spin.thermal_rate, c.spin.dephasing_rate, c.spin.z_element,
        c.cavity.omega_cav, c.cavity.q_factor, c.cavity.kappa, c.cavity.kappa1, c.cavity.kappa2,
        c.cavity.g_ens,
        c.cav2.omega1, c.cav2.omega2, c.cav2.kappa1, c.cav2.kappa2, c.cav2.g1, c.cav2.g2,
        c.drive.omega_ex, c.drive.power_in, c.drive.tau,
        c.demod.nf_db,
        c.fd_step, c.steady_tol,
        static_cast<double>(static_cast<int>(c.channel)),
        static_cast<double>(static_cast<int>(c.chi_mode)),
        c.frozen_pops ? c.frozen_pops->p[0] : -1.0,
        c.frozen_pops ? c.frozen_pops->p[1] : -1.0,
    };
    const std::uint64_t h = detail::fnv1a64(nums, sizeof(nums));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

namespace detail {

inline void check_axis(const std::vector<double>& axis, const char* name) {
    if (axis.empty()) throw InvalidInputError(std::string(name) + " axis must be nonempty");
    for (std::size_t i = 1; i < axis.size(); ++i)
        if (!(axis[i] > axis[i - 1]))
            throw InvalidInputError(std::string(name) + " axis must be strictly increasing");
}

}  // namespace detail

// Grid of shot-noise sensitivities. Points are independent; the grid is
// partitioned across workers by index, so the result is bit-identical for
// any worker count. Per-point failures are stored as +inf with the failed
// flag rather than aborting the map.
inline SensitivityMap sensitivity_map(const PipelineConfig& config,
                                      const std::vector<double>& delta_cav_axis,
                                      const std::vector<double>& delta_ex_axis,
                                      unsigned workers = 1) {
    validate(config);
    detail::check_axis(delta_cav_axis, "delta_cav");
    detail::check_axis(delta_ex_axis, "delta_ex");

    SensitivityMap map;
    map.delta_cav_axis = delta_cav_axis;
    map.delta_ex_axis = delta_ex_axis;
    map.channel = config.channel;
    map.fingerprint = pipeline_fingerprint(config);
    const std::size_t n_cav = delta_cav_axis.size();
    const std::size_t n_ex = delta_ex_axis.size();
    map.values.resize(n_cav * n_ex);

    const double omega_sys = config.spin.omega_sys;
    auto compute_range = [&](std::size_t lo, std::size_t hi) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        for (std::size_t k = lo; k < hi; ++k) {
            const std::size_t i = k / n_ex;
            const std::size_t j = k % n_ex;
            try {
                map.values[k] =
                    shot_noise_sensitivity(config, delta_cav_axis[i], delta_ex_axis[j], omega_sys);
            } catch (const std::exception&) {
                SensitivityPoint pt;
                pt.delta_cav = delta_cav_axis[i];
                pt.delta_ex = delta_ex_axis[j];
                pt.delta_phi = inf;
                pt.delta_omega = inf;
                pt.eta = inf;
                pt.flag = PointFlag::failed;
                map.values[k] = pt;
            }
        }
    };

    const std::size_t total = map.values.size();
    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));
    if (n_workers == 1) {
        compute_range(0, total);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        const std::size_t chunk = (total + n_workers - 1) / n_workers;
        for (unsigned w = 0; w < n_workers; ++w) {
            const std::size_t lo = std::min<std::size_t>(w * chunk, total);
            const std::size_t hi = std::min<std::size_t>(lo + chunk, total);
            pool.emplace_back(compute_range, lo, hi);
        }
        for (auto& t : pool) t.join();
    }
    return map;
}

enum class RatioFlag : int {
    ok = 0,
    undefined = 1,   // inf/inf or 0/0
};

struct RatioMap {
    std::vector<double> delta_cav_axis;
    std::vector<double> delta_ex_axis;
    std::vector<double> values;       // row-major, same layout as SensitivityMap
    std::vector<RatioFlag> flags;
    std::string fingerprint;

    double at(std::size_t i, std::size_t j) const { return values[i * delta_ex_axis.size() + j]; }
};

// Pointwise eta1/eta2. Undefined quotients (inf/inf) are stored as flagged NaN.
inline RatioMap ratio_map(const SensitivityMap& m1, const SensitivityMap& m2) {
    if (m1.delta_cav_axis != m2.delta_cav_axis || m1.delta_ex_axis != m2.delta_ex_axis)
        throw InvalidInputError("ratio_map: axes of the two maps do not match");
    RatioMap r;
    r.delta_cav_axis = m1.delta_cav_axis;
    r.delta_ex_axis = m1.delta_ex_axis;
    r.fingerprint = m1.fingerprint + ":" + m2.fingerprint;
    r.values.resize(m1.values.size());
    r.flags.resize(m1.values.size());
    for (std::size_t k = 0; k < m1.values.size(); ++k) {
        const double q = m1.values[k].eta / m2.values[k].eta;
        r.values[k] = q;
        r.flags[k] = std::isnan(q) ? RatioFlag::undefined : RatioFlag::ok;
    }
    return r;
}

struct SliceCurve {
    double delta_ex = 0.0;              // axis value actually sliced at, rad/s
    std::vector<double> delta_cav;      // rad/s
    std::vector<double> value;
};

namespace detail {

inline std::size_t nearest_index(const std::vector<double>& axis, double x) {
    if (!(x >= axis.front() && x <= axis.back()))
        throw InvalidInputError("resonant_slice: delta_ex outside the axis range");
    std::size_t best = 0;
    double best_d = std::abs(axis[0] - x);
    for (std::size_t j = 1; j < axis.size(); ++j) {
        const double d = std::abs(axis[j] - x);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

}  // namespace detail

// Sensitivity along delta_cav at the delta_ex axis point nearest the request.
inline SliceCurve resonant_slice(const SensitivityMap& map, double delta_ex = 0.0) {
    const std::size_t j = detail::nearest_index(map.delta_ex_axis, delta_ex);
    SliceCurve c;
    c.delta_ex = map.delta_ex_axis[j];
    c.delta_cav = map.delta_cav_axis;
    c.value.reserve(map.n_cav());
    for (std::size_t i = 0; i < map.n_cav(); ++i) c.value.push_back(map.at(i, j).eta);
    return c;
}

inline SliceCurve resonant_slice(const RatioMap& map, double delta_ex = 0.0) {
    const std::size_t j = detail::nearest_index(map.delta_ex_axis, delta_ex);
    SliceCurve c;
    c.delta_ex = map.delta_ex_axis[j];
    c.delta_cav = map.delta_cav_axis;
    c.value.reserve(map.delta_cav_axis.size());
    for (std::size_t i = 0; i < map.delta_cav_axis.size(); ++i) c.value.push_back(map.at(i, j));
    return c;
}

}  // namespace nvsense
