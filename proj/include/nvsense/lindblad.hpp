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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "nvsense/errors.hpp"
#include "nvsense/model.hpp"

namespace nvsense {

// Basis convention, used everywhere: index 0 = |g> (m_s 0), index 1 = |e>
// (m_s -1), and sigma_z|g> = +|g>. With this sign, the de-exciting jump
// operator |g><e| is sigma_+ = (sigma_x + i sigma_y)/2; to avoid that trap
// the jump constants below are named by their action on populations.

using OperatorMatrix = Eigen::Matrix2cd;
using Superoperator = Eigen::Matrix4cd;

namespace ops {

inline OperatorMatrix identity() { return OperatorMatrix::Identity(); }

inline OperatorMatrix sigma_x() {
    OperatorMatrix m;
    m << 0, 1, 1, 0;
    return m;
}

inline OperatorMatrix sigma_y() {
    OperatorMatrix m;
    m << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
    return m;
}

inline OperatorMatrix sigma_z() {
    OperatorMatrix m;
    m << 1, 0, 0, -1;
    return m;
}

// |g><e| : moves population e -> g.
inline OperatorMatrix lower() {
    OperatorMatrix m;
    m << 0, 1, 0, 0;
    return m;
}

// |e><g| : moves population g -> e.
inline OperatorMatrix raise() {
    OperatorMatrix m;
    m << 0, 0, 1, 0;
    return m;
}

}  // namespace ops

struct DissipatorChannel {
    OperatorMatrix jump;   // L_j
    double rate = 0.0;     // 1/s
};

// Dissipator set of a spin model. The sigma_z channel carries half the pure
// dephasing rate so that the off-diagonal decay it contributes is exactly
// dephasing_rate, making consistent_gamma_coh() the actual coherence decay.
inline std::vector<DissipatorChannel> dissipator_channels(const SpinModel& s) {
    std::vector<DissipatorChannel> ch;
    if (s.pump_rate > 0.0) ch.push_back({ops::lower(), s.pump_rate});
    if (s.t1_rate > 0.0) ch.push_back({ops::lower(), s.t1_rate});
    if (s.thermal_rate > 0.0) ch.push_back({ops::raise(), s.thermal_rate});
    if (s.dephasing_rate > 0.0) ch.push_back({ops::sigma_z(), 0.5 * s.dephasing_rate});
    return ch;
}

struct DensityMatrix {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();

    double p_g() const { return m(0, 0).real(); }
    double p_e() const { return m(1, 1).real(); }
};

inline DensityMatrix ground_state() {
    DensityMatrix rho;
    rho.m(0, 0) = 1.0;
    return rho;
}

inline DensityMatrix excited_state() {
    DensityMatrix rho;
    rho.m(1, 1) = 1.0;
    return rho;
}

struct LevelPopulations {
    std::array<double, 2> p{};        // {p_g, p_e}, sums to 1
    std::array<double, 2> energy{};   // {E_g, E_e}, rad/s

    double p_g() const { return p[0]; }
    double p_e() const { return p[1]; }
};

// Lab-frame level energies: E_e - E_g = omega_sys.
inline LevelPopulations level_populations(const DensityMatrix& rho, const SpinModel& spin) {
    LevelPopulations lp;
    lp.p = {rho.p_g(), rho.p_e()};
    lp.energy = {-0.5 * spin.omega_sys, 0.5 * spin.omega_sys};
    return lp;
}

// H_RWA = (detuning/2) sigma_z - (rabi/2) sigma_x with detuning = omega - omega_sys.
inline OperatorMatrix rwa_hamiltonian(double detuning, double rabi) {
    return 0.5 * detuning * ops::sigma_z() - 0.5 * rabi * ops::sigma_x();
}

namespace detail {

// Kronecker product with A-major blocks: (A (x) B)(2i+k, 2j+l) = A(i,j) B(k,l).
inline Superoperator kron2(const OperatorMatrix& a, const OperatorMatrix& b) {
    Superoperator k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return k;
}

// Column-stacking vectorization, so vec(A rho B) = (B^T (x) A) vec(rho).
inline Eigen::Vector4cd vec(const Eigen::Matrix2cd& rho) {
    return Eigen::Map<const Eigen::Vector4cd>(rho.data());
}

inline Eigen::Matrix2cd unvec(const Eigen::Vector4cd& v) {
    return Eigen::Map<const Eigen::Matrix2cd>(v.data());
}

}  // namespace detail

// Matrix form of rho_dot = -i[H, rho] + sum_j rate_j (L rho L^+ - {L^+ L, rho}/2)
// on column-vectorized rho.
inline Superoperator liouvillian(const OperatorMatrix& h,
                                 const std::vector<DissipatorChannel>& channels) {
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw InvalidInputError("liouvillian: Hamiltonian is not Hermitian");
    for (const auto& c : channels)
        if (!(c.rate >= 0.0)) throw InvalidInputError("liouvillian: channel rate must be >= 0");

    const OperatorMatrix id = ops::identity();
    const std::complex<double> im(0.0, 1.0);
    Superoperator m = -im * (detail::kron2(id, h) - detail::kron2(h.transpose(), id));
    for (const auto& c : channels) {
        const OperatorMatrix ldl = c.jump.adjoint() * c.jump;
        m += c.rate * (detail::kron2(c.jump.conjugate(), c.jump) -
                       0.5 * detail::kron2(id, ldl) -
                       0.5 * detail::kron2(ldl.transpose(), id));
    }
    return m;
}

// Unique steady state of a Liouvillian with a nondegenerate null space,
// obtained from the bordered system [L; trace row] vec(rho) = [0; 1] by a
// full-pivot QR decomposition. The generator is normalized to unit max
// magnitude first, so the residual check is scale-invariant.
inline DensityMatrix steady_state(const Superoperator& l, double residual_tol = 1e-10) {
    const double scale = l.cwiseAbs().maxCoeff();
    if (scale == 0.0)
        throw IllPosedSteadyStateError(
            "steady_state: zero Liouvillian, the null space is fully degenerate");

    Eigen::Matrix<std::complex<double>, 5, 4> bordered;
    bordered.topRows<4>() = l / scale;
    bordered.row(4) << 1, 0, 0, 1;   // trace functional on vec(rho)
    Eigen::Matrix<std::complex<double>, 5, 1> rhs;
    rhs << 0, 0, 0, 0, 1;

    Eigen::FullPivHouseholderQR<Eigen::Matrix<std::complex<double>, 5, 4>> qr(bordered);
    if (qr.rank() < 4)
        throw IllPosedSteadyStateError(
            "steady_state: degenerate null space (no population-mixing channel, e.g. a "
            "dephasing-only dissipator set)");
    const Eigen::Vector4cd v = qr.solve(rhs);

    const double residual = ((l / scale) * v).norm();
    if (residual > residual_tol)
        throw IllPosedSteadyStateError("steady_state: residual " + std::to_string(residual) +
                                       " exceeds tolerance");

    DensityMatrix rho;
    rho.m = detail::unvec(v);
    rho.m = 0.5 * (rho.m + rho.m.adjoint().eval());   // exact Hermitian part
    rho.m /= rho.m.trace().real();

    // 2x2 Hermitian spectrum check: trace 1, so lambda = 1/2 +- sqrt(1/4 - det).
    const double det = rho.m.determinant().real();
    const double lambda_min = 0.5 - std::sqrt(std::max(0.25 - det, 0.0));
    if (lambda_min < -1e-12)
        throw IllPosedSteadyStateError("steady_state: solution is not positive semidefinite");
    return rho;
}

// Spectral radius of the generator; used to police the integrator step.
inline double spectral_radius(const Superoperator& l) {
    return l.eigenvalues().cwiseAbs().maxCoeff();
}

// Slowest nonzero relaxation rate |Re lambda| of the generator.
inline double slowest_relaxation_rate(const Superoperator& l) {
    const auto ev = l.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    double slowest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        const double re = std::abs(ev(i).real());
        if (re > 1e-12 * scale) slowest = std::min(slowest, re);
    }
    return slowest;
}

// Fixed-step classical fourth-order integration of vec(rho_dot) = L vec(rho).
// This is the test oracle for steady_state, not a performance path.
inline DensityMatrix evolve(const Superoperator& l, const DensityMatrix& rho0, double duration,
                            double step) {
    if (!(step > 0.0)) throw InvalidInputError("evolve: step must be > 0");
    if (!(duration >= 0.0)) throw InvalidInputError("evolve: duration must be >= 0");
    if (step * spectral_radius(l) >= 0.1)
        throw StabilityError("evolve: step * spectral_radius(L) must stay below 0.1");

    Eigen::Vector4cd v = detail::vec(rho0.m);
    auto rk4 = [&l](Eigen::Vector4cd& y, double dt) {
        const Eigen::Vector4cd k1 = l * y;
        const Eigen::Vector4cd k2 = l * (y + 0.5 * dt * k1);
        const Eigen::Vector4cd k3 = l * (y + 0.5 * dt * k2);
        const Eigen::Vector4cd k4 = l * (y + dt * k3);
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    const auto n_full = static_cast<long long>(duration / step);
    for (long long i = 0; i < n_full; ++i) rk4(v, step);
    const double rem = duration - static_cast<double>(n_full) * step;
    if (rem > 1e-12 * step) rk4(v, rem);

    DensityMatrix rho;
    rho.m = detail::unvec(v);
    return rho;
}

struct PopulationCurve {
    std::vector<double> detunings;              // rad/s, strictly increasing
    std::vector<LevelPopulations> populations;
};

// Steady-state populations swept over the drive detuning.
inline PopulationCurve population_curve(const SpinModel& spin,
                                        const std::vector<double>& detunings,
                                        double residual_tol = 1e-10) {
    validate(spin);
    if (detunings.empty()) throw InvalidInputError("population_curve: empty detuning grid");
    for (std::size_t i = 1; i < detunings.size(); ++i)
        if (!(detunings[i] > detunings[i - 1]))
            throw InvalidInputError("population_curve: detunings must be strictly increasing");

    const auto channels = dissipator_channels(spin);
    PopulationCurve curve;
    curve.detunings = detunings;
    curve.populations.reserve(detunings.size());
    for (double delta : detunings) {
        const auto rho = steady_state(liouvillian(rwa_hamiltonian(delta, spin.rabi), channels),
                                      residual_tol);
        curve.populations.push_back(level_populations(rho, spin));
    }
    return curve;
}

}  // namespace nvsense
