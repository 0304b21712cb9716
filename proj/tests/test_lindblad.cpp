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

#include "nvsense/lindblad.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <random>

using namespace nvsense;
using Catch::Approx;
using std::complex;

namespace {

Eigen::Matrix2cd random_hermitian(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::Matrix2cd a;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a(i, j) = complex<double>(u(rng), u(rng)) * scale;
    return 0.5 * (a + a.adjoint().eval());
}

Eigen::Matrix2cd random_density(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::Matrix2cd a;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a(i, j) = complex<double>(u(rng), u(rng));
    Eigen::Matrix2cd rho = a * a.adjoint();
    return rho / rho.trace().real();
}

// Right-hand side of the master equation assembled term by term, independent
// of the vectorized superoperator path.
Eigen::Matrix2cd master_equation_rhs(const Eigen::Matrix2cd& h,
                                     const std::vector<DissipatorChannel>& channels,
                                     const Eigen::Matrix2cd& rho) {
    const complex<double> im(0, 1);
    Eigen::Matrix2cd out = -im * (h * rho - rho * h);
    for (const auto& c : channels) {
        const Eigen::Matrix2cd ldl = c.jump.adjoint() * c.jump;
        out += c.rate * (c.jump * rho * c.jump.adjoint() - 0.5 * (ldl * rho + rho * ldl));
    }
    return out;
}

Eigen::Matrix2cd apply_superoperator(const Superoperator& l, const Eigen::Matrix2cd& rho) {
    const Eigen::Vector4cd v = l * Eigen::Map<const Eigen::Vector4cd>(rho.data());
    return Eigen::Map<const Eigen::Matrix2cd>(v.data());
}

}  // namespace

TEST_CASE("pauli and jump constants in the |g>, |e> basis") {
    CHECK(ops::sigma_z()(0, 0) == complex<double>(1, 0));
    CHECK(ops::sigma_z()(1, 1) == complex<double>(-1, 0));
    CHECK(ops::lower() == 0.5 * (ops::sigma_x() + complex<double>(0, 1) * ops::sigma_y()));
    CHECK(ops::raise() == ops::lower().adjoint());
    // lower() really de-excites: |e> -> |g>.
    Eigen::Vector2cd e(0, 1);
    CHECK((ops::lower() * e)(0) == complex<double>(1, 0));
}

TEST_CASE("rwa_hamiltonian examples") {
    CHECK(rwa_hamiltonian(0.0, 0.0).cwiseAbs().maxCoeff() == 0.0);

    const auto h = rwa_hamiltonian(two_pi * 1e6, 0.0);
    CHECK(h(0, 0).real() == Approx(0.5 * two_pi * 1e6));
    CHECK(h(1, 1).real() == Approx(-0.5 * two_pi * 1e6));
    CHECK(h(0, 1) == complex<double>(0, 0));
}

TEST_CASE("rwa_hamiltonian eigenvalues are +-sqrt(delta^2 + rabi^2)/2") {
    std::mt19937_64 rng(321);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double delta = u(rng) * 1e7;
        const double rabi = std::abs(u(rng)) * 1e7;
        const auto h = rwa_hamiltonian(delta, rabi);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
        const double expected = 0.5 * std::hypot(delta, rabi);
        CHECK(es.eigenvalues()(0) == Approx(-expected).margin(1e-9));
        CHECK(es.eigenvalues()(1) == Approx(expected).margin(1e-9));
    }
}

TEST_CASE("liouvillian rejects a non-Hermitian Hamiltonian") {
    Eigen::Matrix2cd h = Eigen::Matrix2cd::Zero();
    h(0, 1) = 1.0;
    CHECK_THROWS_AS(liouvillian(h, {}), InvalidInputError);
}

TEST_CASE("pure-decay Liouvillian spectrum is {0, -G, -G/2, -G/2}") {
    const double gamma = 2.3e5;
    const auto l = liouvillian(Eigen::Matrix2cd::Zero(), {{ops::lower(), gamma}});
    Eigen::Vector4cd ev = l.eigenvalues();
    std::array<double, 4> re{ev(0).real(), ev(1).real(), ev(2).real(), ev(3).real()};
    std::sort(re.begin(), re.end());
    CHECK(re[0] == Approx(-gamma).epsilon(1e-12));
    CHECK(re[1] == Approx(-gamma / 2).epsilon(1e-12));
    CHECK(re[2] == Approx(-gamma / 2).epsilon(1e-12));
    CHECK(std::abs(re[3]) < 1e-12 * gamma);
    CHECK(ev.imag().cwiseAbs().maxCoeff() < 1e-12 * gamma);
}

TEST_CASE("unitary limit: spectrum purely imaginary and action equals -i[H, rho]") {
    std::mt19937_64 rng(11);
    const complex<double> im(0, 1);
    for (int k = 0; k < 20; ++k) {
        const auto h = random_hermitian(rng, 1e6);
        const auto l = liouvillian(h, {});
        CHECK(l.eigenvalues().real().cwiseAbs().maxCoeff() < 1e-9);
        const auto rho = random_density(rng);
        const Eigen::Matrix2cd want = -im * (h * rho - rho * h);
        CHECK((apply_superoperator(l, rho) - want).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("superoperator action matches the master equation term by term") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ur(0.0, 1e6);
    for (int k = 0; k < 100; ++k) {
        const auto h = random_hermitian(rng, 1e6);
        std::vector<DissipatorChannel> channels;
        if (k % 2) channels.push_back({ops::lower(), ur(rng)});
        if (k % 3) channels.push_back({ops::raise(), ur(rng)});
        if (k % 5) channels.push_back({ops::sigma_z(), ur(rng)});
        const auto l = liouvillian(h, channels);
        const auto rho = random_density(rng);
        const Eigen::Matrix2cd want = master_equation_rhs(h, channels, rho);
        const double scale = std::max(1.0, want.cwiseAbs().maxCoeff());
        CHECK((apply_superoperator(l, rho) - want).cwiseAbs().maxCoeff() < 1e-12 * scale);
    }
}

TEST_CASE("trace functional lies in the left null space") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ur(0.0, 1e6);
    for (int k = 0; k < 100; ++k) {
        const auto l = liouvillian(random_hermitian(rng, 1e6),
                                   {{ops::lower(), ur(rng)}, {ops::sigma_z(), ur(rng)}});
        const auto rho = random_hermitian(rng, 1.0);
        CHECK(std::abs(apply_superoperator(l, rho).trace()) < 1e-9);
    }
}

TEST_CASE("steady state: pump-only drains to the ground state") {
    const auto l = liouvillian(Eigen::Matrix2cd::Zero(), {{ops::lower(), 5e3}});
    const auto rho = steady_state(l);
    CHECK(rho.p_g() == Approx(1.0).margin(1e-12));
    CHECK(rho.m(0, 1) == complex<double>(0, 0));
}

TEST_CASE("steady state: detailed balance of up and down rates") {
    const double down = 7.25e4, up = 1.5e4;
    const auto l =
        liouvillian(Eigen::Matrix2cd::Zero(), {{ops::lower(), down}, {ops::raise(), up}});
    CHECK(steady_state(l).p_e() == Approx(up / (up + down)).margin(1e-12));
}

TEST_CASE("steady state matches the driven two-level closed form") {
    // Decay G, pure dephasing g_phi, drive Omega, detuning Delta:
    //   p_e = (Omega^2/2)(g2/G) / (Delta^2 + g2^2 + Omega^2 g2 / G),  g2 = G/2 + g_phi.
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> ue(2.0, 7.0);
    std::uniform_real_distribution<double> us(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const double gamma = std::pow(10.0, ue(rng));
        const double deph = std::pow(10.0, ue(rng));
        const double rabi = std::pow(10.0, ue(rng));
        const double delta = us(rng) * std::pow(10.0, ue(rng));
        const auto l = liouvillian(rwa_hamiltonian(delta, rabi),
                                   {{ops::lower(), gamma}, {ops::sigma_z(), 0.5 * deph}});
        const double g2 = 0.5 * gamma + deph;
        const double expected =
            0.5 * rabi * rabi * (g2 / gamma) / (delta * delta + g2 * g2 + rabi * rabi * g2 / gamma);
        CHECK(steady_state(l).p_e() == Approx(expected).margin(1e-10));
    }
}

TEST_CASE("steady state rejects degenerate null spaces") {
    // Dephasing-only channel set: any diagonal state is stationary.
    const auto l = liouvillian(rwa_hamiltonian(1e5, 0.0), {{ops::sigma_z(), 1e4}});
    CHECK_THROWS_MATCHES(steady_state(l), IllPosedSteadyStateError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("dephasing-only")));
    CHECK_THROWS_AS(steady_state(Superoperator::Zero()), IllPosedSteadyStateError);
}

TEST_CASE("steady state is invariant under common rescaling") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ur(1e3, 1e6);
    for (int k = 0; k < 20; ++k) {
        const double rabi = ur(rng), delta = ur(rng), gamma = ur(rng), deph = ur(rng);
        const auto l1 = liouvillian(rwa_hamiltonian(delta, rabi),
                                    {{ops::lower(), gamma}, {ops::sigma_z(), deph}});
        const auto l2 = liouvillian(rwa_hamiltonian(1e4 * delta, 1e4 * rabi),
                                    {{ops::lower(), 1e4 * gamma}, {ops::sigma_z(), 1e4 * deph}});
        CHECK((steady_state(l1).m - steady_state(l2).m).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("evolve: zero generator leaves the state unchanged") {
    DensityMatrix rho0;
    rho0.m << 0.7, complex<double>(0.1, 0.2), complex<double>(0.1, -0.2), 0.3;
    const auto rho = evolve(Superoperator::Zero(), rho0, 12.0, 0.5);
    CHECK((rho.m - rho0.m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("evolve: exponential decay law") {
    const double gamma = 1e4;
    const auto l = liouvillian(Eigen::Matrix2cd::Zero(), {{ops::lower(), gamma}});
    const double t = 3.0 / gamma;
    const auto rho = evolve(l, excited_state(), t, 0.01 / gamma);
    CHECK(rho.p_e() == Approx(std::exp(-gamma * t)).margin(1e-8));
    CHECK(std::abs(rho.m.trace().real() - 1.0) < 1e-9);
}

TEST_CASE("evolve rejects unstable steps") {
    const auto l = liouvillian(Eigen::Matrix2cd::Zero(), {{ops::lower(), 1e6}});
    CHECK_THROWS_AS(evolve(l, excited_state(), 1.0, 1.0), StabilityError);
    CHECK_THROWS_AS(evolve(l, excited_state(), 1.0, -1.0), InvalidInputError);
}

TEST_CASE("evolve semigroup property at fixed step") {
    const auto l = liouvillian(rwa_hamiltonian(3e4, 2e4),
                               {{ops::lower(), 1e4}, {ops::sigma_z(), 5e3}});
    const double step = 1e-6;
    const auto direct = evolve(l, excited_state(), 4000 * step, step);
    const auto chained = evolve(l, evolve(l, excited_state(), 2500 * step, step), 1500 * step, step);
    CHECK((direct.m - chained.m).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("evolve converges to the steady state") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ur(1e4, 1e6);
    for (int k = 0; k < 5; ++k) {
        const auto l = liouvillian(rwa_hamiltonian(ur(rng), ur(rng)),
                                   {{ops::lower(), ur(rng)}, {ops::raise(), 0.1 * ur(rng)},
                                    {ops::sigma_z(), ur(rng)}});
        const double duration = 20.0 / slowest_relaxation_rate(l);
        const double step = 0.09 / spectral_radius(l);
        const auto rho = evolve(l, ground_state(), duration, step);
        CHECK((rho.m - steady_state(l).m).cwiseAbs().maxCoeff() < 1e-8);
    }
}

namespace {

SpinModel default_spin() {
    SpinModel s;
    s.omega_sys = two_pi * 2.87e9;
    s.rabi = two_pi * 0.2e6;
    s.pump_rate = 5e3;
    s.t1_rate = 200.0;
    s.thermal_rate = 199.9;
    s.dephasing_rate = 5e6;
    s.gamma_coh = consistent_gamma_coh(s);
    return s;
}

}  // namespace

TEST_CASE("population curve: detuning is irrelevant without drive") {
    SpinModel s = default_spin();
    s.rabi = 0.0;
    const std::vector<double> grid{-1e6, -3e5, 0.0, 2e5, 9e5};
    const auto curve = population_curve(s, grid);
    for (const auto& p : curve.populations) {
        CHECK(p.p_e() == Approx(curve.populations[0].p_e()).margin(1e-12));
        CHECK(p.p_g() + p.p_e() == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("population curve is symmetric in detuning") {
    const SpinModel s = default_spin();
    std::vector<double> grid;
    for (int i = -20; i <= 20; ++i) grid.push_back(1e5 * i);
    const auto curve = population_curve(s, grid);
    const std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i)
        CHECK(curve.populations[i].p_e() == Approx(curve.populations[n - 1 - i].p_e()).margin(1e-10));

    // Single maximum of p_e at the grid point nearest zero detuning.
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (curve.populations[i].p_e() > curve.populations[argmax].p_e()) argmax = i;
    CHECK(grid[argmax] == 0.0);
}

TEST_CASE("population curve equals pointwise steady states") {
    const SpinModel s = default_spin();
    const std::vector<double> grid{-2e6, -1e5, 0.0, 7e5};
    const auto curve = population_curve(s, grid);
    const auto channels = dissipator_channels(s);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto rho = steady_state(liouvillian(rwa_hamiltonian(grid[i], s.rabi), channels));
        CHECK(curve.populations[i].p_e() == rho.p_e());
        CHECK(curve.populations[i].energy[1] - curve.populations[i].energy[0] ==
              Approx(s.omega_sys));
    }
}

TEST_CASE("population curve input validation") {
    const SpinModel s = default_spin();
    CHECK_THROWS_AS(population_curve(s, {}), InvalidInputError);
    CHECK_THROWS_AS(population_curve(s, {0.0, 0.0}), InvalidInputError);
    CHECK_THROWS_AS(population_curve(s, {1e5, -1e5}), InvalidInputError);
}

TEST_CASE("no inversion without upward pumping") {
    std::mt19937_64 rng(64);
    std::uniform_real_distribution<double> ue(2.0, 6.5);
    for (int k = 0; k < 100; ++k) {
        SpinModel s = default_spin();
        s.pump_rate = std::pow(10.0, ue(rng));
        s.t1_rate = std::pow(10.0, ue(rng));
        s.thermal_rate = 0.0;
        s.dephasing_rate = std::pow(10.0, ue(rng));
        s.rabi = std::pow(10.0, ue(rng));
        s.gamma_coh = consistent_gamma_coh(s);
        const auto curve = population_curve(s, {0.0});
        CHECK(curve.populations[0].p_e() <= 0.5 + 1e-12);
    }
}
