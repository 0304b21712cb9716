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

#include "nvsense/model.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "nvsense/constants.hpp"

using namespace nvsense;

TEST_CASE("physical constants are the fixed CODATA values") {
    CHECK(PhysConstants::hbar == 1.054571817e-34);
    CHECK(PhysConstants::gamma_e == 1.76085963e11);
    CHECK(PhysConstants::k_B == 1.380649e-23);
}

TEST_CASE("make_cavity satisfies the quality-factor and split invariants") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> uf(0.0, 1.0);
    std::uniform_real_distribution<double> uw(1e9, 1e11);
    std::uniform_real_distribution<double> uq(10.0, 1e6);
    for (int k = 0; k < 1000; ++k) {
        const double w = uw(rng), q = uq(rng), f = uf(rng);
        const CavityModel c = make_cavity(w, q, f, 0.0);
        CHECK(c.kappa == w / q);
        CHECK(c.kappa1 == f * c.kappa);
        CHECK(std::abs(c.kappa1 + c.kappa2 - c.kappa) <= 2e-16 * c.kappa);
        REQUIRE_NOTHROW(validate(c));
    }
}

TEST_CASE("model validation reports the offending field") {
    SpinModel s;
    s.omega_sys = two_pi * 2.87e9;
    s.gamma_coh = 1e6;
    REQUIRE_NOTHROW(validate(s));
    s.pump_rate = -1.0;
    CHECK_THROWS_MATCHES(validate(s), InvalidInputError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("pump_rate")));

    TwoModeCavityModel two{two_pi * 1e9, two_pi * 1e9, 1e6, 1e6, 0.0, 0.0};
    REQUIRE_NOTHROW(validate(two));   // zero couplings are a valid degenerate case
    two.kappa2 = 0.0;
    CHECK_THROWS_AS(validate(two), InvalidInputError);

    CHECK_THROWS_AS(make_cavity(-1.0, 5000.0, 0.5, 0.0), InvalidInputError);
    CHECK_THROWS_AS(make_cavity(1e9, 5000.0, 1.5, 0.0), InvalidInputError);
}

TEST_CASE("gamma_coh consistency helper") {
    SpinModel s;
    s.pump_rate = 5e3;
    s.t1_rate = 200.0;
    s.thermal_rate = 100.0;
    s.dephasing_rate = 1e6;
    CHECK(consistent_gamma_coh(s) == Catch::Approx(0.5 * (5e3 + 200.0 + 100.0) + 1e6));
}

TEST_CASE("collective coupling helper") {
    CHECK(collective_coupling(2.0, 9e13) == Catch::Approx(2.0 * std::sqrt(9e13)));
    CHECK(collective_coupling(0.0, 1e10) == 0.0);
}

TEST_CASE("validate_regime examples") {
    // Q = 5000 so kappa/omega_cav = 2e-4; probe on resonance, chi = 0.
    const CavityModel c = make_cavity(two_pi * 2.87e9, 5000.0, 0.5, two_pi * 1e5);
    const auto rep = validate_regime(c, {0.0, 0.0}, c.omega_cav, 0.01);
    CHECK(rep.ratios[0] == Catch::Approx(2e-4));
    CHECK(rep.ratios[1] == 0.0);
    CHECK(rep.ratios[2] == 0.0);
    CHECK(rep.pass);

    // kappa = omega_cav (Q = 1): the first ratio alone must fail.
    const CavityModel bad = make_cavity(two_pi * 2.87e9, 1.0, 0.5, 0.0);
    CHECK_FALSE(validate_regime(bad, {0.0, 0.0}, bad.omega_cav, 0.01).pass);
}

TEST_CASE("validate_regime uses the dispersive-shift magnitude") {
    const CavityModel c = make_cavity(two_pi * 2.87e9, 5000.0, 0.5, two_pi * 1e7);
    // Large negative Re chi — a signed ratio would pass spuriously.
    const std::complex<double> chi(-1.0, 0.0);
    const auto rep = validate_regime(c, chi, c.omega_cav, 0.01);
    CHECK(rep.ratios[2] > 0.0);
    CHECK_FALSE(rep.pass);
}

TEST_CASE("validate_regime pass is monotone in the threshold") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const CavityModel c = make_cavity(two_pi * 2.87e9, 300.0, 0.5, two_pi * 1e5);
    for (int k = 0; k < 200; ++k) {
        const double th1 = 0.001 + 0.5 * u(rng);
        const double th2 = th1 + 0.4 * u(rng) + 1e-6;
        const std::complex<double> chi(2.0 * u(rng) - 1.0, -u(rng));
        const double omega = c.omega_cav * (1.0 + 0.01 * (2.0 * u(rng) - 1.0));
        const bool pass1 = validate_regime(c, chi, omega, th1).pass;
        const bool pass2 = validate_regime(c, chi, omega, th2).pass;
        if (pass1) CHECK(pass2);
    }
}

TEST_CASE("validate_regime input errors") {
    const CavityModel c = make_cavity(two_pi * 2.87e9, 5000.0, 0.5, 0.0);
    CHECK_THROWS_AS(validate_regime(c, {0.0, 0.0}, -1.0, 0.01), InvalidInputError);
    CHECK_THROWS_AS(validate_regime(c, {0.0, 0.0}, c.omega_cav, 0.0), InvalidInputError);
    CHECK_THROWS_AS(validate_regime(c, {0.0, 0.0}, c.omega_cav, 1.0), InvalidInputError);
}

TEST_CASE("default configuration passes the dispersive-regime check") {
    // Default parameter set, driven and probed on resonance.
    const CavityModel c = make_cavity(two_pi * 2.87e9, 5000.0, 0.5, two_pi * 1e5);
    // On resonance Re chi = 0 for the resonant term; use a generous bound instead:
    // |chi| <= 1/gamma at any detuning, so |g^2 chi|/omega_cav stays tiny.
    const double gamma = 5.0027e6;
    const std::complex<double> chi_bound(1.0 / gamma, -1.0 / gamma);
    const auto rep = validate_regime(c, chi_bound, c.omega_cav, 0.01);
    CHECK(rep.pass);
}
