// test_cooling.cpp
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "upb/cooling.hpp"
#include "upb/errors.hpp"

using namespace upb;
using namespace upb::cooling;

TEST_CASE("optical damping") {
    CoolingSetup s;
    s.g_lin = 0.0;
    CHECK(optical_damping(s) == 0.0);

    s.kappa_a = 1.0;
    s.g_lin = 0.05;
    CHECK(optical_damping(s) == doctest::Approx(0.01).epsilon(1e-14));

    // the knob that realizes Gamma_m = kappa with a kappa_a = 10 kappa cavity
    const double g = coupling_for_damping(1.0, 10.0, 0.0);
    CHECK(g == doctest::Approx(std::sqrt(10.0) / 2.0).epsilon(1e-14));
    CoolingSetup t;
    t.kappa_a = 10.0;
    t.g_lin = g;
    t.gamma_m0 = 0.0;
    CHECK(optical_damping(t) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("backaction occupation") {
    CoolingSetup s;
    s.kappa_a = 10.0;
    s.omega_m = 100.0;
    CHECK(backaction_occupation(s) == doctest::Approx(6.25e-4).epsilon(1e-14));
    s.kappa_a = 1e-9;
    CHECK(backaction_occupation(s) < 1e-20);

    s.kappa_a = 150.0;  // above omega_m
    CHECK(!s.hierarchy_warnings().empty());
}

TEST_CASE("effective bath") {
    CoolingSetup s;
    s.kappa_a = 10.0;
    s.omega_m = 100.0;
    s.gamma_m0 = 1e-4;
    s.nbar0 = 1.6;

    SUBCASE("bare oscillator when the cooling beam is off") {
        s.g_lin = 0.0;
        auto b = effective_bath(s);
        CHECK(b.gamma_m_eff == doctest::Approx(1e-4));
        CHECK(b.nbar == doctest::Approx(1.6));
    }

    SUBCASE("cold bath at the benchmark working point") {
        s.g_lin = coupling_for_damping(1.0, s.kappa_a, s.gamma_m0);
        auto b = effective_bath(s);
        CHECK(b.gamma_m_eff == doctest::Approx(1.0).epsilon(1e-12));
        // (1e-4*1.6 + (1-1e-4)*6.25e-4) / 1
        CHECK(b.nbar == doctest::Approx(7.848e-4).epsilon(1e-3));
        CHECK(b.nbar < s.nbar0);

        // detailed balance bookkeeping holds to machine precision
        const double gopt = optical_damping(s);
        CHECK(b.gamma_m_eff * b.nbar ==
              doctest::Approx(s.gamma_m0 * s.nbar0 + gopt * backaction_occupation(s))
                  .epsilon(1e-14));
    }

    SUBCASE("convex combination bounds") {
        for (double g : {0.1, 0.5, 1.5}) {
            s.g_lin = g;
            auto b = effective_bath(s);
            const double lo = std::min(s.nbar0, backaction_occupation(s));
            const double hi = std::max(s.nbar0, backaction_occupation(s));
            CHECK(b.nbar >= lo);
            CHECK(b.nbar <= hi);
        }
    }

    SUBCASE("round trip through the coupling inversion") {
        for (double target : {0.3, 1.0, 2.5}) {
            s.g_lin = coupling_for_damping(target, s.kappa_a, s.gamma_m0);
            CHECK(effective_bath(s).gamma_m_eff ==
                  doctest::Approx(target).epsilon(1e-12));
        }
    }

    SUBCASE("undefined when everything vanishes") {
        s.g_lin = 0.0;
        s.gamma_m0 = 0.0;
        CHECK_THROWS_AS(effective_bath(s), DivergenceError);
    }
}

TEST_CASE("thermal occupation (SI)") {
    const double omega = 2.0 * std::numbers::pi * 1e8;  // 100 MHz
    const double n = thermal_occupation(omega, 10e-3);
    CHECK(n == doctest::Approx(1.6236).epsilon(1e-3));
    CHECK(n > 1.55);
    CHECK(n < 1.65);

    // hbar w / kB T = ln 2 gives exactly one phonon
    const double hbar = 1.054571817e-34, kb = 1.380649e-23;
    const double t_ln2 = hbar * omega / (kb * std::numbers::ln2);
    CHECK(thermal_occupation(omega, t_ln2) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(thermal_occupation(omega, 1e-6) < 1e-100);
    CHECK_THROWS_AS(thermal_occupation(omega, 0.0), Error);
}

TEST_CASE("minimum final phonon number") {
    const double n = min_final_phonon(1.6, 1e6);
    CHECK(n == doctest::Approx(1.2681e-3).epsilon(1e-3));
    CHECK(n <= 1.3e-3);
    CHECK(min_final_phonon(0.0, 1e6) == 0.0);
    // monotone in the quality factor
    CHECK(min_final_phonon(1.6, 1e7) < n);
    CHECK(min_final_phonon(1.6, 1e5) > n);
}

TEST_CASE("two-mode moments reproduce the adiabatic damping") {
    CoolingSetup s;
    s.kappa_a = 1.0;
    s.omega_m = 100.0;
    s.gamma_m0 = 1e-5;
    s.nbar0 = 0.0;
    for (double g : {0.05, 0.03}) {
        s.g_lin = g;
        auto fit = two_mode_decay_fit(s);
        CHECK(fit.rel_error < 0.10);
        CHECK(fit.predicted_rate ==
              doctest::Approx(s.gamma_m0 + 4 * g * g).epsilon(1e-12));
    }
}
