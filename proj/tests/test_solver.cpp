// test_solver.cpp
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "upb/model.hpp"
#include "upb/solver.hpp"

using namespace upb;
using namespace upb::solver;
using model::SystemParams;

namespace {

SystemParams bare_cavity(double delta_c, double eps) {
    SystemParams p;
    p.g = p.g0 = p.lambda = 0.0;
    p.delta_c = delta_c;
    p.eps_l = eps;
    p.gamma_spin = 1e-3;  // keeps the decoupled spin sector nondegenerate
    p.t2_seconds = 0.0;
    p.gamma_m_eff = 1.0;
    return p;
}

DensityMatrix fock_state(const HilbertSpec& s, int n, int m) {
    Matrix rho = Matrix::Zero(s.dim(), s.dim());
    rho((n * s.phonon_cutoff + m) * 3, (n * s.phonon_cutoff + m) * 3) = 1.0;
    return DensityMatrix{s, std::move(rho)};
}

}  // namespace

TEST_CASE("single-mode decay against the exponential") {
    HilbertSpec s{3, 2};
    SystemParams p = bare_cavity(0.0, 0.0);
    p.gamma_m_eff = 0.0;
    auto L = model::build_liouvillian(p, s);
    auto traj = evolve(L, fock_state(s, 1, 0), linspace(0.0, 6.0, 25));
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        CHECK(std::abs(traj.records[i].mean_photon - std::exp(-traj.times[i])) < 1e-7);
        CHECK(traj.records[i].trace_error < 1e-8);
        CHECK(traj.records[i].herm_error < 1e-9);
    }
}

TEST_CASE("trajectory invariants on the benchmark system") {
    HilbertSpec s{5, 5};
    SystemParams p;  // benchmark defaults
    auto L = model::build_liouvillian(p, s);
    auto traj = evolve(L, ground_state(s), linspace(0.0, 10.0, 21));
    for (const auto& pt : traj.records) {
        CHECK(pt.trace_error < 1e-8);
        CHECK(pt.herm_error < 1e-9);
    }
    // the transient dip of the correlation function reaches the few-1e-3
    // plateau by kappa t ~ 10
    CHECK(traj.records.back().g2_photon < 1.5e-2);
    CHECK(traj.records.back().g2_photon > 1e-3);
}

TEST_CASE("stiffness guard") {
    HilbertSpec s{3, 2};
    SystemParams p;  // omega_m = 100 makes the generator stiff
    auto L = model::build_liouvillian(p, s);
    EvolveOptions opts;
    opts.min_step = 0.5;  // no stable step this large exists
    CHECK_THROWS_AS(evolve(L, ground_state(s), linspace(0.0, 1.0, 3), opts),
                    StiffnessError);
}

TEST_CASE("steady state of a passive cavity is the vacuum") {
    HilbertSpec s{3, 2};
    auto L = model::build_liouvillian(bare_cavity(0.3, 0.0), s);
    auto rho = steady_state(L);
    auto vac = fock_state(s, 0, 0);
    CHECK(trace_distance(rho, vac) < 1e-10);
}

TEST_CASE("driven linear cavity has Poissonian statistics") {
    HilbertSpec s{5, 2};
    auto L = model::build_liouvillian(bare_cavity(0.3, 0.05), s);
    auto rho = steady_state(L);
    // coherent steady state: <n> = eps^2/(dc^2 + k^2/4), g2 = 1
    const double want = 0.05 * 0.05 / (0.3 * 0.3 + 0.25);
    CHECK(mean_occupation(rho, Mode::photon) == doctest::Approx(want).epsilon(1e-4));
    CHECK(g2_zero(rho, Mode::photon) == doctest::Approx(1.0).epsilon(1e-3));

    // and g2(tau) is flat at 1
    auto series = g2_tau(L, rho, linspace(0.0, 5.0, 11));
    for (double v : series.values) CHECK(v == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("benchmark steady state pinned") {
    HilbertSpec s{5, 5};
    SystemParams p;
    auto L = model::build_liouvillian(p, s);
    auto rho = steady_state(L);
    rho.validate();
    // frozen against an independent sparse-LU implementation of the same
    // master equation
    CHECK(g2_zero(rho, Mode::photon) == doctest::Approx(0.0872453165).epsilon(1e-6));
    CHECK(g2_zero(rho, Mode::phonon) == doctest::Approx(0.0184932750).epsilon(1e-6));
    CHECK(mean_occupation(rho, Mode::photon) ==
          doctest::Approx(4.00328105e-05).epsilon(1e-6));

    // residual of the unmodified generator
    Eigen::Map<const Eigen::VectorXcd> v(rho.rho.data(),
                                         Eigen::Index(s.dim()) * s.dim());
    CHECK((L.matrix * v).norm() / L.matrix.norm() < 1e-9);
}

TEST_CASE("steady state agrees with long-time integration") {
    // the slowest relaxation mode is the spin pool drained at rate ~gamma;
    // pick gamma large enough that kappa t = 100 covers its equilibration
    HilbertSpec s{5, 5};
    SystemParams p;
    p.gamma_spin = 0.1;
    auto L = model::build_liouvillian(p, s);
    auto direct = steady_state(L);
    EvolveOptions opts;
    opts.store_states = true;
    auto traj = evolve(L, ground_state(s), {0.0, 100.0}, opts);
    DensityMatrix evolved{s, traj.states.back()};
    CHECK(trace_distance(direct, evolved) < 1e-6);
}

TEST_CASE("degenerate steady states are reported") {
    // with no drive and no spin decay, every spin-diagonal vacuum state is
    // stationary
    HilbertSpec s{3, 2};
    SystemParams p = bare_cavity(0.3, 0.0);
    p.g0 = 14.0;
    p.lambda = 7.0;
    p.gamma_spin = 0.0;
    p.t2_seconds = 1e-3;
    auto L = model::build_liouvillian(p, s);
    CHECK_THROWS_AS(steady_state(L), NonuniqueSteadyStateError);
}

TEST_CASE("g2 of small states") {
    HilbertSpec s{3, 2};
    auto one = fock_state(s, 1, 0);
    CHECK(g2_zero(one, Mode::photon) == 0.0);
    CHECK_THROWS_AS(g2_zero(fock_state(s, 0, 0), Mode::photon),
                    UndefinedCorrelationError);
    CHECK_THROWS_AS(g2_zero(fock_state(s, 1, 0), Mode::phonon),
                    UndefinedCorrelationError);
}

TEST_CASE("thermal state") {
    Matrix vac = thermal_state(0.0, 5);
    CHECK(vac(0, 0).real() == doctest::Approx(1.0));
    CHECK(vac.trace().real() == doctest::Approx(1.0));

    Matrix th = thermal_state(0.1, 6);
    const double pth = 0.1 / 1.1;
    double mean = 0;
    for (int m = 0; m < 6; ++m) mean += m * th(m, m).real();
    CHECK(th(1, 1).real() / th(0, 0).real() == doctest::Approx(pth).epsilon(1e-12));
    CHECK(mean == doctest::Approx(0.1).epsilon(2e-5));

    CHECK_THROWS_AS(thermal_state(1.0, 6), WidenCutoffError);
    CHECK_THROWS_AS(thermal_state(-0.1, 6), Error);

    HilbertSpec s{3, 8};
    auto rho0 = thermal_initial_state(0.2, s);
    rho0.validate();
    CHECK(mean_occupation(rho0, Mode::phonon) == doctest::Approx(0.2).epsilon(1e-4));
    CHECK(mean_occupation(rho0, Mode::photon) == doctest::Approx(0.0));
}

TEST_CASE("convergence check discriminates") {
    SystemParams strong;
    strong.eps_l = 0.3;  // strong drive populates the truncation edge
    auto rep = convergence_check(strong, HilbertSpec{5, 5});
    CHECK(!rep.pass);
    CHECK(rep.rel_change > 1e-5);
}
