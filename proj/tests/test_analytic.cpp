#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bohmlab/analytic.hpp"
#include "bohmlab/fields.hpp"
#include "bohmlab/qpotential.hpp"

#include <cmath>

using namespace bohmlab;

namespace {

const PhysParams kUnit{1.0, 1.0};
const PhysParams kElectron{0.511, 1.0};

ReferenceFamily fig1() { return ReferenceFamily::harmonic(0.5, kUnit); }
ReferenceFamily fig2() { return ReferenceFamily::hydrogen_s(1.0, kElectron); }
ReferenceFamily fig3() { return ReferenceFamily::step(1.5, kUnit); }
ReferenceFamily fig4() { return ReferenceFamily::linear_airy(0.1, kUnit); }

} // namespace

TEST_CASE("factories validate their constants") {
    CHECK_THROWS_AS(ReferenceFamily::harmonic(0.0), domain_error);
    CHECK_THROWS_AS(ReferenceFamily::hydrogen_s(-1.0), domain_error);
    CHECK_THROWS_AS(ReferenceFamily::box(0.0), domain_error);
    CHECK_THROWS_AS(ReferenceFamily::harmonic(0.5, PhysParams{-1.0, 1.0}),
                    domain_error);
}

TEST_CASE("ground state peak values") {
    CHECK(std::abs(reference_amplitude(fig1(), 0, 0.0) - 0.63161877774606470129) <= 1e-15);
    // hydrogen amplitude at r = a0 drops to prefactor / e
    double a0 = 1.9569471624266144814;
    CHECK(std::abs(reference_amplitude(fig2(), 0, a0) - 0.075816185804158813616) <= 1e-15);
    CHECK(std::abs(reference_amplitude(fig2(), 0, 0.0) - 0.20608976017451952873) <= 1e-15);
}

TEST_CASE("step amplitude: flat tail, cosine arch") {
    CHECK(reference_amplitude(fig3(), 0, -0.5) == 1.0);
    CHECK(reference_amplitude(fig3(), 0, -1e-300) == 1.0);
    CHECK(reference_amplitude(fig3(), 0, 0.0) == 1.0);
    double x = M_PI / std::sqrt(3.0);
    CHECK(std::abs(reference_amplitude(fig3(), 0, x) - (-1.0)) <= 1e-12);
}

TEST_CASE("linear amplitude is the decaying Airy branch") {
    CHECK(std::abs(reference_amplitude(fig4(), 0, 0.0) - 0.35502805388781723926) <= 1e-12);
    // oscillates for x > 0 (classically allowed side), decays for x < 0
    CHECK(std::abs(reference_amplitude(fig4(), 0, -15.0)) < 1e-5);
    CHECK(std::abs(reference_amplitude(fig4(), 0, 10.0)) > 0.1);
}

TEST_CASE("amplitude order preconditions") {
    CHECK_THROWS_AS(reference_amplitude(fig1(), -1, 0.0), domain_error);
    CHECK_THROWS_AS(reference_amplitude(fig1(), 21, 0.0), domain_error);
    CHECK_THROWS_AS(reference_amplitude(fig2(), 1, 1.0), domain_error);
    CHECK_THROWS_AS(reference_amplitude(fig3(), 1, 1.0), domain_error);
    CHECK_THROWS_AS(reference_amplitude(fig4(), 1, 1.0), domain_error);
    ReferenceFamily bx = ReferenceFamily::box(1.0, kUnit);
    CHECK_THROWS_AS(reference_amplitude(bx, 21, 0.5), domain_error);
    CHECK(reference_amplitude(bx, 20, 0.5) == reference_amplitude(bx, 20, 0.5));
}

TEST_CASE("harmonic excited states follow the Hermite ladder") {
    double r = reference_amplitude(fig1(), 2, 1.3) / reference_amplitude(fig1(), 0, 1.3);
    CHECK(std::abs(r - 0.48790367901871779184) <= 1e-14);
    // parity
    for (double x : {0.3, 1.1, 2.7}) {
        CHECK(reference_amplitude(fig1(), 1, -x) == -reference_amplitude(fig1(), 1, x));
        CHECK(reference_amplitude(fig1(), 2, -x) == reference_amplitude(fig1(), 2, x));
    }
}

TEST_CASE("box amplitude shape") {
    ReferenceFamily bx = ReferenceFamily::box(2.0, kUnit);
    CHECK(std::abs(reference_amplitude(bx, 0, 1.0) - 1.0) <= 1e-15); // sqrt(2/2) sin(pi/2)
    CHECK(std::abs(reference_amplitude(bx, 1, 0.5) - 1.0) <= 1e-15); // sin(pi/2) again
    CHECK(std::abs(reference_amplitude(bx, 0, 0.0)) <= 1e-15);
    CHECK(std::abs(reference_amplitude(bx, 0, 2.0)) <= 1e-15);
}

TEST_CASE("reference energies") {
    CHECK(reference_energy(fig1(), 0) == 0.25);
    CHECK(reference_energy(fig1(), 3) == 1.75);
    CHECK(reference_energy(fig2(), 0) == -(0.511 / 2.0));
    CHECK(std::abs(reference_energy(fig2(), 0) - (-0.2555)) <= 1e-15);
    ReferenceFamily bx = ReferenceFamily::box(1.0, kUnit);
    CHECK(std::abs(reference_energy(bx, 0) - 4.9348022005446793094) <= 1e-14);
    CHECK(std::abs(reference_energy(bx, 1) - 4.0 * 4.9348022005446793094) <= 1e-13);
    CHECK_THROWS_AS(reference_energy(fig3(), 0), no_bound_state_error);
    CHECK_THROWS_AS(reference_energy(fig4(), 0), no_bound_state_error);
    CHECK_THROWS_AS(reference_energy(fig1(), -1), domain_error);
    CHECK_THROWS_AS(reference_energy(fig2(), 1), domain_error);
}

TEST_CASE("target quantum potential curves") {
    CHECK(reference_quantum_potential(fig1(), 2.0) == -0.5);
    CHECK(reference_quantum_potential(fig1(), 0.0) == 0.0);
    CHECK(reference_quantum_potential(fig2(), 2.0) == 0.5);
    CHECK(reference_quantum_potential(fig3(), -1.0) == 0.0);
    CHECK(reference_quantum_potential(fig3(), 0.0) == 1.5);
    CHECK(reference_quantum_potential(fig3(), 2.0) == 1.5);
    CHECK(std::abs(reference_quantum_potential(fig4(), 3.0) - 0.3) <= 1e-15);
    ReferenceFamily bx = ReferenceFamily::box(1.0, kUnit);
    CHECK_THROWS_AS(reference_quantum_potential(bx, 0.5), domain_error);
}

TEST_CASE("target curve and classical potential are opposite") {
    // The target curves carry no energy offset, so they cancel the classical
    // potential exactly; step pieces instead sum to the continuum edge V0.
    for (double x : {-2.0, -0.5, 0.1, 1.7}) {
        CHECK(reference_quantum_potential(fig1(), x) ==
              -reference_classical_potential(fig1(), x));
    }
    for (double r : {0.3, 1.0, 5.0}) {
        CHECK(reference_quantum_potential(fig2(), r) ==
              -reference_classical_potential(fig2(), r));
    }
    for (double x : {-3.0, -0.1, 0.0, 0.4}) {
        CHECK(reference_quantum_potential(fig3(), x) +
                  reference_classical_potential(fig3(), x) == 1.5);
    }
    for (double x : {-4.0, 0.0, 2.5}) {
        CHECK(reference_quantum_potential(fig4(), x) ==
              -reference_classical_potential(fig4(), x));
    }
}

TEST_CASE("sampled amplitudes have unit norm on their default windows") {
    Grid gh = make_uniform_grid(GridKind::cartesian, -12.0, 12.0, 4801);
    for (int n : {0, 1, 3}) {
        Field R = sample_field(gh, Meaning::amplitude,
                               [&](double x) { return reference_amplitude(fig1(), n, x); });
        CHECK(std::abs(norm_squared(R) - 1.0) <= 1e-6);
    }
    Grid gr = make_uniform_grid(GridKind::radial, 0.005, 40.0, 8000);
    Field Rh = sample_field(gr, Meaning::amplitude,
                            [&](double r) { return reference_amplitude(fig2(), 0, r); });
    CHECK(std::abs(norm_squared(Rh) - 1.0) <= 1e-6);
    Grid gb = make_uniform_grid(GridKind::cartesian, 0.0, 2.0, 2001);
    ReferenceFamily bx = ReferenceFamily::box(2.0, kUnit);
    for (int n : {0, 2}) {
        Field R = sample_field(gb, Meaning::amplitude,
                               [&](double x) { return reference_amplitude(bx, n, x); });
        CHECK(std::abs(norm_squared(R) - 1.0) <= 1e-6);
    }
}

TEST_CASE("closed loop: sampled harmonic state satisfies the identity") {
    Grid g = make_uniform_grid(GridKind::cartesian, -8.0, 8.0, 6401);
    Field R = sample_field(g, Meaning::amplitude,
                           [&](double x) { return reference_amplitude(fig1(), 3, x); });
    Field V = sample_field(g, Meaning::potential,
                           [&](double x) { return reference_classical_potential(fig1(), x); });
    EigenSolution sol;
    sol.n = 3;
    sol.energy = reference_energy(fig1(), 3);
    sol.amplitude = R;
    sol.nodes = 3;
    IdentityReport rep = stationary_identity_residual(V, sol, kUnit, 1e-3);
    CHECK(rep.max_residual <= 1e-3);
    CHECK(rep.masked_fraction > 0.0);
}

TEST_CASE("closed loop: sampled box state satisfies the identity") {
    Grid g = make_uniform_grid(GridKind::cartesian, 0.0, 1.0, 1001);
    ReferenceFamily bx = ReferenceFamily::box(1.0, kUnit);
    Field R = sample_field(g, Meaning::amplitude,
                           [&](double x) { return reference_amplitude(bx, 2, x); });
    Field V = sample_field(g, Meaning::potential, [](double) { return 0.0; });
    EigenSolution sol;
    sol.n = 2;
    sol.energy = reference_energy(bx, 2);
    sol.amplitude = R;
    sol.nodes = 2;
    IdentityReport rep = stationary_identity_residual(V, sol, kUnit);
    CHECK(rep.max_residual <= 1e-3);
}

TEST_CASE("step amplitude satisfies its stationary equation piecewise") {
    Grid g = make_uniform_grid(GridKind::cartesian, -2.0, 2.0, 4001);
    Field R = sample_field(g, Meaning::amplitude,
                           [&](double x) { return reference_amplitude(fig3(), 0, x); });
    MaskedField lap = laplacian(R);
    for (int i = 1; i < g.n - 1; ++i) {
        double x = g.point(i);
        if (std::abs(x) < 0.5 * g.h) continue; // stencil straddling the kink is O(1) off
        double resid = lap.base.values[i] +
                       2.0 * reference_quantum_potential(fig3(), x) * R.values[i];
        CHECK(std::abs(resid) <= 1e-5);
    }
}

TEST_CASE("linear amplitude satisfies its stationary equation") {
    Grid g = make_uniform_grid(GridKind::cartesian, -3.0, 3.0, 3001);
    Field R = sample_field(g, Meaning::amplitude,
                           [&](double x) { return reference_amplitude(fig4(), 0, x); });
    MaskedField lap = laplacian(R);
    for (int i = 1; i < g.n - 1; ++i) {
        double x = g.point(i);
        double resid = lap.base.values[i] +
                       2.0 * reference_quantum_potential(fig4(), x) * R.values[i];
        CHECK(std::abs(resid) <= 1e-6);
    }
}
