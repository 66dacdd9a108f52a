#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bohmlab/qpotential.hpp"

#include <json.hpp>

#include <cmath>

using namespace bohmlab;

namespace {

const PhysParams kUnit{1.0, 1.0};

EigenSolution analytic_solution(Field amplitude, int n, double energy,
                                GridKind geometry) {
    EigenSolution sol;
    sol.n = n;
    sol.energy = energy;
    sol.amplitude = std::move(amplitude);
    sol.nodes = n;
    sol.geometry = geometry;
    return sol;
}

// ground state of the m=1, omega=0.5 oscillator, unnormalized
double gauss(double x) { return std::exp(-0.25 * x * x); }

} // namespace

TEST_CASE("constant amplitude gives identically zero quantum potential") {
    Grid g = make_uniform_grid(GridKind::cartesian, -2.0, 2.0, 41);
    Field R = sample_field(g, Meaning::amplitude, [](double) { return 0.7; });
    MaskedField vq = quantum_potential(R, kUnit);
    CHECK_FALSE(vq.valid(0));
    CHECK_FALSE(vq.valid(g.n - 1));
    for (int i = 1; i < g.n - 1; ++i) {
        CHECK(vq.valid(i));
        CHECK(vq.base.values[i] == 0.0);
    }
    CHECK(vq.base.meaning == Meaning::potential);
}

TEST_CASE("cosine amplitude reproduces the barrier height") {
    // R = cos(kx), k^2 = 3: V_Q = hbar^2 k^2 / 2m = 1.5 up to O(h^2)
    Grid g = make_uniform_grid(GridKind::cartesian, 0.0, 1.5, 151);
    const double k = std::sqrt(3.0);
    Field R = sample_field(g, Meaning::amplitude, [&](double x) { return std::cos(k * x); });
    MaskedField vq = quantum_potential(R, kUnit);
    for (int i = 1; i < g.n - 1; ++i) {
        if (!vq.valid(i)) continue;
        CHECK(std::abs(vq.base.values[i] - 1.5) <= 1e-4);
    }
    CHECK(vq.valid_count() >= g.n - 3);
}

TEST_CASE("gaussian amplitude gives the inverted parabola plus offset") {
    Grid g = make_uniform_grid(GridKind::cartesian, -4.0, 4.0, 801);
    Field R = sample_field(g, Meaning::amplitude, gauss);
    MaskedField vq = quantum_potential(R, kUnit);
    for (int i = 1; i < g.n - 1; ++i) {
        CHECK(vq.valid(i));
        double x = g.point(i);
        CHECK(std::abs(vq.base.values[i] - (0.25 - 0.125 * x * x)) <= 1e-4);
    }
}

TEST_CASE("radial exponential amplitude: V_Q = 1/r + E_0") {
    // R = exp(-r/a0) with a0 = 1/0.511: V_Q(r) = 1/r - 0.2555
    PhysParams p{0.511, 1.0};
    Grid g = make_uniform_grid(GridKind::radial, 0.5, 15.0, 2901);
    Field R = sample_field(g, Meaning::amplitude, [](double r) { return std::exp(-0.511 * r); });
    MaskedField vq = quantum_potential(R, p);
    for (int i = 1; i < g.n - 1; ++i) {
        CHECK(vq.valid(i));
        double r = g.point(i);
        CHECK(std::abs(vq.base.values[i] - (1.0 / r - 0.2555)) <= 1e-5);
    }
}

TEST_CASE("binary rescaling leaves the quantum potential bit-identical") {
    Grid g = make_uniform_grid(GridKind::cartesian, -3.0, 3.0, 301);
    Field R = sample_field(g, Meaning::amplitude, gauss);
    MaskedField vq = quantum_potential(R, kUnit);
    for (double c : {2.0, 0.25, -8.0}) {
        Field S = R;
        for (double& v : S.values) v *= c;
        MaskedField vqc = quantum_potential(S, kUnit);
        for (int i = 0; i < g.n; ++i) {
            CHECK(vqc.valid(i) == vq.valid(i));
            if (vq.valid(i)) CHECK(vqc.base.values[i] == vq.base.values[i]);
        }
    }
    // arbitrary scale cancels to rounding
    Field T = R;
    for (double& v : T.values) v *= 3.7;
    MaskedField vqt = quantum_potential(T, kUnit);
    for (int i = 1; i < g.n - 1; ++i) {
        double want = vq.base.values[i];
        CHECK(std::abs(vqt.base.values[i] - want) <=
              1e-12 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("node masking and monotonicity in the threshold") {
    Grid g = make_uniform_grid(GridKind::cartesian, -1.0, 1.0, 201);
    Field R = sample_field(g, Meaning::amplitude, [](double x) { return x; });
    MaskedField tight = quantum_potential(R, kUnit, 1e-6);
    int mid = 100; // x = 0, an exact node
    CHECK_FALSE(tight.valid(mid));
    CHECK(tight.valid(mid - 1));
    CHECK(tight.valid(mid + 1));

    MaskedField loose = quantum_potential(R, kUnit, 1e-1);
    int masked_loose = 0;
    for (int i = 0; i < g.n; ++i) {
        if (!tight.valid(i)) CHECK_FALSE(loose.valid(i));
        if (!loose.valid(i)) ++masked_loose;
    }
    CHECK(masked_loose > 3); // the loose threshold swallows a neighborhood
}

TEST_CASE("quantum_potential rejects bad input") {
    Grid g = make_uniform_grid(GridKind::cartesian, 0.0, 1.0, 11);
    Field zero = sample_field(g, Meaning::amplitude, [](double) { return 0.0; });
    CHECK_THROWS_AS(quantum_potential(zero, kUnit), domain_error);
    Field wrong = sample_field(g, Meaning::density, [](double) { return 1.0; });
    CHECK_THROWS_AS(quantum_potential(wrong, kUnit), domain_error);
    Field R = sample_field(g, Meaning::amplitude, [](double) { return 1.0; });
    CHECK_THROWS_AS(quantum_potential(R, PhysParams{-1.0, 1.0}), domain_error);
}

TEST_CASE("total_potential sums pointwise and propagates the mask") {
    Grid g = make_uniform_grid(GridKind::cartesian, -2.0, 2.0, 101);
    Field R = sample_field(g, Meaning::amplitude, gauss);
    MaskedField vq = quantum_potential(R, kUnit);

    Field zero = sample_field(g, Meaning::potential, [](double) { return 0.0; });
    MaskedField tot = total_potential(zero, vq);
    for (int i = 0; i < g.n; ++i) {
        CHECK(tot.valid(i) == vq.valid(i));
        if (tot.valid(i)) CHECK(tot.base.values[i] == vq.base.values[i]);
    }

    Field minus = make_field(g, Meaning::potential);
    for (int i = 0; i < g.n; ++i) minus.values[i] = -vq.base.values[i];
    MaskedField cancel = total_potential(minus, vq);
    for (int i = 0; i < g.n; ++i)
        if (cancel.valid(i)) CHECK(cancel.base.values[i] == 0.0);

    // V_tot of the harmonic ground state is the flat ground energy
    Field harm = sample_field(g, Meaning::potential, [](double x) { return 0.125 * x * x; });
    MaskedField flat = total_potential(harm, vq);
    for (int i = 0; i < g.n; ++i)
        if (flat.valid(i)) CHECK(std::abs(flat.base.values[i] - 0.25) <= 1e-4);

    Grid g2 = make_uniform_grid(GridKind::cartesian, -2.0, 2.0, 51);
    Field off = sample_field(g2, Meaning::potential, [](double) { return 0.0; });
    CHECK_THROWS_AS(total_potential(off, vq), domain_error);
}

TEST_CASE("harmonic ground state identity residual is pure discretization error") {
    Grid g = make_uniform_grid(GridKind::cartesian, -6.0, 6.0, 2401);
    Field R = sample_field(g, Meaning::amplitude, gauss);
    Field V = sample_field(g, Meaning::potential, [](double x) { return 0.125 * x * x; });
    EigenSolution sol = analytic_solution(R, 0, 0.25, GridKind::cartesian);

    IdentityReport rep = stationary_identity_residual(V, sol, kUnit);
    CHECK(rep.max_residual <= 1e-4);
    CHECK(rep.rms_residual <= rep.max_residual);
    CHECK(rep.rms_residual >= 0.0);
    CHECK(rep.energy_used == 0.25);
    CHECK(rep.node_tolerance == 1e-6);
    // only the two endpoints are masked on this window
    CHECK(rep.masked_fraction == doctest::Approx(2.0 / 2401).epsilon(1e-12));
}

TEST_CASE("hbar rescaling preserves the identity") {
    // same oscillator solved with hbar = 2: R = exp(-x^2/8), E_0 = 0.5
    PhysParams p{1.0, 2.0};
    Grid g = make_uniform_grid(GridKind::cartesian, -8.0, 8.0, 3201);
    Field R = sample_field(g, Meaning::amplitude, [](double x) { return std::exp(-x * x / 8.0); });
    Field V = sample_field(g, Meaning::potential, [](double x) { return 0.125 * x * x; });
    EigenSolution sol = analytic_solution(R, 0, 0.5, GridKind::cartesian);
    IdentityReport rep = stationary_identity_residual(V, sol, p);
    CHECK(rep.max_residual <= 2e-4);
}

TEST_CASE("second excited state: nodes masked, residual bounded") {
    Grid g = make_uniform_grid(GridKind::cartesian, -6.0, 6.0, 4801);
    // H_2(x sqrt(1/2)) gauss: nodes at x = +-1
    Field R = sample_field(g, Meaning::amplitude, [](double x) {
        double y = x * std::sqrt(0.5);
        return (4.0 * y * y - 2.0) * gauss(x);
    });
    Field V = sample_field(g, Meaning::potential, [](double x) { return 0.125 * x * x; });
    EigenSolution sol = analytic_solution(R, 2, 1.25, GridKind::cartesian);

    IdentityReport rep = stationary_identity_residual(V, sol, kUnit, 1e-3);
    CHECK(rep.masked_fraction > 2.0 / 4801);
    CHECK(rep.max_residual <= 1e-3);
    CHECK(rep.node_tolerance == 1e-3);

    MaskedField res = identity_residual_field(V, sol, kUnit, 1e-3);
    MaskedField vq = quantum_potential(R, kUnit, 1e-3);
    int masked_interior = 0;
    for (int i = 0; i < g.n; ++i) {
        CHECK(res.valid(i) == vq.valid(i));
        if (!res.valid(i) && i > 0 && i < g.n - 1) ++masked_interior;
        if (res.valid(i))
            CHECK(res.base.values[i] ==
                  vq.base.values[i] + V.values[i] - sol.energy);
    }
    CHECK(masked_interior > 0);
}

TEST_CASE("identity residual rejects mismatched grids") {
    Grid g = make_uniform_grid(GridKind::cartesian, -6.0, 6.0, 101);
    Grid g2 = make_uniform_grid(GridKind::cartesian, -6.0, 6.0, 201);
    Field R = sample_field(g, Meaning::amplitude, gauss);
    Field V = sample_field(g2, Meaning::potential, [](double) { return 0.0; });
    EigenSolution sol = analytic_solution(R, 0, 0.25, GridKind::cartesian);
    CHECK_THROWS_AS(stationary_identity_residual(V, sol, kUnit), domain_error);
    CHECK_THROWS_AS(identity_residual_field(V, sol, kUnit, 1e-6), domain_error);
}

TEST_CASE("residual converges at second order") {
    auto max_resid = [](int n) {
        Grid g = make_uniform_grid(GridKind::cartesian, -6.0, 6.0, n);
        Field R = sample_field(g, Meaning::amplitude, gauss);
        Field V = sample_field(g, Meaning::potential, [](double x) { return 0.125 * x * x; });
        EigenSolution sol = analytic_solution(R, 0, 0.25, GridKind::cartesian);
        return stationary_identity_residual(V, sol, kUnit).max_residual;
    };
    double coarse = max_resid(601);
    double fine = max_resid(1201);
    double factor = coarse / fine;
    CHECK(factor >= 3.5);
    CHECK(factor <= 4.5);
}

TEST_CASE("identity report serializes to flat json") {
    IdentityReport rep;
    rep.max_residual = 3.25e-5;
    rep.rms_residual = 1.0e-5;
    rep.masked_fraction = 0.5;
    rep.energy_used = -0.2555;
    rep.node_tolerance = 1e-6;
    std::string s = identity_report_json(rep);
    CHECK(s == identity_report_json(rep));
    auto j = nlohmann::json::parse(s);
    CHECK(j.size() == 5);
    CHECK(j["max_residual"].get<double>() == 3.25e-5);
    CHECK(j["rms_residual"].get<double>() == 1.0e-5);
    CHECK(j["masked_fraction"].get<double>() == 0.5);
    CHECK(j["energy_used"].get<double>() == -0.2555);
    CHECK(j["node_tolerance"].get<double>() == 1e-6);
    CHECK(s.find("\"max_residual\"") < s.find("\"rms_residual\""));
}
