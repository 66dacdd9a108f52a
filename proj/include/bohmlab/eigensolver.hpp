#pragma once

#include "bohmlab/fields.hpp"
#include "bohmlab/params.hpp"

#include <string>

namespace bohmlab {

// One bound state of the discretized Hamiltonian. nodes always equals n for
// an accepted solution (Sturm oscillation theorem, asserted by the solver).
struct EigenSolution {
    int n = 0;
    double energy = 0.0;
    Field amplitude;      // normalized, sign convention fixed by the solver
    int nodes = 0;
    GridKind geometry = GridKind::cartesian;
    int iterations = 0;   // inverse-iteration count
    double energy_bracket_width = 0.0;
};

// Boundary semantics.
//   dirichlet_box: hard walls at the grid ends; the whole discrete spectrum
//     is legitimate and no decay or continuum-edge check applies.
//   dirichlet_line: the grid truncates an infinite line; solutions must decay
//     (first interior |R| <= 1e-6 max) and lie below the potential at the
//     edges, otherwise the state is an artifact of the truncation.
//   radial_regular: u = r R with u(0) = 0 on a radial grid starting at 0;
//     decay and continuum-edge checks apply at the outer edge.
struct BoundaryChoice {
    enum class Kind { dirichlet_box, dirichlet_line, radial_regular };
    Kind kind = Kind::dirichlet_line;

    static BoundaryChoice box() { return {Kind::dirichlet_box}; }
    static BoundaryChoice line() { return {Kind::dirichlet_line}; }
    static BoundaryChoice radial() { return {Kind::radial_regular}; }
};

// n-th bound state (n interior nodes) of -(hbar^2/2m) Lap + V.
// Tridiagonal discretization; eigenvalue located by bisection on the Sturm
// negative-pivot count to width <= 1e-12 max(1,|E|), eigenvector by inverse
// iteration. Radial grids are solved in u = r R and converted back, with the
// amplitude normalized under 4 pi r^2 dr and R(0) filled by cubic
// extrapolation (the origin carries zero quadrature weight).
EigenSolution solve_bound_state(const Field& V, int n, const PhysParams& p,
                                BoundaryChoice bc);

// The amplitude whose quantum potential reproduces V_Q_target (up to the
// additive eigenvalue): solve_bound_state(-V_Q_target, n). The caller's
// choice of n selects among the infinitely many amplitudes sourcing the
// same target; no canonical choice exists or is claimed.
EigenSolution inverse_from_quantum_potential(const Field& V_Q_target, int n,
                                             const PhysParams& p,
                                             BoundaryChoice bc);

// Integrates R'' = -(2m/hbar^2) V_Q(x) R outward from x0 in both directions
// with fixed-step RK4 at the grid spacing, and returns the un-normalized
// amplitude. This branch exists for piecewise and unbounded targets (step,
// linear) whose amplitudes are not normalizable: such R have kinks or grow
// without bound, so no normalizability requirement is imposed here, in
// contrast to the eigensolver path.
//
// V_Q values between nodes are interpolated quadratically for the RK4
// half-steps, and the value stored at the launch node is replaced per sweep
// by its one-sided limit (extrapolated from the next three nodes) so that a
// jump located exactly at x0 is integrated with the correct side's value.
// State is carried in long double; the growing-direction error floor is set
// by parasitic-mode amplification, not by the scheme order.
Field integrate_amplitude_ode(const Field& V_Q_target, double x0, double R0,
                              double dR0, const PhysParams& p);

namespace detail {
// Seed-precision variant: identical scheme, but the initial values enter in
// long double. With ill-conditioned sweeps (amplification ~1e11) the rounding
// of double seeds alone caps accuracy near 1e-5; tests of that regime use
// this entry point.
Field integrate_amplitude_ode_ld(const Field& V_Q_target, double x0,
                                 long double R0, long double dR0,
                                 const PhysParams& p);
} // namespace detail

// JSON header describing the solution (n, energy, nodes, geometry, grid,
// iterations, bracket width); the amplitude itself travels as field CSV.
std::string eigensolution_json(const EigenSolution& sol);

} // namespace bohmlab
