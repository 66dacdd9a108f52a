#pragma once

#include "bohmlab/eigensolver.hpp"
#include "bohmlab/fields.hpp"
#include "bohmlab/params.hpp"

#include <string>

namespace bohmlab {

// V_Q = -(hbar^2/2m) Lap(R)/R at interior points. Points with
// |R| < node_tol * max|R| are masked (the quotient diverges at amplitude
// nodes; masking keeps the statistics honest where interpolation would
// hide genuine divergences). Endpoints are always masked.
MaskedField quantum_potential(const Field& R, const PhysParams& p,
                              double node_tol = 1e-6);

// Pointwise V + V_Q on a shared grid; the mask propagates.
MaskedField total_potential(const Field& V, const MaskedField& V_Q);

struct IdentityReport {
    double max_residual = 0.0;
    double rms_residual = 0.0;
    double masked_fraction = 0.0; // over all grid points
    double energy_used = 0.0;
    double node_tolerance = 0.0;
};

// Residual field V_Q + V - E_n of the stationary identity, masked like
// quantum_potential.
MaskedField identity_residual_field(const Field& V, const EigenSolution& sol,
                                    const PhysParams& p, double node_tol);

// Max/rms of the residual over unmasked interior points. E_n is taken from
// the solution verbatim, never fitted: the identity fixes the constant to
// the state's energy, and fitting would weaken the check.
IdentityReport stationary_identity_residual(const Field& V,
                                            const EigenSolution& sol,
                                            const PhysParams& p,
                                            double node_tol = 1e-6);

// Flat JSON object {max_residual, rms_residual, masked_fraction,
// energy_used, node_tolerance}.
std::string identity_report_json(const IdentityReport& rep);

} // namespace bohmlab
