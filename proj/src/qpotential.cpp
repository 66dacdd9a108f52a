#include "bohmlab/qpotential.hpp"

#include <json.hpp>

#include <cmath>

namespace bohmlab {

MaskedField quantum_potential(const Field& R, const PhysParams& p,
                              double node_tol) {
    validate(p);
    if (R.meaning != Meaning::amplitude)
        throw domain_error("quantum_potential: input must be an amplitude field");
    if (R.values.size() != (size_t)R.grid.n)
        throw domain_error("quantum_potential: value count does not match grid");
    if (!(node_tol > 0.0) || !std::isfinite(node_tol))
        throw domain_error("quantum_potential: node_tol must be positive");
    double max_abs = 0.0;
    for (double v : R.values) max_abs = std::max(max_abs, std::abs(v));
    if (max_abs == 0.0)
        throw domain_error("quantum_potential: amplitude is identically zero");

    const MaskedField lap = laplacian(R);
    const double pref = -p.hbar * p.hbar / (2.0 * p.mass);
    const double threshold = node_tol * max_abs;

    MaskedField out;
    out.base = make_field(R.grid, Meaning::potential);
    out.mask.assign(R.grid.n, 0);
    for (int i = 0; i < R.grid.n; ++i) {
        const bool ok = lap.valid(i) && !(std::abs(R.values[i]) < threshold);
        out.mask[i] = ok ? 1 : 0;
        out.base.values[i] = ok ? pref * lap.base.values[i] / R.values[i] : 0.0;
    }
    return out;
}

MaskedField total_potential(const Field& V, const MaskedField& V_Q) {
    if (!(V.grid == V_Q.base.grid))
        throw domain_error("total_potential: fields live on different grids");
    if (V.values.size() != (size_t)V.grid.n ||
        V_Q.base.values.size() != V_Q.mask.size())
        throw domain_error("total_potential: value count does not match grid");
    MaskedField out;
    out.base = make_field(V.grid, Meaning::potential);
    out.mask = V_Q.mask;
    for (int i = 0; i < V.grid.n; ++i)
        out.base.values[i] = out.mask[i] ? V.values[i] + V_Q.base.values[i] : 0.0;
    return out;
}

MaskedField identity_residual_field(const Field& V, const EigenSolution& sol,
                                    const PhysParams& p, double node_tol) {
    if (!(V.grid == sol.amplitude.grid))
        throw domain_error("identity_residual_field: potential and amplitude grids differ");
    MaskedField vq = quantum_potential(sol.amplitude, p, node_tol);
    MaskedField out;
    out.base = make_field(V.grid, Meaning::generic);
    out.mask = vq.mask;
    for (int i = 0; i < V.grid.n; ++i)
        out.base.values[i] =
            out.mask[i] ? vq.base.values[i] + V.values[i] - sol.energy : 0.0;
    return out;
}

IdentityReport stationary_identity_residual(const Field& V,
                                            const EigenSolution& sol,
                                            const PhysParams& p,
                                            double node_tol) {
    const MaskedField res = identity_residual_field(V, sol, p, node_tol);
    IdentityReport rep;
    rep.energy_used = sol.energy;
    rep.node_tolerance = node_tol;
    double sumsq = 0.0;
    int used = 0;
    for (int i = 0; i < res.base.grid.n; ++i) {
        if (!res.valid(i)) continue;
        const double r = res.base.values[i];
        rep.max_residual = std::max(rep.max_residual, std::abs(r));
        sumsq += r * r;
        ++used;
    }
    rep.rms_residual = used > 0 ? std::sqrt(sumsq / used) : 0.0;
    rep.masked_fraction =
        double(res.base.grid.n - used) / double(res.base.grid.n);
    return rep;
}

std::string identity_report_json(const IdentityReport& rep) {
    nlohmann::ordered_json j;
    j["max_residual"] = rep.max_residual;
    j["rms_residual"] = rep.rms_residual;
    j["masked_fraction"] = rep.masked_fraction;
    j["energy_used"] = rep.energy_used;
    j["node_tolerance"] = rep.node_tolerance;
    return j.dump();
}

} // namespace bohmlab
