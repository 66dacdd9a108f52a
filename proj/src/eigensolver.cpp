#include "bohmlab/eigensolver.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace bohmlab {

namespace {

// Number of eigenvalues of tridiag(e, diag, e) strictly below E, via the
// signs of the LDL^T pivots. Tiny pivots are flushed to -pivmin (LAPACK's
// convention) so the recurrence cannot divide by zero.
int sturm_count_below(const std::vector<double>& diag, double e2, double E,
                      double pivmin) {
    int count = 0;
    double q = 1.0;
    for (size_t i = 0; i < diag.size(); ++i) {
        q = (i == 0) ? diag[0] - E : diag[i] - E - e2 / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

// Partial-pivot LU of tridiag(e, d, e) - shift. Pivoting introduces one
// extra superdiagonal (du2).
struct TriLU {
    std::vector<double> dl, d, du, du2;
    std::vector<char> swapped;
};

TriLU factor_shifted(const std::vector<double>& diag, double e, double shift) {
    const int N = static_cast<int>(diag.size());
    TriLU f;
    f.d.resize(N);
    for (int i = 0; i < N; ++i) f.d[i] = diag[i] - shift;
    f.dl.assign(N - 1, e);
    f.du.assign(N - 1, e);
    f.du2.assign(N >= 2 ? N - 2 : 0, 0.0);
    f.swapped.assign(N - 1, 0);

    double scale = std::abs(e);
    for (double v : f.d) scale = std::max(scale, std::abs(v));
    const double eps = std::numeric_limits<double>::epsilon();
    // floor far below any pivot a nearly-converged shift can produce
    const double tiny = scale * eps * eps + std::numeric_limits<double>::min();
    auto guard = [tiny](double& piv) {
        if (std::abs(piv) < tiny) piv = piv < 0.0 ? -tiny : tiny;
    };

    for (int i = 0; i < N - 1; ++i) {
        if (std::abs(f.d[i]) >= std::abs(f.dl[i])) {
            guard(f.d[i]);
            double fact = f.dl[i] / f.d[i];
            f.dl[i] = fact;
            f.d[i + 1] -= fact * f.du[i];
        } else {
            double fact = f.d[i] / f.dl[i];
            f.d[i] = f.dl[i];
            f.dl[i] = fact;
            double tmp = f.du[i];
            f.du[i] = f.d[i + 1];
            f.d[i + 1] = tmp - fact * f.d[i + 1];
            if (i < N - 2) {
                f.du2[i] = f.du[i + 1];
                f.du[i + 1] = -fact * f.du[i + 1];
            }
            f.swapped[i] = 1;
        }
    }
    guard(f.d[N - 1]);
    return f;
}

void solve_inplace(const TriLU& f, std::vector<double>& b) {
    const int N = static_cast<int>(b.size());
    for (int i = 0; i < N - 1; ++i) {
        if (!f.swapped[i]) {
            b[i + 1] -= f.dl[i] * b[i];
        } else {
            double tmp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tmp - f.dl[i] * b[i];
        }
    }
    b[N - 1] /= f.d[N - 1];
    if (N >= 2) b[N - 2] = (b[N - 2] - f.du[N - 2] * b[N - 1]) / f.d[N - 2];
    for (int i = N - 3; i >= 0; --i)
        b[i] = (b[i] - f.du[i] * b[i + 1] - f.du2[i] * b[i + 2]) / f.d[i];
}

double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

} // namespace

EigenSolution solve_bound_state(const Field& V, int n, const PhysParams& p,
                                BoundaryChoice bc) {
    validate(p);
    const Grid& g = V.grid;
    if (static_cast<int>(V.values.size()) != g.n)
        throw domain_error("potential field size does not match its grid");
    if (g.n < 5) throw domain_error("grid too short for a bound-state solve");
    if (n < 0) throw domain_error("state index must be non-negative");

    const bool radial = bc.kind == BoundaryChoice::Kind::radial_regular;
    if (radial != (g.kind == GridKind::radial))
        throw domain_error("boundary choice does not match the grid geometry");
    if (radial && g.x_min != 0.0)
        throw domain_error("radial solve needs a grid starting at r = 0");
    // at r = 0 the potential entry is never used (u(0) = 0 there)
    for (int i = radial ? 1 : 0; i < g.n; ++i)
        if (!std::isfinite(V.values[i]))
            throw domain_error("potential must be finite on the grid");

    const int N = g.n - 2; // interior points carry the unknowns
    if (n >= N) throw domain_error("state index beyond the grid's spectrum");

    const double t = p.hbar * p.hbar / (2.0 * p.mass * g.h * g.h);
    std::vector<double> diag(N);
    for (int i = 0; i < N; ++i) diag[i] = 2.0 * t + V.values[i + 1];
    const double e = -t;
    const double e2 = t * t;

    const double safemin = std::numeric_limits<double>::min();
    const double pivmin = safemin * std::max(1.0, e2);

    double lo = *std::min_element(diag.begin(), diag.end()) - 2.0 * t;
    double hi = *std::max_element(diag.begin(), diag.end()) + 2.0 * t;
    const double pad = 1e-10 * (1.0 + hi - lo);
    lo -= pad;
    hi += pad;

    const double tol = 1e-12;
    for (int it = 0; it < 300; ++it) {
        if (hi - lo <= tol * std::max(1.0, std::max(std::abs(lo), std::abs(hi))))
            break;
        double mid = 0.5 * (lo + hi);
        if (sturm_count_below(diag, e2, mid, pivmin) >= n + 1)
            hi = mid;
        else
            lo = mid;
    }
    const double E = 0.5 * (lo + hi);
    const double bracket = hi - lo;

    if (bc.kind == BoundaryChoice::Kind::dirichlet_line) {
        double edge = std::min(V.values[0], V.values[g.n - 1]);
        if (E >= edge)
            throw no_bound_state_error(
                "state lies at or above the potential's edge value: continuum, "
                "not a bound state");
    } else if (radial) {
        if (E >= V.values[g.n - 1])
            throw no_bound_state_error(
                "state lies at or above the potential's outer-edge value: "
                "continuum, not a bound state");
    }

    TriLU f = factor_shifted(diag, e, E);
    std::vector<double> b(N), v;
    for (int i = 0; i < N; ++i)
        b[i] = std::sin((n + 1) * M_PI * (i + 1) / static_cast<double>(N + 1));
    double bn = l2_norm(b);
    for (double& x : b) x /= bn;

    int iterations = 0;
    while (iterations < 50) {
        v = b;
        solve_inplace(f, v);
        ++iterations;
        double nrm = l2_norm(v);
        if (!std::isfinite(nrm) || nrm == 0.0)
            throw numeric_error("inverse iteration broke down");
        for (double& x : v) x /= nrm;
        double dp = 0.0, dm = 0.0;
        for (int i = 0; i < N; ++i) {
            dp += (v[i] - b[i]) * (v[i] - b[i]);
            dm += (v[i] + b[i]) * (v[i] + b[i]);
        }
        b = v;
        if (std::sqrt(std::min(dp, dm)) < 1e-12) break;
    }

    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    int nodes = 0;
    double prev = 0.0;
    for (double x : v) {
        if (std::abs(x) <= 1e-6 * vmax) continue; // below noise: no vote on sign
        if (prev != 0.0 && std::signbit(x) != std::signbit(prev)) ++nodes;
        prev = x;
    }
    if (nodes != n)
        throw node_count_error(
            "eigenvector node count disagrees with the state index (grid too "
            "coarse for this state)");

    Field R = make_field(g, Meaning::amplitude);
    if (!radial) {
        R.values[0] = 0.0;
        R.values[g.n - 1] = 0.0;
        for (int i = 0; i < N; ++i) R.values[i + 1] = v[i];
    } else {
        R.values[g.n - 1] = 0.0;
        for (int i = 0; i < N; ++i) R.values[i + 1] = v[i] / g.point(i + 1);
        // origin filled by cubic extrapolation; zero quadrature weight there
        R.values[0] = 3.0 * R.values[1] - 3.0 * R.values[2] + R.values[3];
    }

    double rmax = 0.0;
    for (double x : R.values) rmax = std::max(rmax, std::abs(x));
    for (double x : R.values) {
        if (std::abs(x) < 1e-6 * rmax) continue;
        if (x < 0.0)
            for (double& y : R.values) y = -y;
        break;
    }

    R = normalize(R);

    if (bc.kind != BoundaryChoice::Kind::dirichlet_box) {
        rmax = 0.0;
        for (double x : R.values) rmax = std::max(rmax, std::abs(x));
        double edge = std::abs(R.values[g.n - 2]);
        if (!radial) edge = std::max(edge, std::abs(R.values[1]));
        double ratio = edge / rmax;
        if (ratio > 1e-6)
            throw domain_too_small_error(
                "amplitude has not decayed at the grid edge; enlarge the domain",
                ratio);
    }

    EigenSolution sol;
    sol.n = n;
    sol.energy = E;
    sol.amplitude = std::move(R);
    sol.nodes = nodes;
    sol.geometry = g.kind;
    sol.iterations = iterations;
    sol.energy_bracket_width = bracket;
    return sol;
}

EigenSolution inverse_from_quantum_potential(const Field& V_Q_target, int n,
                                             const PhysParams& p,
                                             BoundaryChoice bc) {
    Field V = V_Q_target;
    for (double& x : V.values) x = -x;
    V.meaning = Meaning::potential;
    V.normalized = false;
    return solve_bound_state(V, n, p, bc);
}

namespace detail {

Field integrate_amplitude_ode_ld(const Field& V_Q_target, double x0,
                                 long double R0, long double dR0,
                                 const PhysParams& p) {
    validate(p);
    const Grid& g = V_Q_target.grid;
    if (static_cast<int>(V_Q_target.values.size()) != g.n || g.n < 2)
        throw domain_error("target field is malformed or too short");
    for (double x : V_Q_target.values)
        if (!std::isfinite(x))
            throw domain_error("target must be finite on the grid");
    if (R0 == 0.0L && dR0 == 0.0L)
        throw domain_error("initial amplitude and slope cannot both vanish");

    double ti = (x0 - g.x_min) / g.h;
    int i0 = static_cast<int>(std::llround(ti));
    if (i0 < 0 || i0 >= g.n ||
        std::abs(g.point(i0) - x0) > 1e-9 * std::max(1.0, std::abs(x0)))
        throw domain_error("x0 must be one of the grid points");

    using ld = long double;
    const ld cc = -2.0L * static_cast<ld>(p.mass) /
                  (static_cast<ld>(p.hbar) * static_cast<ld>(p.hbar));

    Field out = make_field(g, Meaning::amplitude);
    out.values[i0] = static_cast<double>(R0);

    for (int dir : {+1, -1}) {
        if (i0 + dir < 0 || i0 + dir >= g.n) continue;
        std::vector<ld> v(V_Q_target.values.begin(), V_Q_target.values.end());
        // replace the launch value by its one-sided limit so a jump located
        // exactly at x0 is integrated with this sweep's side
        int j1 = i0 + dir, j2 = i0 + 2 * dir, j3 = i0 + 3 * dir;
        if (j3 >= 0 && j3 < g.n)
            v[i0] = 3.0L * v[j1] - 3.0L * v[j2] + v[j3];
        else if (j2 >= 0 && j2 < g.n)
            v[i0] = 2.0L * v[j1] - v[j2];

        ld R = R0, S = dR0;
        const ld hh = static_cast<ld>(g.h) * dir;
        for (int i = i0; i + dir >= 0 && i + dir < g.n; i += dir) {
            ld va = v[i];
            ld vb = v[i + dir];
            int trail = i - dir, lead2 = i + 2 * dir;
            ld vm;
            if (i == i0 || trail < 0 || trail >= g.n) {
                if (lead2 >= 0 && lead2 < g.n)
                    vm = (3.0L * va + 6.0L * vb - v[lead2]) / 8.0L;
                else
                    vm = 0.5L * (va + vb);
            } else {
                vm = (-v[trail] + 6.0L * va + 3.0L * vb) / 8.0L;
            }

            ld k1R = S, k1S = cc * va * R;
            ld R2 = R + 0.5L * hh * k1R, S2 = S + 0.5L * hh * k1S;
            ld k2R = S2, k2S = cc * vm * R2;
            ld R3 = R + 0.5L * hh * k2R, S3 = S + 0.5L * hh * k2S;
            ld k3R = S3, k3S = cc * vm * R3;
            ld R4 = R + hh * k3R, S4 = S + hh * k3S;
            ld k4R = S4, k4S = cc * vb * R4;
            R += hh / 6.0L * (k1R + 2.0L * k2R + 2.0L * k3R + k4R);
            S += hh / 6.0L * (k1S + 2.0L * k2S + 2.0L * k3S + k4S);

            if (std::abs(R) > 1e300L)
                throw growth_error("amplitude integration overflowed",
                                   g.point(i));
            out.values[i + dir] = static_cast<double>(R);
        }
    }
    return out;
}

} // namespace detail

Field integrate_amplitude_ode(const Field& V_Q_target, double x0, double R0,
                              double dR0, const PhysParams& p) {
    return detail::integrate_amplitude_ode_ld(V_Q_target, x0,
                                              static_cast<long double>(R0),
                                              static_cast<long double>(dR0), p);
}

std::string eigensolution_json(const EigenSolution& sol) {
    nlohmann::ordered_json j;
    j["n"] = sol.n;
    j["energy"] = sol.energy;
    j["nodes"] = sol.nodes;
    j["geometry"] = sol.geometry == GridKind::radial ? "radial" : "cartesian";
    j["grid"]["kind"] =
        sol.amplitude.grid.kind == GridKind::radial ? "radial" : "cartesian";
    j["grid"]["x_min"] = sol.amplitude.grid.x_min;
    j["grid"]["x_max"] = sol.amplitude.grid.x_max;
    j["grid"]["n"] = sol.amplitude.grid.n;
    j["grid"]["h"] = sol.amplitude.grid.h;
    j["iterations"] = sol.iterations;
    j["energy_bracket_width"] = sol.energy_bracket_width;
    return j.dump();
}

} // namespace bohmlab
