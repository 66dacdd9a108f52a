#include "bohmlab/bohm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace bohmlab {

namespace {

using cd = std::complex<double>;

void check_wave_shape(const ComplexField& psi) {
    const Grid& g = psi.grid;
    if (g.n < 3 || psi.re.size() != static_cast<size_t>(g.n) ||
        psi.im.size() != static_cast<size_t>(g.n))
        throw domain_error("wavefunction arrays do not match the grid");
    for (int i = 0; i < g.n; ++i)
        if (!std::isfinite(psi.re[i]) || !std::isfinite(psi.im[i]))
            throw domain_error("wavefunction has non-finite samples");
}

double max_modulus(const ComplexField& psi) {
    double m = 0.0;
    for (size_t i = 0; i < psi.re.size(); ++i)
        m = std::max(m, std::hypot(psi.re[i], psi.im[i]));
    return m;
}

void validate_spec(const PacketSpec& spec) {
    validate(spec.p);
    if (spec.components.empty())
        throw domain_error("packet needs at least one component");
    bool weighted = false;
    for (const PacketComponent& c : spec.components) {
        if (!std::isfinite(c.center) || !std::isfinite(c.sigma) ||
            !std::isfinite(c.hbar_k) || !std::isfinite(c.weight))
            throw domain_error("packet component has non-finite parameters");
        if (!(c.sigma > 0.0))
            throw domain_error("packet width must be positive");
        weighted = weighted || c.weight != 0.0;
    }
    if (!weighted) throw domain_error("packet weights are all zero");
}

// value and x-derivative of one unnormalized spreading component at (x, t)
struct CompEval {
    cd val, dval;
};

CompEval component_eval(const PacketComponent& c, const PhysParams& p,
                        double x, double t) {
    const double v = c.hbar_k / p.mass;
    const double k = c.hbar_k / p.hbar;
    const double tau = p.hbar * t / (2.0 * p.mass * c.sigma * c.sigma);
    const cd sigma_t = c.sigma * cd(1.0, tau);
    const cd pref = std::pow(2.0 * std::numbers::pi * sigma_t * sigma_t, -0.25);
    const double xp = x - c.center - v * t;
    const cd expo = -xp * xp / (4.0 * c.sigma * sigma_t) +
                    cd(0.0, k * (x - c.center - 0.5 * v * t));
    const cd dlog = -xp / (2.0 * c.sigma * sigma_t) + cd(0.0, k);
    cd val = c.weight * pref * std::exp(expo);
    return {val, val * dlog};
}

cd packet_sum(const PacketSpec& spec, double x, double t) {
    cd s = 0.0;
    for (const PacketComponent& c : spec.components)
        s += component_eval(c, spec.p, x, t).val;
    return s;
}

cd packet_sum_deriv(const PacketSpec& spec, double x, double t) {
    cd s = 0.0;
    for (const PacketComponent& c : spec.components)
        s += component_eval(c, spec.p, x, t).dval;
    return s;
}

// sqrt of the trapezoid integral of |sum|^2 at t = 0 over every component's
// 12 sigma support, step = min sigma / 200; free evolution is unitary so the
// factor stays correct at all later times
double packet_norm_factor(const PacketSpec& spec) {
    double lo = spec.components[0].center, hi = lo, smin = spec.components[0].sigma;
    for (const PacketComponent& c : spec.components) {
        lo = std::min(lo, c.center - 12.0 * c.sigma);
        hi = std::max(hi, c.center + 12.0 * c.sigma);
        smin = std::min(smin, c.sigma);
    }
    const int n = static_cast<int>(std::ceil((hi - lo) * 200.0 / smin)) + 1;
    const double h = (hi - lo) / (n - 1);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double m2 = std::norm(packet_sum(spec, lo + i * h, 0.0));
        acc += (i == 0 || i == n - 1) ? 0.5 * m2 : m2;
    }
    double integral = acc * h;
    if (!(integral > 0.0) || !std::isfinite(integral))
        throw normalization_error("packet norm is degenerate");
    return std::sqrt(integral);
}

} // namespace

std::pair<Field, MaskedField> polar_decompose(const ComplexField& psi,
                                              double node_tol) {
    check_wave_shape(psi);
    if (!(node_tol > 0.0) || !std::isfinite(node_tol))
        throw domain_error("node tolerance must be positive");
    const Grid& g = psi.grid;
    Field R = make_field(g, Meaning::amplitude);
    for (int i = 0; i < g.n; ++i)
        R.values[i] = std::hypot(psi.re[i], psi.im[i]);
    double mx = *std::max_element(R.values.begin(), R.values.end());
    if (mx == 0.0) throw domain_error("wavefunction is identically zero");

    MaskedField S;
    S.base = make_field(g, Meaning::generic);
    S.mask.assign(static_cast<size_t>(g.n), 0);
    const double thr = node_tol * mx;
    double offset = 0.0, prev = 0.0;
    bool have_prev = false;
    for (int i = 0; i < g.n; ++i) {
        if (R.values[i] < thr) continue;
        double s = std::atan2(psi.im[i], psi.re[i]) + offset;
        if (have_prev) {
            while (s - prev > std::numbers::pi) {
                offset -= 2.0 * std::numbers::pi;
                s -= 2.0 * std::numbers::pi;
            }
            while (s - prev < -std::numbers::pi) {
                offset += 2.0 * std::numbers::pi;
                s += 2.0 * std::numbers::pi;
            }
        }
        S.base.values[i] = s;
        S.mask[i] = 1;
        prev = s;
        have_prev = true;
    }
    return {std::move(R), std::move(S)};
}

FlowFields flow_fields(const ComplexField& psi, const PhysParams& p) {
    validate(p);
    auto [R, S] = polar_decompose(psi);
    const Grid& g = psi.grid;

    FlowFields ff;
    ff.rho = make_field(g, Meaning::density);
    for (int i = 0; i < g.n; ++i)
        ff.rho.values[i] = psi.re[i] * psi.re[i] + psi.im[i] * psi.im[i];

    ff.current.base = make_field(g, Meaning::generic);
    ff.current.mask.assign(static_cast<size_t>(g.n), 0);
    const double cj = p.hbar / (p.mass * 2.0 * g.h);
    for (int i = 1; i + 1 < g.n; ++i) {
        double dre = psi.re[i + 1] - psi.re[i - 1];
        double dim = psi.im[i + 1] - psi.im[i - 1];
        // Im(conj(psi) dpsi) expanded so a real field gives an exact zero
        ff.current.base.values[i] = cj * (psi.re[i] * dim - psi.im[i] * dre);
        ff.current.mask[i] = 1;
    }

    ff.velocity.base = make_field(g, Meaning::generic);
    ff.velocity.mask.assign(static_cast<size_t>(g.n), 0);
    const double cv = p.hbar / (p.mass * 2.0 * g.h);
    for (int i = 1; i + 1 < g.n; ++i) {
        if (!S.valid(i - 1) || !S.valid(i) || !S.valid(i + 1)) continue;
        ff.velocity.base.values[i] =
            cv * (S.base.values[i + 1] - S.base.values[i - 1]);
        ff.velocity.mask[i] = 1;
    }
    return ff;
}

MaskedField continuity_residual(const std::vector<ComplexField>& snapshots,
                                const PhysParams& p) {
    validate(p);
    if (snapshots.size() < 3)
        throw domain_error("continuity residual needs at least three snapshots");
    const Grid& g = snapshots[0].grid;
    for (const ComplexField& s : snapshots) {
        check_wave_shape(s);
        if (!(s.grid == g))
            throw domain_error("snapshots must share one grid");
    }
    const double dt = snapshots[1].time - snapshots[0].time;
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw domain_error("snapshot times must increase");
    for (size_t j = 1; j < snapshots.size(); ++j) {
        double gap = snapshots[j].time - snapshots[j - 1].time;
        if (std::abs(gap - dt) > 1e-9 * dt)
            throw domain_error("snapshots must be uniform in time");
    }

    const size_t mid = snapshots.size() / 2;
    const ComplexField& cur = snapshots[mid];
    const ComplexField& fwd = snapshots[mid + 1];
    const ComplexField& bwd = snapshots[mid - 1];
    FlowFields ff = flow_fields(cur, p);
    const double thr = 1e-6 * max_modulus(cur);

    MaskedField out;
    out.base = make_field(g, Meaning::generic);
    out.mask.assign(static_cast<size_t>(g.n), 0);
    for (int i = 2; i + 2 < g.n; ++i) {
        if (std::hypot(cur.re[i], cur.im[i]) < thr) continue;
        double rho_f = fwd.re[i] * fwd.re[i] + fwd.im[i] * fwd.im[i];
        double rho_b = bwd.re[i] * bwd.re[i] + bwd.im[i] * bwd.im[i];
        double drho_dt = (rho_f - rho_b) / (2.0 * dt);
        double dj_dx = (ff.current.base.values[i + 1] -
                        ff.current.base.values[i - 1]) /
                       (2.0 * g.h);
        out.base.values[i] = drho_dt + dj_dx;
        out.mask[i] = 1;
    }
    return out;
}

std::complex<double> gaussian_packet(const PacketSpec& spec, double x,
                                     double t) {
    validate_spec(spec);
    if (!std::isfinite(x)) throw domain_error("packet position must be finite");
    if (!(t >= 0.0) || !std::isfinite(t))
        throw domain_error("packet time must be nonnegative");
    return packet_sum(spec, x, t) / packet_norm_factor(spec);
}

WaveProvider make_packet_provider(const PacketSpec& spec) {
    validate_spec(spec);
    const double N = packet_norm_factor(spec);
    const PacketSpec s = spec;
    WaveProvider w;
    w.psi = [s, N](double x, double t) { return packet_sum(s, x, t) / N; };
    w.dpsi_dx = [s, N](double x, double t) {
        return packet_sum_deriv(s, x, t) / N;
    };
    w.velocity = [s](double x, double t) {
        cd val = packet_sum(s, x, t);
        double rho = std::norm(val);
        if (rho == 0.0) return 0.0;
        return s.p.hbar / s.p.mass *
               std::imag(std::conj(val) * packet_sum_deriv(s, x, t)) / rho;
    };
    // each component's modulus peaks at |w| (2 pi sigma_t^2)^(-1/4); their sum
    // bounds the packet, and the loose constant only feeds node detection
    w.mod_max = [s, N](double t) {
        double m = 0.0;
        for (const PacketComponent& c : s.components) {
            double tau = s.p.hbar * t / (2.0 * s.p.mass * c.sigma * c.sigma);
            m = std::max(m, std::abs(c.weight) *
                                std::pow(2.0 * std::numbers::pi * c.sigma *
                                             c.sigma * (1.0 + tau * tau),
                                         -0.25));
        }
        return m / N;
    };
    return w;
}

WaveProvider make_plane_wave_provider(double k, const PhysParams& p) {
    validate(p);
    if (!std::isfinite(k)) throw domain_error("wavenumber must be finite");
    const double omega = p.hbar * k * k / (2.0 * p.mass);
    const double vg = p.hbar * k / p.mass;
    WaveProvider w;
    w.psi = [k, omega](double x, double t) {
        double ph = k * x - omega * t;
        return cd(std::cos(ph), std::sin(ph));
    };
    w.dpsi_dx = [k, omega](double x, double t) {
        double ph = k * x - omega * t;
        return cd(0.0, k) * cd(std::cos(ph), std::sin(ph));
    };
    w.velocity = [vg](double, double) { return vg; };
    w.mod_max = [](double) { return 1.0; };
    return w;
}

WaveProvider make_stationary_provider(const Field& R, double energy,
                                      const PhysParams& p) {
    validate(p);
    const Grid& g = R.grid;
    if (g.n < 3 || R.values.size() != static_cast<size_t>(g.n))
        throw domain_error("amplitude does not match its grid");
    double mx = 0.0;
    for (double v : R.values) {
        if (!std::isfinite(v)) throw domain_error("amplitude has non-finite samples");
        mx = std::max(mx, std::abs(v));
    }
    if (mx == 0.0) throw domain_error("amplitude is identically zero");
    if (!std::isfinite(energy)) throw domain_error("energy must be finite");

    const Field Rf = R;
    // piecewise linear in the sampled window, zero outside it
    auto interp = [Rf](double x) -> double {
        const Grid& gg = Rf.grid;
        double t = (x - gg.x_min) / gg.h;
        if (t <= 0.0) return t < -1e-9 ? 0.0 : Rf.values[0];
        if (t >= gg.n - 1)
            return t > gg.n - 1 + 1e-9 ? 0.0 : Rf.values[gg.n - 1];
        int i = static_cast<int>(t);
        double f = t - i;
        return (1.0 - f) * Rf.values[i] + f * Rf.values[i + 1];
    };
    auto slope = [Rf](double x) -> double {
        const Grid& gg = Rf.grid;
        double t = (x - gg.x_min) / gg.h;
        if (t < 0.0 || t > gg.n - 1) return 0.0;
        int i = std::min(static_cast<int>(t), gg.n - 2);
        return (Rf.values[i + 1] - Rf.values[i]) / gg.h;
    };
    const double omega = energy / p.hbar;
    WaveProvider w;
    w.psi = [interp, omega](double x, double t) {
        double ph = -omega * t;
        return interp(x) * cd(std::cos(ph), std::sin(ph));
    };
    w.dpsi_dx = [slope, omega](double x, double t) {
        double ph = -omega * t;
        return slope(x) * cd(std::cos(ph), std::sin(ph));
    };
    w.velocity = [](double, double) { return 0.0; };
    w.mod_max = [mx](double) { return mx; };
    return w;
}

ComplexField sample_wave(const WaveProvider& w, const Grid& g, double t,
                         bool normalized_flag) {
    ComplexField out;
    out.grid = g;
    out.re.assign(static_cast<size_t>(g.n), 0.0);
    out.im.assign(static_cast<size_t>(g.n), 0.0);
    out.time = t;
    out.normalized = normalized_flag;
    for (int i = 0; i < g.n; ++i) {
        cd z = w.psi(g.point(i), t);
        out.re[i] = z.real();
        out.im[i] = z.imag();
    }
    return out;
}

std::vector<Trajectory> bohm_trajectories(const WaveProvider& w,
                                          const PhysParams& p,
                                          const std::vector<double>& x0,
                                          double t_end, double dt) {
    validate(p);
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw domain_error("trajectory step must be positive");
    if (!(t_end >= dt) || !std::isfinite(t_end))
        throw domain_error("trajectory horizon must cover at least one step");
    if (x0.empty()) throw domain_error("no starting positions");
    for (double x : x0)
        if (!std::isfinite(x))
            throw domain_error("starting positions must be finite");

    const long nsteps = std::lround(std::ceil(t_end / dt - 1e-9));
    std::vector<Trajectory> out;
    out.reserve(x0.size());
    for (double start : x0) {
        Trajectory tr;
        tr.initial_position = start;
        tr.times.reserve(nsteps + 1);
        tr.positions.reserve(nsteps + 1);
        double x = start;
        for (long i = 0;; ++i) {
            double t = i * dt;
            tr.times.push_back(t);
            tr.positions.push_back(x);
            if (i == nsteps) break;
            if (std::abs(w.psi(x, t)) < 1e-10 * w.mod_max(t)) {
                tr.halted = true;
                break;
            }
            double k1 = w.velocity(x, t);
            double k2 = w.velocity(x + 0.5 * dt * k1, t + 0.5 * dt);
            double k3 = w.velocity(x + 0.5 * dt * k2, t + 0.5 * dt);
            double k4 = w.velocity(x + dt * k3, t + dt);
            x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!std::isfinite(x)) throw numeric_error("trajectory diverged");
        }
        out.push_back(std::move(tr));
    }
    return out;
}

std::vector<Trajectory> bohm_trajectories(const PacketSpec& spec,
                                          const std::vector<double>& x0,
                                          double t_end, double dt) {
    return bohm_trajectories(make_packet_provider(spec), spec.p, x0, t_end, dt);
}

double newton_residual(const Trajectory& traj, const WaveProvider& w,
                       const PhysParams& p, double fd_h) {
    validate(p);
    if (!(fd_h > 0.0) || !std::isfinite(fd_h))
        throw domain_error("stencil spacing must be positive");
    const size_t len = traj.times.size();
    if (len != traj.positions.size())
        throw domain_error("trajectory arrays are mismatched");
    if (len < 5)
        throw domain_error("trajectory too short for a second time difference");
    const double dt = traj.times[1] - traj.times[0];
    if (!(dt > 0.0)) throw domain_error("trajectory times must increase");

    const double c2 = p.hbar * p.hbar / (2.0 * p.mass);
    double worst = 0.0;
    size_t used = 0, skipped = 0;
    for (size_t i = 1; i + 1 < len; ++i) {
        const double t = traj.times[i];
        const double x = traj.positions[i];
        const double thr = 1e-6 * w.mod_max(t);
        double r[5];
        bool ok = true;
        for (int j = -2; j <= 2; ++j) {
            double m = std::abs(w.psi(x + j * fd_h, t));
            if (m < thr) {
                ok = false;
                break;
            }
            r[j + 2] = m;
        }
        if (!ok) {
            ++skipped;
            continue;
        }
        ++used;
        double vqp = -c2 * (r[2] - 2.0 * r[3] + r[4]) / (fd_h * fd_h) / r[3];
        double vqm = -c2 * (r[0] - 2.0 * r[1] + r[2]) / (fd_h * fd_h) / r[1];
        double force = -(vqp - vqm) / (2.0 * fd_h);
        double acc =
            (traj.positions[i + 1] - 2.0 * x + traj.positions[i - 1]) /
            (dt * dt);
        worst = std::max(worst, std::abs(p.mass * acc - force));
    }
    if (used == 0 || skipped > used)
        throw insufficient_data_error(
            "too many node-adjacent samples along the path");
    return worst;
}

double newton_residual(const Trajectory& traj, const PacketSpec& spec,
                       const PhysParams& p, double fd_h) {
    return newton_residual(traj, make_packet_provider(spec), p, fd_h);
}

void write_trajectories_csv(std::ostream& os,
                            const std::vector<Trajectory>& trajs) {
    if (trajs.empty()) throw domain_error("no trajectories to write");
    size_t rows = 0;
    const std::vector<double>* times = nullptr;
    for (const Trajectory& t : trajs)
        if (t.times.size() > rows) {
            rows = t.times.size();
            times = &t.times;
        }
    if (rows == 0) throw domain_error("trajectories are empty");
    os << "t";
    for (size_t j = 0; j < trajs.size(); ++j) os << ",x_" << (j + 1);
    os << "\n";
    char buf[40];
    for (size_t i = 0; i < rows; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", (*times)[i]);
        os << buf;
        for (const Trajectory& t : trajs) {
            os << ',';
            if (i < t.positions.size()) {
                std::snprintf(buf, sizeof buf, "%.17g", t.positions[i]);
                os << buf;
            }
        }
        os << "\n";
    }
}

} // namespace bohmlab
