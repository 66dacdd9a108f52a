#include "bohmlab/cli.hpp"

#include "bohmlab/analytic.hpp"
#include "bohmlab/bohm.hpp"
#include "bohmlab/eigensolver.hpp"
#include "bohmlab/qpotential.hpp"
#include "bohmlab/specfun.hpp"
#include "bohmlab/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

namespace bohmlab {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double knan = std::numeric_limits<double>::quiet_NaN();

double pick(double flag, double dflt) { return std::isnan(flag) ? dflt : flag; }

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw domain_error("cannot write '" + path + "'");
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw domain_error("cannot read '" + path + "'");
    return is;
}

std::string sidecar_path(const std::string& csv) {
    if (csv.size() >= 4 && csv.compare(csv.size() - 4, 4, ".csv") == 0)
        return csv.substr(0, csv.size() - 4) + ".json";
    return csv + ".json";
}

ordered_json grid_block(GridKind kind, double x_min, double x_max, int n,
                        double h) {
    ordered_json g;
    g["kind"] = kind == GridKind::radial ? "radial" : "cartesian";
    g["x_min"] = x_min;
    g["x_max"] = x_max;
    g["n"] = n;
    g["h"] = h;
    return g;
}

int emit_index(double x, double lo, double h, int n) {
    long i = std::lround((x - lo) / h);
    if (i < 0) i = 0;
    if (i > n - 1) i = n - 1;
    return static_cast<int>(i);
}

// one row set of a figure: abscissa, target curve, amplitude
struct FigureData {
    const char* col[3];
    std::vector<double> x, vq, r;
    ordered_json sidecar;
};

void write_figure(const std::string& out_path, const FigureData& fd) {
    std::ofstream os = open_out(out_path);
    os << fd.col[0] << ',' << fd.col[1] << ',' << fd.col[2] << '\n';
    char buf[64];
    for (size_t i = 0; i < fd.x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", fd.x[i]);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", fd.vq[i]);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", fd.r[i]);
        os << buf << '\n';
    }
    std::ofstream js = open_out(sidecar_path(out_path));
    js << fd.sidecar.dump(2) << '\n';
}

ordered_json roundtrip_block(double node_tol, double tolerance,
                             const std::vector<double>& exclude_x) {
    ordered_json t;
    t["roundtrip"]["node_tol"] = node_tol;
    t["roundtrip"]["tolerance"] = tolerance;
    t["roundtrip"]["exclude_x"] = exclude_x;
    return t;
}

int cmd_figures(int fig, std::string out, const std::string& branch,
                double fx_min, double fx_max, double fh, double fm,
                double fhbar) {
    if (out.empty()) out = "fig" + std::to_string(fig) + ".csv";
    FigureData fd;
    fd.col[0] = "x";
    fd.col[1] = "v_q";
    fd.col[2] = "r";
    ordered_json& side = fd.sidecar;
    side["command"] = "figures";

    if (fig == 1) {
        PhysParams p{pick(fm, 1.0), pick(fhbar, 1.0)};
        ReferenceFamily fam = ReferenceFamily::harmonic(0.5, p);
        double lo = pick(fx_min, -6.0), hi = pick(fx_max, 6.0);
        double h = pick(fh, 0.01);
        double slo = std::min(-12.0, lo), shi = std::max(12.0, hi);
        int ns = static_cast<int>(std::lround((shi - slo) / h)) + 1;
        Grid gs = make_uniform_grid(GridKind::cartesian, slo, shi, ns);
        Field target = sample_field(gs, Meaning::potential, [&](double x) {
            return reference_quantum_potential(fam, x);
        });
        EigenSolution sol =
            inverse_from_quantum_potential(target, 0, p, BoundaryChoice::line());
        int ilo = emit_index(lo, slo, gs.h, ns), ihi = emit_index(hi, slo, gs.h, ns);
        for (int i = ilo; i <= ihi; ++i) {
            double x = gs.point(i);
            fd.x.push_back(x);
            fd.vq.push_back(reference_quantum_potential(fam, x));
            fd.r.push_back(sol.amplitude.values[i]);
        }
        side["params"] = {{"fig", 1},          {"family", "harmonic"},
                          {"m", p.mass},       {"hbar", p.hbar},
                          {"omega", 0.5},      {"n", 0},
                          {"solve_x_min", slo}, {"solve_x_max", shi}};
        side["grid"] = grid_block(GridKind::cartesian, gs.point(ilo),
                                  gs.point(ihi), ihi - ilo + 1, gs.h);
        side["energy_offset"] = sol.energy;
        side["tolerances"] = roundtrip_block(1e-6, 1e-6, {});
    } else if (fig == 2) {
        PhysParams p{pick(fm, 0.511), pick(fhbar, 1.0)};
        ReferenceFamily fam = ReferenceFamily::hydrogen_s(1.0, p);
        double h = pick(fh, 0.005);
        double hi = pick(fx_max, 20.0), lo = pick(fx_min, h);
        double rtop = std::max(60.0, hi);
        int ns = static_cast<int>(std::lround(rtop / h)) + 1;
        Grid gs = make_uniform_grid(GridKind::radial, 0.0, rtop, ns);
        Field target = sample_field(gs, Meaning::potential, [&](double r) {
            return reference_quantum_potential(fam, r);
        });
        EigenSolution sol = inverse_from_quantum_potential(
            target, 0, p, BoundaryChoice::radial());
        int ilo = std::max(1, emit_index(lo, 0.0, gs.h, ns));
        int ihi = emit_index(hi, 0.0, gs.h, ns);
        fd.col[0] = "r";
        fd.col[2] = "r_amp";
        for (int i = ilo; i <= ihi; ++i) {
            double r = gs.point(i);
            fd.x.push_back(r);
            fd.vq.push_back(reference_quantum_potential(fam, r));
            fd.r.push_back(sol.amplitude.values[i]);
        }
        side["params"] = {{"fig", 2},    {"family", "hydrogen"},
                          {"m", p.mass}, {"hbar", p.hbar},
                          {"e", 1.0},    {"n", 0},
                          {"solve_r_max", rtop}};
        side["grid"] = grid_block(GridKind::radial, gs.point(ilo),
                                  gs.point(ihi), ihi - ilo + 1, gs.h);
        side["energy_offset"] = sol.energy;
        side["tolerances"] = roundtrip_block(1e-6, 1e-6, {});
    } else if (fig == 3) {
        PhysParams p{pick(fm, 1.0), pick(fhbar, 1.0)};
        ReferenceFamily fam = ReferenceFamily::step(1.5, p);
        double lo = pick(fx_min, -3.0), hi = pick(fx_max, 3.0);
        double h = pick(fh, 0.002);
        int n = static_cast<int>(std::lround((hi - lo) / h)) + 1;
        Grid g = make_uniform_grid(GridKind::cartesian, lo, hi, n);
        Field target = sample_field(g, Meaning::potential, [&](double x) {
            return reference_quantum_potential(fam, x);
        });
        Field R = integrate_amplitude_ode(target, 0.0, 1.0, 0.0, p);
        for (int i = 0; i < n; ++i) {
            double x = g.point(i);
            fd.x.push_back(x);
            fd.vq.push_back(reference_quantum_potential(fam, x));
            fd.r.push_back(R.values[i]);
        }
        side["params"] = {{"fig", 3},    {"family", "step"},
                          {"m", p.mass}, {"hbar", p.hbar},
                          {"v0", 1.5},   {"x0", 0.0},
                          {"r0", 1.0},   {"dr0", 0.0}};
        side["grid"] = grid_block(GridKind::cartesian, g.x_min, g.x_max, n, g.h);
        side["tolerances"] = roundtrip_block(1e-3, 1e-5, {0.0});
    } else {
        PhysParams p{pick(fm, 1.0), pick(fhbar, 1.0)};
        const double kappa = 0.1;
        ReferenceFamily fam = ReferenceFamily::linear_airy(kappa, p);
        double lo = pick(fx_min, -20.0), hi = pick(fx_max, 8.0);
        double h = pick(fh, 0.005);
        int n = static_cast<int>(std::lround((hi - lo) / h)) + 1;
        Grid g = make_uniform_grid(GridKind::cartesian, lo, hi, n);
        Field target = sample_field(g, Meaning::potential, [&](double x) {
            return reference_quantum_potential(fam, x);
        });
        // integrate from the end where the chosen branch is smallest, so the
        // wanted solution grows relative to the parasitic one
        AiryBranch br = branch == "Bi" ? AiryBranch::Bi : AiryBranch::Ai;
        double x0 = br == AiryBranch::Ai ? lo : hi;
        double kcub = std::cbrt(2.0 * p.mass * kappa / (p.hbar * p.hbar));
        double zeta = -kcub * x0;
        double R0 = airy(br, zeta);
        double dR0 = -kcub * airy_prime(br, zeta);
        Field R = integrate_amplitude_ode(target, x0, R0, dR0, p);
        for (int i = 0; i < n; ++i) {
            double x = g.point(i);
            fd.x.push_back(x);
            fd.vq.push_back(reference_quantum_potential(fam, x));
            fd.r.push_back(R.values[i]);
        }
        side["params"] = {{"fig", 4},       {"family", "linear"},
                          {"m", p.mass},    {"hbar", p.hbar},
                          {"kappa", kappa}, {"x0", x0},
                          {"r0", R0},       {"dr0", dR0}};
        side["grid"] = grid_block(GridKind::cartesian, g.x_min, g.x_max, n, g.h);
        side["branch"] = br == AiryBranch::Bi ? "Bi" : "Ai";
        side["tolerances"] = roundtrip_block(1e-2, 2e-4, {});
    }
    side["library_version"] = library_version;
    write_figure(out, fd);
    return 0;
}

int cmd_forward(const std::string& in, const std::string& out, double m,
                double hbar, double node_tol) {
    std::ifstream is = open_in(in);
    Field R = read_field_csv(is, Meaning::amplitude);
    MaskedField vq = quantum_potential(R, PhysParams{m, hbar}, node_tol);
    if (out.empty()) {
        write_field_csv(std::cout, vq);
    } else {
        std::ofstream os = open_out(out);
        write_field_csv(os, vq);
    }
    return 0;
}

struct Problem {
    Field V;
    BoundaryChoice bc;
};

BoundaryChoice named_bc(const std::string& name, GridKind kind) {
    if (name == "auto")
        return kind == GridKind::radial ? BoundaryChoice::radial()
                                        : BoundaryChoice::line();
    if (name == "line") return BoundaryChoice::line();
    if (name == "radial") return BoundaryChoice::radial();
    if (name == "box") return BoundaryChoice::box();
    throw domain_error("unknown boundary choice '" + name + "'");
}

Problem build_problem(const std::string& family, const std::string& pot_csv,
                      const std::string& bc_name, double omega, double e,
                      double L, const PhysParams& p, double fx_min,
                      double fx_max, double fh) {
    if (family.empty() == pot_csv.empty())
        throw domain_error("pass exactly one of --family or --potential");
    if (!pot_csv.empty()) {
        std::ifstream is = open_in(pot_csv);
        Field V = read_field_csv(is, Meaning::potential);
        return {std::move(V), named_bc(bc_name, V.grid.kind)};
    }
    if (family == "harmonic") {
        double lo = pick(fx_min, -12.0), hi = pick(fx_max, 12.0);
        double h = pick(fh, 0.01);
        int n = static_cast<int>(std::lround((hi - lo) / h)) + 1;
        Grid g = make_uniform_grid(GridKind::cartesian, lo, hi, n);
        ReferenceFamily fam = ReferenceFamily::harmonic(omega, p);
        Field V = sample_field(g, Meaning::potential, [&](double x) {
            return reference_classical_potential(fam, x);
        });
        return {std::move(V), named_bc(bc_name, GridKind::cartesian)};
    }
    if (family == "hydrogen") {
        double hi = pick(fx_max, 60.0), h = pick(fh, 0.005);
        int n = static_cast<int>(std::lround(hi / h)) + 1;
        Grid g = make_uniform_grid(GridKind::radial, 0.0, hi, n);
        ReferenceFamily fam = ReferenceFamily::hydrogen_s(e, p);
        Field V = sample_field(g, Meaning::potential, [&](double r) {
            return reference_classical_potential(fam, r);
        });
        return {std::move(V), bc_name == "auto"
                                  ? BoundaryChoice::radial()
                                  : named_bc(bc_name, GridKind::radial)};
    }
    if (family == "box") {
        int n = std::isnan(fh) ? 1001
                               : static_cast<int>(std::lround(L / fh)) + 1;
        Grid g = make_uniform_grid(GridKind::cartesian, 0.0, L, n);
        Field V = make_field(g, Meaning::potential);
        return {std::move(V), bc_name == "auto"
                                  ? BoundaryChoice::box()
                                  : named_bc(bc_name, GridKind::cartesian)};
    }
    if (family == "step" || family == "linear")
        throw domain_error("family '" + family +
                           "' has no bound state to solve for");
    throw domain_error("unknown family '" + family + "'");
}

void write_amplitude(const std::string& out, const Field& R) {
    if (out.empty()) return;
    std::ofstream os = open_out(out);
    write_field_csv(os, R);
}

int cmd_solve(const std::string& family, const std::string& pot_csv,
              const std::string& bc_name, int n, double omega, double e,
              double L, double m, double hbar, double fx_min, double fx_max,
              double fh, const std::string& out) {
    PhysParams p{m, hbar};
    Problem pr = build_problem(family, pot_csv, bc_name, omega, e, L, p,
                               fx_min, fx_max, fh);
    EigenSolution sol = solve_bound_state(pr.V, n, p, pr.bc);
    std::cout << eigensolution_json(sol) << "\n";
    write_amplitude(out, sol.amplitude);
    return 0;
}

int cmd_inverse(const std::string& in, int n, const std::string& bc_name,
                double m, double hbar, const std::string& out) {
    std::ifstream is = open_in(in);
    Field vq = read_field_csv(is, Meaning::potential);
    PhysParams p{m, hbar};
    EigenSolution sol = inverse_from_quantum_potential(
        vq, n, p, named_bc(bc_name, vq.grid.kind));
    std::cout << eigensolution_json(sol) << "\n";
    write_amplitude(out, sol.amplitude);
    return 0;
}

int cmd_verify(const std::string& family, const std::string& pot_csv,
               const std::string& bc_name, int n, double omega, double e,
               double L, double m, double hbar, double fx_min, double fx_max,
               double fh, double tol, double node_tol) {
    PhysParams p{m, hbar};
    Problem pr = build_problem(family, pot_csv, bc_name, omega, e, L, p,
                               fx_min, fx_max, fh);
    EigenSolution sol = solve_bound_state(pr.V, n, p, pr.bc);
    IdentityReport rep = stationary_identity_residual(pr.V, sol, p, node_tol);
    std::cout << identity_report_json(rep) << "\n";
    double limit = pick(tol, 1e-3 * std::max(1.0, std::abs(sol.energy)));
    return rep.max_residual <= limit ? 0 : 4;
}

int cmd_trajectories(const std::string& spec_name, double k, double t_end,
                     double dt, std::vector<double> x0, double m, double hbar,
                     const std::string& out) {
    PacketSpec spec;
    spec.p = PhysParams{m, hbar};
    if (spec_name == "single") {
        spec.components.push_back({0.0, 1.0, k, 1.0});
        if (x0.empty()) x0 = {0.5};
    } else if (spec_name == "two_gaussian") {
        spec.components.push_back({-4.0, 1.0, +2.0, 1.0});
        spec.components.push_back({+4.0, 1.0, -2.0, 1.0});
        if (x0.empty()) x0 = {-1.5, -1.0, -0.5, 0.5, 1.0, 1.5};
    } else {
        throw domain_error("unknown packet spec '" + spec_name + "'");
    }
    std::vector<Trajectory> trajs = bohm_trajectories(spec, x0, t_end, dt);
    if (out.empty()) {
        write_trajectories_csv(std::cout, trajs);
    } else {
        std::ofstream os = open_out(out);
        write_trajectories_csv(os, trajs);
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"bohmlab: quantum potential laboratory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", library_version);
    // long-only help: the short -h would shadow the grid spacing flag --h
    app.set_help_flag("--help", "print help and exit");

    int rc = 0;

    // figures
    auto* figc = app.add_subcommand(
        "figures", "write one of the four reference curve data sets");
    int fig = 0;
    std::string fig_out, branch = "Ai";
    double fig_xmin = knan, fig_xmax = knan, fig_h = knan;
    double fig_m = knan, fig_hbar = knan;
    figc->add_option("--fig", fig, "figure number")
        ->required()
        ->check(CLI::Range(1, 4));
    figc->add_option("--out", fig_out, "output CSV path (default figN.csv)");
    figc->add_option("--branch", branch, "Airy branch for figure 4")
        ->check(CLI::IsMember({"Ai", "Bi"}));
    figc->add_option("--x-min", fig_xmin, "override emitted window start");
    figc->add_option("--x-max", fig_xmax, "override emitted window end");
    figc->add_option("--h", fig_h, "override grid spacing");
    figc->add_option("--m", fig_m, "override particle mass");
    figc->add_option("--hbar", fig_hbar, "override hbar");
    figc->callback([&] {
        rc = cmd_figures(fig, fig_out, branch, fig_xmin, fig_xmax, fig_h,
                         fig_m, fig_hbar);
    });

    // forward
    auto* fwdc = app.add_subcommand(
        "forward", "quantum potential induced by an amplitude CSV");
    std::string fwd_in, fwd_out;
    double fwd_m = 1.0, fwd_hbar = 1.0, fwd_node_tol = 1e-6;
    fwdc->add_option("--in", fwd_in, "amplitude CSV")->required();
    fwdc->add_option("--out", fwd_out, "output CSV (default stdout)");
    fwdc->add_option("--m", fwd_m, "particle mass");
    fwdc->add_option("--hbar", fwd_hbar, "hbar");
    fwdc->add_option("--node-tol", fwd_node_tol, "node masking threshold");
    fwdc->callback(
        [&] { rc = cmd_forward(fwd_in, fwd_out, fwd_m, fwd_hbar, fwd_node_tol); });

    // shared solver flags
    std::string sv_family, sv_pot, sv_bc = "auto";
    int sv_n = 0;
    double sv_omega = 0.5, sv_e = 1.0, sv_L = 1.0;
    double sv_m = 1.0, sv_hbar = 1.0;
    double sv_xmin = knan, sv_xmax = knan, sv_h = knan;
    auto add_problem_flags = [&](CLI::App* c) {
        c->add_option("--family", sv_family, "harmonic | hydrogen | box");
        c->add_option("--potential", sv_pot, "potential CSV instead of a family");
        c->add_option("--bc", sv_bc, "boundary: auto | line | radial | box")
            ->check(CLI::IsMember({"auto", "line", "radial", "box"}));
        c->add_option("--n", sv_n, "state index")->check(CLI::NonNegativeNumber);
        c->add_option("--omega", sv_omega, "harmonic frequency");
        c->add_option("--e", sv_e, "hydrogen charge");
        c->add_option("--L", sv_L, "box width");
        c->add_option("--m", sv_m, "particle mass");
        c->add_option("--hbar", sv_hbar, "hbar");
        c->add_option("--x-min", sv_xmin, "override grid start");
        c->add_option("--x-max", sv_xmax, "override grid end");
        c->add_option("--h", sv_h, "override grid spacing");
    };

    // solve
    auto* solc = app.add_subcommand("solve", "bound state of a potential");
    std::string sol_out;
    add_problem_flags(solc);
    solc->add_option("--out", sol_out, "amplitude CSV path");
    solc->callback([&] {
        rc = cmd_solve(sv_family, sv_pot, sv_bc, sv_n, sv_omega, sv_e, sv_L,
                       sv_m, sv_hbar, sv_xmin, sv_xmax, sv_h, sol_out);
    });

    // inverse
    auto* invc = app.add_subcommand(
        "inverse", "amplitude sourcing a quantum potential CSV");
    std::string inv_in, inv_out, inv_bc = "auto";
    int inv_n = 0;
    double inv_m = 1.0, inv_hbar = 1.0;
    invc->add_option("--in", inv_in, "target quantum potential CSV")->required();
    invc->add_option("--n", inv_n, "state index")->check(CLI::NonNegativeNumber);
    invc->add_option("--bc", inv_bc, "boundary: auto | line | radial | box")
        ->check(CLI::IsMember({"auto", "line", "radial", "box"}));
    invc->add_option("--m", inv_m, "particle mass");
    invc->add_option("--hbar", inv_hbar, "hbar");
    invc->add_option("--out", inv_out, "amplitude CSV path");
    invc->callback([&] {
        rc = cmd_inverse(inv_in, inv_n, inv_bc, inv_m, inv_hbar, inv_out);
    });

    // verify
    auto* verc = app.add_subcommand(
        "verify", "check V_Q = -V + E for a solved stationary state");
    double ver_tol = knan, ver_node_tol = 1e-6;
    add_problem_flags(verc);
    verc->add_option("--tol", ver_tol,
                     "residual bound (default 1e-3 max(1, |E|))");
    verc->add_option("--node-tol", ver_node_tol, "node masking threshold");
    verc->callback([&] {
        rc = cmd_verify(sv_family, sv_pot, sv_bc, sv_n, sv_omega, sv_e, sv_L,
                        sv_m, sv_hbar, sv_xmin, sv_xmax, sv_h, ver_tol,
                        ver_node_tol);
    });

    // trajectories
    auto* trc = app.add_subcommand(
        "trajectories", "Bohmian paths in an analytic packet");
    std::string tr_spec = "two_gaussian", tr_out;
    double tr_k = 1.0, tr_tend = 8.0, tr_dt = 1e-3;
    double tr_m = 1.0, tr_hbar = 1.0;
    std::vector<double> tr_x0;
    trc->add_option("--spec", tr_spec, "single | two_gaussian")
        ->check(CLI::IsMember({"single", "two_gaussian"}));
    trc->add_option("--k", tr_k, "wavenumber of the single packet");
    trc->add_option("--t-end", tr_tend, "integration horizon");
    trc->add_option("--dt", tr_dt, "time step");
    trc->add_option("--x0", tr_x0, "starting positions");
    trc->add_option("--m", tr_m, "particle mass");
    trc->add_option("--hbar", tr_hbar, "hbar");
    trc->add_option("--out", tr_out, "trajectory CSV (default stdout)");
    trc->callback([&] {
        rc = cmd_trajectories(tr_spec, tr_k, tr_tend, tr_dt, tr_x0, tr_m,
                              tr_hbar, tr_out);
    });

    for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; }))
        sub->set_help_flag("--help", "print help and exit");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(std::move(rev));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 3;
    }
    return rc;
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<size_t>(argc - 1) : 0);
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

} // namespace bohmlab
