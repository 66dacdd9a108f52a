#pragma once

#include "bohmlab/fields.hpp"
#include "bohmlab/params.hpp"

#include <complex>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

namespace bohmlab {

// Complex wavefunction samples at one time slice.
struct ComplexField {
    Grid grid;
    std::vector<double> re, im;
    double time = 0.0;
    bool normalized = false;

    std::complex<double> at(int i) const { return {re[i], im[i]}; }
};

// rho = |psi|^2 with the current and velocity fields. J comes from central
// differences of psi, v from central differences of the unwrapped phase; the
// two satisfy J = rho v only up to O(h^2), which is what the tests check.
struct FlowFields {
    Field rho;
    MaskedField current;
    MaskedField velocity;
};

struct Trajectory {
    std::vector<double> times;     // uniform step dt
    std::vector<double> positions; // same length as times
    double initial_position = 0.0;
    bool halted = false;           // stopped early in a node region
};

// One free Gaussian component: center, width sigma, momentum hbar k, weight.
struct PacketComponent {
    double center = 0.0;
    double sigma = 1.0;
    double hbar_k = 0.0;
    double weight = 1.0;
};

// Analytic wavefunction provider for the interference and trajectory demos:
// a weighted sum of spreading free Gaussians. The overall normalization
// constant is computed numerically once at t = 0 and reused, which is exact
// for all t because free evolution preserves the norm.
struct PacketSpec {
    std::vector<PacketComponent> components;
    PhysParams p;
};

// Abstract analytic wavefunction: value, x-derivative, Bohmian velocity and
// a cheap estimate of max|psi(., t)| for node detection. velocity is carried
// separately so providers with exactly known flow (plane wave: constant;
// real stationary state: zero) return it without roundoff.
struct WaveProvider {
    std::function<std::complex<double>(double x, double t)> psi;
    std::function<std::complex<double>(double x, double t)> dpsi_dx;
    std::function<double(double x, double t)> velocity;
    std::function<double(double t)> mod_max;
};

// R = |psi| and the unwrapped phase (left-to-right sweep, jumps over pi
// folded by 2 pi), phase masked where |psi| < node_tol max|psi|.
std::pair<Field, MaskedField> polar_decompose(const ComplexField& psi,
                                              double node_tol = 1e-6);

FlowFields flow_fields(const ComplexField& psi, const PhysParams& p);

// Continuity residual d rho/dt + dJ/dx at the middle snapshot, central in
// time and space; masked at nodes and endpoints. Snapshots must share one
// grid and be uniformly spaced in time, at least three of them.
MaskedField continuity_residual(const std::vector<ComplexField>& snapshots,
                                const PhysParams& p);

// Normalized packet value at (x, t).
std::complex<double> gaussian_packet(const PacketSpec& spec, double x,
                                     double t);

WaveProvider make_packet_provider(const PacketSpec& spec);
WaveProvider make_plane_wave_provider(double k, const PhysParams& p);
// psi(x, t) = R(x) e^{-i E t / hbar} with R linearly interpolated from the
// sampled amplitude; the Bohmian velocity of a real amplitude is identically
// zero and is returned as such.
WaveProvider make_stationary_provider(const Field& R, double energy,
                                      const PhysParams& p);

ComplexField sample_wave(const WaveProvider& w, const Grid& g, double t,
                         bool normalized_flag = false);

// dx/dt = v(x, t) by fixed-step RK4, positions recorded every step. A
// trajectory entering a node region (|psi| < 1e-10 max estimate) halts and
// keeps its samples up to that time.
std::vector<Trajectory> bohm_trajectories(const WaveProvider& w,
                                          const PhysParams& p,
                                          const std::vector<double>& x0,
                                          double t_end, double dt);
std::vector<Trajectory> bohm_trajectories(const PacketSpec& spec,
                                          const std::vector<double>& x0,
                                          double t_end, double dt);

// Max over interior times of |m x''(t) + dV_tot/dx| along the path, with
// x'' by second time differences and V_tot = V_Q of the provider amplitude
// (free packet, V = 0) differentiated on a 5-point stencil of spacing fd_h.
// Node-adjacent samples are excluded; more than half excluded is an error.
double newton_residual(const Trajectory& traj, const WaveProvider& w,
                       const PhysParams& p, double fd_h = 1e-3);
double newton_residual(const Trajectory& traj, const PacketSpec& spec,
                       const PhysParams& p, double fd_h = 1e-3);

// CSV "t,x_1,...,x_m"; halted trajectories pad with empty cells.
void write_trajectories_csv(std::ostream& os,
                            const std::vector<Trajectory>& trajs);

} // namespace bohmlab
