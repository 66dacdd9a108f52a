#include "bohmlab/analytic.hpp"

#include "bohmlab/specfun.hpp"

#include <cmath>

namespace bohmlab {

namespace {

ReferenceFamily make(ReferenceFamily::Tag tag, double c, PhysParams p,
                     const char* what) {
    validate(p);
    if (!(c > 0.0) || !std::isfinite(c)) throw domain_error(what);
    ReferenceFamily fam;
    fam.tag = tag;
    fam.c = c;
    fam.p = p;
    return fam;
}

void require_order(const ReferenceFamily& fam, int n) {
    switch (fam.tag) {
    case ReferenceFamily::Tag::harmonic:
    case ReferenceFamily::Tag::box:
        if (n < 0 || n > 20)
            throw domain_error("reference family: n must be in [0, 20]");
        break;
    default:
        if (n != 0)
            throw domain_error("reference family: only the ground state is in closed form");
    }
}

double bohr_radius(const ReferenceFamily& fam) {
    return fam.p.hbar * fam.p.hbar / (fam.p.mass * fam.c * fam.c);
}

double step_wavenumber(const ReferenceFamily& fam) {
    return std::sqrt(2.0 * fam.p.mass * fam.c) / fam.p.hbar;
}

double airy_scale(const ReferenceFamily& fam) {
    // k1 = 2 m kappa / hbar^2
    return std::cbrt(2.0 * fam.p.mass * fam.c / (fam.p.hbar * fam.p.hbar));
}

} // namespace

ReferenceFamily ReferenceFamily::harmonic(double omega, PhysParams p) {
    return make(Tag::harmonic, omega, p, "harmonic: omega must be positive");
}
ReferenceFamily ReferenceFamily::hydrogen_s(double e, PhysParams p) {
    return make(Tag::hydrogen_s, e, p, "hydrogen_s: charge must be positive");
}
ReferenceFamily ReferenceFamily::step(double V0, PhysParams p) {
    return make(Tag::step, V0, p, "step: V0 must be positive");
}
ReferenceFamily ReferenceFamily::linear_airy(double kappa, PhysParams p) {
    return make(Tag::linear_airy, kappa, p, "linear_airy: kappa must be positive");
}
ReferenceFamily ReferenceFamily::box(double L, PhysParams p) {
    return make(Tag::box, L, p, "box: width must be positive");
}

double reference_amplitude(const ReferenceFamily& fam, int n, double x) {
    require_order(fam, n);
    switch (fam.tag) {
    case ReferenceFamily::Tag::harmonic: {
        const double a = fam.p.mass * fam.c / fam.p.hbar;
        double fact = 1.0; // 2^n n!
        for (int k = 1; k <= n; ++k) fact *= 2.0 * k;
        return std::pow(a / M_PI, 0.25) / std::sqrt(fact) *
               hermite(n, std::sqrt(a) * x) * std::exp(-0.5 * a * x * x);
    }
    case ReferenceFamily::Tag::hydrogen_s: {
        const double a0 = bohr_radius(fam);
        return std::pow(a0, -1.5) / std::sqrt(M_PI) * std::exp(-x / a0);
    }
    case ReferenceFamily::Tag::step:
        return x < 0.0 ? 1.0 : std::cos(step_wavenumber(fam) * x);
    case ReferenceFamily::Tag::linear_airy:
        return airy(AiryBranch::Ai, -airy_scale(fam) * x);
    case ReferenceFamily::Tag::box:
        return std::sqrt(2.0 / fam.c) * std::sin((n + 1) * M_PI * x / fam.c);
    }
    throw domain_error("reference_amplitude: unknown family");
}

double reference_energy(const ReferenceFamily& fam, int n) {
    require_order(fam, n);
    switch (fam.tag) {
    case ReferenceFamily::Tag::harmonic:
        return (n + 0.5) * fam.p.hbar * fam.c;
    case ReferenceFamily::Tag::hydrogen_s: {
        const double e2 = fam.c * fam.c;
        return -fam.p.mass * e2 * e2 / (2.0 * fam.p.hbar * fam.p.hbar);
    }
    case ReferenceFamily::Tag::box: {
        const double kn = (n + 1) * M_PI / fam.c;
        return kn * kn * fam.p.hbar * fam.p.hbar / (2.0 * fam.p.mass);
    }
    case ReferenceFamily::Tag::step:
        throw no_bound_state_error("reference_energy: the step family is a continuum example");
    case ReferenceFamily::Tag::linear_airy:
        throw no_bound_state_error("reference_energy: the linear family is a continuum example");
    }
    throw domain_error("reference_energy: unknown family");
}

double reference_quantum_potential(const ReferenceFamily& fam, double x) {
    switch (fam.tag) {
    case ReferenceFamily::Tag::harmonic:
        return -0.5 * fam.p.mass * fam.c * fam.c * x * x;
    case ReferenceFamily::Tag::hydrogen_s:
        return fam.c * fam.c / x;
    case ReferenceFamily::Tag::step:
        return x < 0.0 ? 0.0 : fam.c;
    case ReferenceFamily::Tag::linear_airy:
        return fam.c * x;
    case ReferenceFamily::Tag::box:
        throw domain_error("reference_quantum_potential: no target curve for the box family");
    }
    throw domain_error("reference_quantum_potential: unknown family");
}

double reference_classical_potential(const ReferenceFamily& fam, double x) {
    switch (fam.tag) {
    case ReferenceFamily::Tag::harmonic:
        return 0.5 * fam.p.mass * fam.c * fam.c * x * x;
    case ReferenceFamily::Tag::hydrogen_s:
        return -fam.c * fam.c / x;
    case ReferenceFamily::Tag::step:
        // downward step at the origin; the flat piece sits at the continuum
        // edge V0 so that V_Q + V = V0 on both sides
        return x < 0.0 ? fam.c : 0.0;
    case ReferenceFamily::Tag::linear_airy:
        return -fam.c * x;
    case ReferenceFamily::Tag::box:
        return 0.0;
    }
    throw domain_error("reference_classical_potential: unknown family");
}

} // namespace bohmlab
