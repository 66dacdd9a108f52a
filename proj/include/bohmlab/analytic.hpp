#pragma once

#include "bohmlab/errors.hpp"
#include "bohmlab/params.hpp"

namespace bohmlab {

// Closed-form reference families: the oracle suite every numerical path is
// validated against. The single family constant c is omega, e, V0, kappa or
// L depending on the tag.
struct ReferenceFamily {
    enum class Tag { harmonic, hydrogen_s, step, linear_airy, box };
    Tag tag = Tag::harmonic;
    double c = 1.0;
    PhysParams p;

    static ReferenceFamily harmonic(double omega, PhysParams p = {});
    static ReferenceFamily hydrogen_s(double e, PhysParams p = {});
    static ReferenceFamily step(double V0, PhysParams p = {});
    static ReferenceFamily linear_airy(double kappa, PhysParams p = {});
    static ReferenceFamily box(double L, PhysParams p = {});
};

// Closed-form amplitude. n up to 20 for harmonic and box; n = 0 only for
// the other families.
double reference_amplitude(const ReferenceFamily& fam, int n, double x);

// Closed-form energy; step and linear_airy have no discrete level and throw.
double reference_energy(const ReferenceFamily& fam, int n);

// The target quantum potential curve of each family, with no energy offset.
double reference_quantum_potential(const ReferenceFamily& fam, double x);

// The classical potential the family's eigenproblem is posed with.
double reference_classical_potential(const ReferenceFamily& fam, double x);

} // namespace bohmlab
