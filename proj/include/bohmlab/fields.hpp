#pragma once

#include "bohmlab/errors.hpp"

#include <iosfwd>
#include <utility>
#include <vector>

namespace bohmlab {

enum class GridKind { cartesian, radial };

// Uniform 1D lattice, Cartesian line or radial half-line.
// h is fixed at construction; point(i) is bit-reproducible from (x_min, h, i).
// Downstream numerics must use the stored h, never differences of points.
struct Grid {
    GridKind kind = GridKind::cartesian;
    double x_min = 0.0;
    double x_max = 1.0;
    int n = 0;
    double h = 0.0;

    double point(int i) const { return x_min + i * h; }
    bool operator==(const Grid&) const = default;
};

Grid make_uniform_grid(GridKind kind, double x_min, double x_max, int n);

enum class Meaning { amplitude, potential, density, generic };

// Real samples on a grid. The normalized flag is only ever set by normalize()
// or by a solver that has checked the quadrature norm.
struct Field {
    Grid grid;
    std::vector<double> values;
    Meaning meaning = Meaning::generic;
    bool normalized = false;
};

Field make_field(const Grid& g, Meaning m = Meaning::generic);

template <class F>
Field sample_field(const Grid& g, Meaning m, F&& f) {
    Field out = make_field(g, m);
    for (int i = 0; i < g.n; ++i) out.values[i] = f(g.point(i));
    return out;
}

// Field plus validity mask. Masked-out entries are excluded from norms,
// maxima and residual statistics.
struct MaskedField {
    Field base;
    std::vector<char> mask; // nonzero = valid

    bool valid(int i) const { return mask[static_cast<size_t>(i)] != 0; }
    int valid_count() const;
    double max_abs_valid() const;
};

MaskedField unmasked(Field f);

// Trapezoidal quadrature of f^2 under the grid measure
// (dx on cartesian grids, 4 pi r^2 dr on radial ones).
double norm_squared(const Field& f);

// Central second difference on cartesian grids; f'' + (2/r) f' on radial
// ones (the 3D s-wave form). Endpoint entries copy the nearest interior
// value and are masked. A radial grid containing r = 0 masks that point
// unless even_origin is set, in which case 3 f''(0) under even symmetry
// is used and the origin counts as valid.
MaskedField laplacian(const Field& f, bool even_origin = false);

// Returns c*f with unit quadrature norm and the normalized flag set.
Field normalize(const Field& f);

// CSV with header "x,value" ("r,value" on radial grids), 17 significant
// digits. Masked rows carry an empty value cell.
void write_field_csv(std::ostream& os, const Field& f);
void write_field_csv(std::ostream& os, const MaskedField& f);
Field read_field_csv(std::istream& is, Meaning m = Meaning::generic);

} // namespace bohmlab
