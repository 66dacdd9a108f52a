#include "bohmlab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

namespace bohmlab {

Grid make_uniform_grid(GridKind kind, double x_min, double x_max, int n) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
        throw domain_error("grid bounds must be finite");
    if (n < 3) throw domain_error("grid needs at least 3 points");
    if (!(x_min < x_max)) throw domain_error("grid needs x_min < x_max");
    if (kind == GridKind::radial && x_min < 0.0)
        throw domain_error("radial grid needs x_min >= 0");
    Grid g;
    g.kind = kind;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n = n;
    g.h = (x_max - x_min) / (n - 1);
    return g;
}

Field make_field(const Grid& g, Meaning m) {
    Field f;
    f.grid = g;
    f.values.assign(static_cast<size_t>(g.n), 0.0);
    f.meaning = m;
    return f;
}

int MaskedField::valid_count() const {
    int c = 0;
    for (char m : mask) c += (m != 0);
    return c;
}

double MaskedField::max_abs_valid() const {
    double m = 0.0;
    for (size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) m = std::max(m, std::abs(base.values[i]));
    return m;
}

MaskedField unmasked(Field f) {
    MaskedField mf;
    mf.mask.assign(f.values.size(), 1);
    mf.base = std::move(f);
    return mf;
}

namespace {

// trapezoid weight under the grid measure; radial weight vanishes at r = 0
double measure_weight(const Grid& g, int i) {
    double w = (i == 0 || i == g.n - 1) ? 0.5 * g.h : g.h;
    if (g.kind == GridKind::radial) {
        double r = g.point(i);
        w *= 4.0 * std::numbers::pi * r * r;
    }
    return w;
}

} // namespace

double norm_squared(const Field& f) {
    double s = 0.0;
    for (int i = 0; i < f.grid.n; ++i)
        s += measure_weight(f.grid, i) * f.values[i] * f.values[i];
    return s;
}

MaskedField laplacian(const Field& f, bool even_origin) {
    const Grid& g = f.grid;
    if (g.n < 3) throw domain_error("laplacian needs at least 3 points");
    MaskedField out;
    out.base = make_field(g, Meaning::generic);
    out.mask.assign(static_cast<size_t>(g.n), 1);
    const double h2 = g.h * g.h;

    for (int i = 1; i < g.n - 1; ++i) {
        double d2 = (f.values[i - 1] - 2.0 * f.values[i] + f.values[i + 1]) / h2;
        if (g.kind == GridKind::cartesian) {
            out.base.values[i] = d2;
        } else {
            double d1 = (f.values[i + 1] - f.values[i - 1]) / (2.0 * g.h);
            // 2*d1 first: keeps the quotient exact when r divides evenly
            out.base.values[i] = d2 + 2.0 * d1 / g.point(i);
        }
    }

    out.base.values[g.n - 1] = out.base.values[g.n - 2];
    out.mask[static_cast<size_t>(g.n - 1)] = 0;

    if (g.kind == GridKind::radial && g.x_min == 0.0 && even_origin) {
        // even f about r = 0: Lap f(0) = 3 f''(0) = 6 (f(h) - f(0)) / h^2
        out.base.values[0] = 6.0 * (f.values[1] - f.values[0]) / h2;
    } else {
        out.base.values[0] = out.base.values[1];
        out.mask[0] = 0;
    }
    return out;
}

Field normalize(const Field& f) {
    if (f.meaning != Meaning::amplitude)
        throw domain_error("normalize expects an amplitude field");
    double ns = norm_squared(f);
    if (!(ns > 0.0) || !std::isfinite(ns))
        throw normalization_error("zero or non-finite norm");
    double c = 1.0 / std::sqrt(ns);
    Field out = f;
    for (double& v : out.values) v *= c;
    out.normalized = true;
    return out;
}

namespace {

void write_csv_rows(std::ostream& os, const Field& f, const MaskedField* mf) {
    os << (f.grid.kind == GridKind::radial ? "r,value\n" : "x,value\n");
    char buf[64];
    for (int i = 0; i < f.grid.n; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", f.grid.point(i));
        os << buf << ',';
        if (mf == nullptr || mf->valid(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", f.values[i]);
            os << buf;
        }
        os << '\n';
    }
}

double parse_double(const std::string& tok) {
    const char* s = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || !std::isfinite(v))
        throw domain_error("bad numeric cell: '" + tok + "'");
    return v;
}

} // namespace

void write_field_csv(std::ostream& os, const Field& f) {
    write_csv_rows(os, f, nullptr);
}

void write_field_csv(std::ostream& os, const MaskedField& f) {
    write_csv_rows(os, f.base, &f);
}

Field read_field_csv(std::istream& is, Meaning m) {
    std::string line;
    if (!std::getline(is, line)) throw domain_error("empty csv");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    GridKind kind;
    if (line == "x,value") kind = GridKind::cartesian;
    else if (line == "r,value") kind = GridKind::radial;
    else throw domain_error("bad csv header: '" + line + "'");

    std::vector<double> xs, vs;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw domain_error("csv row without separator");
        std::string vcell = line.substr(comma + 1);
        if (vcell.empty())
            throw domain_error("masked cell in input csv");
        xs.push_back(parse_double(line.substr(0, comma)));
        vs.push_back(parse_double(vcell));
    }
    if (xs.size() < 3) throw domain_error("csv needs at least 3 rows");

    int n = static_cast<int>(xs.size());
    Grid g = make_uniform_grid(kind, xs.front(), xs.back(), n);
    for (int i = 0; i < n; ++i) {
        double tol = 1e-9 * std::max(1.0, std::abs(xs[i]));
        if (std::abs(xs[i] - g.point(i)) > tol)
            throw domain_error("csv grid is not uniform");
    }
    Field f = make_field(g, m);
    f.values = std::move(vs);
    return f;
}

} // namespace bohmlab
