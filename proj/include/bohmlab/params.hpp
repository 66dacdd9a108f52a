#pragma once

#include "bohmlab/errors.hpp"

#include <cmath>

namespace bohmlab {

// Physical constants of the problem. Both must be strictly positive and finite.
struct PhysParams {
    double mass = 1.0;
    double hbar = 1.0;
};

inline void validate(const PhysParams& p) {
    if (!(p.mass > 0.0) || !std::isfinite(p.mass))
        throw domain_error("PhysParams: mass must be positive and finite");
    if (!(p.hbar > 0.0) || !std::isfinite(p.hbar))
        throw domain_error("PhysParams: hbar must be positive and finite");
}

} // namespace bohmlab
