#pragma once

#include <stdexcept>
#include <string>

namespace bohmlab {

// Base for everything the library throws.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments or malformed input: the caller violated a precondition.
struct domain_error : error {
    using error::error;
};

// Argument outside the numerically supported range of an implementation.
struct range_error : domain_error {
    using domain_error::domain_error;
};

// Degenerate norm (zero or non-finite) during normalization.
struct normalization_error : domain_error {
    using domain_error::domain_error;
};

// A computation failed numerically on valid-looking input.
struct numeric_error : error {
    using error::error;
};

// No n-th bound state exists below the continuum edge of the potential.
struct no_bound_state_error : numeric_error {
    using numeric_error::numeric_error;
};

// Eigenstate has not decayed at the grid edge; the domain truncates the state.
struct domain_too_small_error : numeric_error {
    domain_too_small_error(const std::string& msg, double edge_amp)
        : numeric_error(msg), edge_amplitude(edge_amp) {}
    double edge_amplitude;
};

// Computed eigenvector has the wrong number of interior sign changes.
struct node_count_error : numeric_error {
    using numeric_error::numeric_error;
};

// Amplitude integration overflowed; last_valid_x is where it still was finite.
struct growth_error : numeric_error {
    growth_error(const std::string& msg, double x)
        : numeric_error(msg), last_valid_x(x) {}
    double last_valid_x;
};

// Too few usable samples to form the requested statistic.
struct insufficient_data_error : numeric_error {
    using numeric_error::numeric_error;
};

} // namespace bohmlab
