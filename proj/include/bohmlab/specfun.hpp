#pragma once

#include "bohmlab/errors.hpp"

namespace bohmlab {

enum class AiryBranch { Ai, Bi };

// Airy function value, relative accuracy 1e-10 wherever |result| > 1e-300.
// Strategy: Maclaurin series for |x| <= 6, Taylor continuation of y'' = x y
// out to |x| = 9, asymptotic expansions beyond. Supported for |x| <= 40;
// past +40 Bi overflows (range_error) and Ai returns 0.0, setting
// *underflow when the pointer is given.
double airy(AiryBranch branch, double x, bool* underflow = nullptr);

// d/dx of the same branch, same strategy and accuracy.
double airy_prime(AiryBranch branch, double x, bool* underflow = nullptr);

// Physicists' Hermite polynomial H_n via the three-term recurrence,
// 0 <= n <= 50.
double hermite(int n, double x);

} // namespace bohmlab
