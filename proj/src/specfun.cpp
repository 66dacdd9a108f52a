#include "bohmlab/specfun.hpp"

#include <cmath>
#include <limits>

namespace bohmlab {

namespace {

using ld = long double;

constexpr ld kAi0 = 0.355028053887817239260L;   // Ai(0) = 3^{-2/3}/Gamma(2/3)
constexpr ld kAip0 = -0.258819403792806798405L; // Ai'(0) = -3^{-1/3}/Gamma(1/3)
constexpr ld kBi0 = 0.614926627446000735150L;   // Bi(0) = sqrt(3) Ai(0)
constexpr ld kBip0 = 0.448288357353826357915L;  // Bi'(0) = -sqrt(3) Ai'(0)
constexpr ld kSqrtPi = 1.772453850905516027298L;
constexpr ld kQuarterPi = 0.785398163397448309616L;

struct ValDer {
    ld y;
    ld dy;
};

// Maclaurin series about 0 in the standard basis f, g with
// f'' = x f, f(0)=1, f'(0)=0 and g(0)=0, g'(0)=1. Converges fast for
// |x| <= 6 (terms carry x^3/(3k)^2 ratios); no cancellation worse than
// the alternating tail on the negative side, absorbed by long double.
ValDer airy_series(AiryBranch branch, ld x) {
    const ld eps = std::numeric_limits<ld>::epsilon();
    const ld x3 = x * x * x;
    ld f = 1.0L, fp = 0.0L, g = x, gp = 1.0L;
    ld tf = 1.0L;      // term k of f
    ld tfp = 0.0L;     // term k of f', zero until k = 1
    ld tg = x;         // term k of g
    ld tgp = 1.0L;     // term k of g'
    for (int k = 0; k < 60; ++k) {
        tf *= x3 / ld((3 * k + 2) * (3 * k + 3));
        tg *= x3 / ld((3 * k + 3) * (3 * k + 4));
        tgp *= x3 / ld((3 * k + 1) * (3 * k + 3));
        if (k == 0)
            tfp = 0.5L * x * x;
        else
            tfp *= x3 * ld(k + 1) / (ld(k) * ld(3 * k + 2) * ld(3 * k + 3));
        f += tf;
        g += tg;
        fp += tfp;
        gp += tgp;
        if (std::abs(tf) <= eps * std::abs(f) && std::abs(tg) <= eps * std::abs(g) &&
            std::abs(tfp) <= eps * std::abs(fp) && std::abs(tgp) <= eps * std::abs(gp))
            break;
    }
    if (branch == AiryBranch::Ai)
        return {kAi0 * f + kAip0 * g, kAi0 * fp + kAip0 * gp};
    return {kBi0 * f + kBip0 * g, kBi0 * fp + kBip0 * gp};
}

// Taylor steps of y'' = x y from (x0, s) to x. Step <= 0.25 keeps the
// order-30 tail far below roundoff.
ValDer taylor_march(ld x0, ValDer s, ld x) {
    const int kOrder = 30;
    const ld total = x - x0;
    const int nsteps = (int)std::ceil(std::abs((double)total) / 0.25);
    if (nsteps == 0) return s;
    const ld dt = total / (ld)nsteps;
    for (int step = 0; step < nsteps; ++step) {
        ld c[kOrder + 2];
        c[0] = s.y;
        c[1] = s.dy;
        for (int k = 0; k + 2 <= kOrder + 1; ++k) {
            const ld prev = (k == 0) ? 0.0L : c[k - 1];
            c[k + 2] = (x0 * c[k] + prev) / (ld(k + 1) * ld(k + 2));
        }
        ld y = 0.0L, dy = 0.0L;
        for (int k = kOrder + 1; k >= 1; --k) {
            y = y * dt + c[k];
            dy = dy * dt + ld(k) * c[k];
        }
        y = y * dt + c[0];
        s = {y, dy};
        x0 += dt;
    }
    return s;
}

ValDer airy_asymptotic(AiryBranch branch, ld x);

// Band 6 < |x| <= 9. Each branch is seeded on the side where it dominates
// and marched in the direction that damps contamination by the other
// solution: Bi forward from the series at 6, Ai backward from the
// asymptotics at 9 (the series value of Ai at +6 carries ~1e-11 relative
// cancellation error, which a forward march would amplify a thousandfold).
// On the negative side both solutions are bounded and the series seed at
// -6 is benign.
ValDer airy_continue(AiryBranch branch, ld x) {
    if (x < 0.0L) return taylor_march(-6.0L, airy_series(branch, -6.0L), x);
    if (branch == AiryBranch::Bi) return taylor_march(6.0L, airy_series(branch, 6.0L), x);
    return taylor_march(9.0L, airy_asymptotic(AiryBranch::Ai, 9.0L), x);
}

// Coefficients of the Poincare expansions: u_0 = 1,
// u_{k+1} = u_k (6k+1)(6k+5) / (72 (k+1)), v_k = u_k (6k+1)/(1-6k).
// Sums are truncated at the smallest term (or machine epsilon); at the
// |x| = 9 edge zeta = 18 puts that floor near 6e-16 relative.
ValDer airy_asymptotic(AiryBranch branch, ld x) {
    const ld eps = std::numeric_limits<ld>::epsilon();
    const ld z = std::abs(x);
    const ld zeta = (2.0L / 3.0L) * z * std::sqrt(z);
    const ld z14 = std::sqrt(std::sqrt(z));
    if (x > 0.0L) {
        // S_alt = sum (-1)^k u_k zeta^-k, S = sum u_k zeta^-k, same with v.
        ld su_alt = 0.0L, su = 0.0L, sv_alt = 0.0L, sv = 0.0L;
        ld t = 1.0L; // u_k zeta^-k
        ld prev_mag = std::numeric_limits<ld>::max();
        int sign = 1;
        for (int k = 0; k < 80; ++k) {
            const ld mag = std::abs(t);
            if (mag >= prev_mag) break; // divergent tail reached
            const ld w = t * ld(6 * k + 1) / ld(1 - 6 * k); // v_k zeta^-k
            su_alt += sign * t;
            su += t;
            sv_alt += sign * w;
            sv += w;
            if (mag <= eps * std::abs(su)) break;
            prev_mag = mag;
            t *= ld(6 * k + 1) * ld(6 * k + 5) / (72.0L * ld(k + 1) * zeta);
            sign = -sign;
        }
        if (branch == AiryBranch::Ai) {
            const ld pre = std::exp(-zeta) / (2.0L * kSqrtPi);
            return {pre * su_alt / z14, -pre * z14 * sv_alt};
        }
        const ld pre = std::exp(zeta) / kSqrtPi;
        return {pre * su / z14, pre * z14 * sv};
    }
    // Oscillatory side: split even/odd terms against cos/sin(zeta - pi/4).
    ld pu = 0.0L, qu = 0.0L, pv = 0.0L, qv = 0.0L;
    ld t = 1.0L; // u_k zeta^-k
    ld prev_mag = std::numeric_limits<ld>::max();
    for (int k = 0; k < 80; ++k) {
        const ld mag = std::abs(t);
        if (mag >= prev_mag || mag <= eps) break;
        const ld w = t * ld(6 * k + 1) / ld(1 - 6 * k);
        const int j = k / 2;
        const ld s = (j % 2 == 0) ? 1.0L : -1.0L;
        if (k % 2 == 0) {
            pu += s * t;
            pv += s * w;
        } else {
            qu += s * t;
            qv += s * w;
        }
        prev_mag = mag;
        t *= ld(6 * k + 1) * ld(6 * k + 5) / (72.0L * ld(k + 1) * zeta);
    }
    const ld c = std::cos(zeta - kQuarterPi);
    const ld s = std::sin(zeta - kQuarterPi);
    if (branch == AiryBranch::Ai)
        return {(c * pu + s * qu) / (kSqrtPi * z14), (z14 / kSqrtPi) * (s * pv - c * qv)};
    return {(-s * pu + c * qu) / (kSqrtPi * z14), (z14 / kSqrtPi) * (c * pv + s * qv)};
}

ValDer airy_core(AiryBranch branch, double x) {
    const ld xl = (ld)x;
    const ld ax = std::abs(xl);
    if (ax <= 6.0L) return airy_series(branch, xl);
    if (ax <= 9.0L) return airy_continue(branch, xl);
    return airy_asymptotic(branch, xl);
}

double airy_checked(AiryBranch branch, double x, bool* underflow, bool want_deriv) {
    if (underflow) *underflow = false;
    if (std::isnan(x)) throw domain_error("airy: x is nan");
    if (x < -40.0) throw domain_error("airy: x < -40 is outside the supported range");
    if (x > 40.0) {
        if (branch == AiryBranch::Bi) throw range_error("airy: Bi overflows for x > 40");
        if (underflow) *underflow = true;
        return 0.0;
    }
    const ValDer v = airy_core(branch, x);
    return (double)(want_deriv ? v.dy : v.y);
}

} // namespace

double airy(AiryBranch branch, double x, bool* underflow) {
    return airy_checked(branch, x, underflow, false);
}

double airy_prime(AiryBranch branch, double x, bool* underflow) {
    return airy_checked(branch, x, underflow, true);
}

double hermite(int n, double x) {
    if (n < 0 || n > 50) throw domain_error("hermite: order must be in [0, 50]");
    double hm = 1.0; // H_0
    if (n == 0) return hm;
    double h = 2.0 * x; // H_1
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * x * h - 2.0 * k * hm;
        hm = h;
        h = next;
    }
    return h;
}

} // namespace bohmlab
