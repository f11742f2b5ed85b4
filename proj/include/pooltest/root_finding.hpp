#pragma once

#include "pooltest/core.hpp"

#include <cmath>
#include <string>

namespace pooltest {

struct RootFindResult {
    double x;
    double residual;
    int iterations;
    double lo;
    double hi;
};

struct BisectionOptions {
    double x_tolerance = 1e-10;
    double f_tolerance = 1e-10;
    int max_iterations = 200;
};

/// Plain bisection for a zero of `f` on [lo, hi].
///
/// Halves until the bracket is narrower than x_tolerance and |f(mid)| < f_tolerance, or
/// until the bracket cannot shrink further in double precision. Throws BracketFailure when
/// f(lo) and f(hi) share a sign or the tolerances are not met within max_iterations.
template <class F>
[[nodiscard]] RootFindResult bisect(const F& f, double lo, double hi, const BisectionOptions& opt = {})
{
    if (!(lo <= hi)) throw DomainError("bisect: empty bracket");
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) return {lo, 0.0, 0, lo, lo};
    if (f_hi == 0.0) return {hi, 0.0, 0, hi, hi};
    if (std::signbit(f_lo) == std::signbit(f_hi)) {
        throw BracketFailure("no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }

    int it = 0;
    double mid = 0.5 * (lo + hi);
    double f_mid = f(mid);
    while (it < opt.max_iterations) {
        if (f_mid == 0.0) return {mid, 0.0, it, mid, mid};
        if (hi - lo < opt.x_tolerance && std::abs(f_mid) < opt.f_tolerance) break;
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        ++it;
        const double next = 0.5 * (lo + hi);
        if (next == mid) break;
        mid = next;
        f_mid = f(mid);
        if (next <= lo || next >= hi) break; // adjacent doubles
    }
    if (!(hi - lo < opt.x_tolerance) || !(std::abs(f_mid) < opt.f_tolerance)) {
        throw BracketFailure("bisection did not reach tolerance (width " + std::to_string(hi - lo)
                             + ", residual " + std::to_string(f_mid) + ")");
    }
    return {mid, f_mid, it, lo, hi};
}

} // namespace pooltest
