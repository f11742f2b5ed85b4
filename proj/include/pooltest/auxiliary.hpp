#pragma once

// Auxiliary functions that certify where the optimal group sizes live.
//
// Sterrett side: g_m(p), m in {-1, 0, 1}, compares the fixed-point map of dt/dN = 0 with
// sqrt(2/p) + m. g_1 > 1 and g_-1 < 1 place the continuous minimizer in
// [sqrt(2/p) - 1, sqrt(2/p) + 1]; g_0 = 1 has the single root p*.
//
// Dorfman side: the region margin shows (p, 1/sqrt(p) + 1 - 5p/2) has t^(D) < 1, and the
// brace function h(theta, p) changes sign across [1/sqrt(p) - p, 1/sqrt(p) + 1 - 5p/2].

#include "pooltest/core.hpp"
#include "pooltest/root_finding.hpp"
#include "pooltest/schemes.hpp"

#include <cmath>
#include <string>

namespace pooltest::verifier {

/// Index m of g_m.
class GIndex {
public:
    explicit GIndex(int m) : m_(m)
    {
        if (m < -1 || m > 1) throw DomainError("g index must be -1, 0 or 1, got " + std::to_string(m));
    }
    [[nodiscard]] int value() const noexcept { return m_; }

private:
    int m_;
};

namespace detail {

inline void require_below_cutoff(const Prevalence& prev, const char* what)
{
    if (!prev.below_ungar_cutoff()) {
        throw DomainError(std::string(what) + ": p must lie below (3 - sqrt 5)/2, got " + std::to_string(prev.p()));
    }
}

} // namespace detail

/// ln g_m(p), assembled from log1p terms.
///
/// ln g_m = -ln q + sqrt(p/2) [ ln(1 - 2pq) - (1 + m) ln q - ln(1 - ln q sqrt(2/p) (1 + m sqrt(p/2))) ]
[[nodiscard]] inline double log_g(GIndex m, const Prevalence& prev)
{
    detail::require_below_cutoff(prev, "g_m");
    const double p = prev.p();
    const double lq = prev.log_q();
    const double mm = m.value();
    const double root_half_p = std::sqrt(0.5 * p);
    const double inner = -lq * std::sqrt(2.0 / p) * (1.0 + mm * root_half_p);
    const double bracket = std::log1p(-2.0 * p * prev.q()) - (1.0 + mm) * lq - std::log1p(inner);
    return -lq + root_half_p * bracket;
}

/// g_m(p) = (1/q) [ (1 - 2pq) / ( q^(1+m) (1 - ln q sqrt(2/p) (1 + m sqrt(p/2))) ) ]^sqrt(p/2)
[[nodiscard]] inline double g(GIndex m, const Prevalence& prev)
{
    return std::exp(log_g(m, prev));
}

/// The unique p in (0, (3 - sqrt 5)/2) with g_0(p) = 1, by bisection on [0.05, 0.3].
[[nodiscard]] inline double find_p_star()
{
    const auto g0_minus_one = [](double p) { return g(GIndex(0), Prevalence(p)) - 1.0; };
    try {
        return bisect(g0_minus_one, 0.05, 0.3, {.x_tolerance = 1e-14, .f_tolerance = 1e-13, .max_iterations = 200}).x;
    } catch (const BracketFailure& e) {
        throw ClaimViolation(std::string("g_0 - 1 has no isolated root on [0.05, 0.3]: ") + e.what());
    }
}

/// find_p_star(), computed once per process.
[[nodiscard]] inline double p_star()
{
    static const double value = find_p_star();
    return value;
}

/// f(p) = t^(S)(k - 1, p) - t^(S)(k, p) with k = floor(sqrt(2/p)), on (p*, (3 - sqrt 5)/2).
///
/// Left-continuous with a jump at p = 2/9, where k drops from 3 to 2.
[[nodiscard]] inline double sterrett_gap(const Prevalence& prev)
{
    const double p = prev.p();
    if (!(p > p_star() && p < ungar_cutoff)) {
        throw DomainError("sterrett_gap: p must lie in (p*, (3 - sqrt 5)/2), got " + std::to_string(p));
    }
    const long k = floor_sqrt_ratio(2.0, p);
    return cost_per_item(Scheme::S, k - 1, prev) - cost_per_item(Scheme::S, k, prev);
}

/// Margin of t^(D) < 1 along N = 1/y + 1 - 5y^2/2, with y = sqrt(p):
///   (1/y - 5y^2/2) ln(1 - y^2) + ln(1 + (1 - y^2)(1/y - 5y^2/2)).
/// Positive iff the point lies in A^(D).
[[nodiscard]] inline double dorfman_region_margin(double y)
{
    if (!(y > 0.0 && y < std::sqrt(ungar_cutoff))) {
        throw DomainError("dorfman_region_margin: y must lie in (0, sqrt((3 - sqrt 5)/2)), got " + std::to_string(y));
    }
    const double y2 = y * y;
    const double x = 1.0 / y - 2.5 * y2;
    return x * std::log1p(-y2) + std::log1p((1.0 - y2) * x);
}

/// Lower and upper bracing curves of the Dorfman continuous minimizer.
[[nodiscard]] inline double dorfman_brace_lo(double p) { return 1.0 / std::sqrt(p) - p; }
[[nodiscard]] inline double dorfman_brace_hi(double p) { return 1.0 / std::sqrt(p) + 1.0 - 2.5 * p; }

/// N(theta) = (1/sqrt p - p) + theta (1 - 3p/2), sweeping the brace as theta goes 0 -> 1.
[[nodiscard]] inline double brace_point(double theta, double p)
{
    return dorfman_brace_lo(p) + theta * (1.0 - 1.5 * p);
}

/// The map whose fixed points are the zeros of dt^(D)/dN:
///   -(q/p) (N^2 + (1/ln q) (1/q)^N) + 1/ln q.
[[nodiscard]] inline double dorfman_fixed_point_map(double n, const Prevalence& prev)
{
    const double lq = prev.log_q();
    return -(prev.q() / prev.p()) * (n * n + std::exp(-n * lq) / lq) + 1.0 / lq;
}

/// h(theta, p) = p^(3/2) (f(N(theta), p) - N(theta)).
[[nodiscard]] inline double dorfman_brace(double theta, const Prevalence& prev)
{
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw DomainError("dorfman_brace: theta must lie in [0, 1], got " + std::to_string(theta));
    }
    detail::require_below_cutoff(prev, "dorfman_brace");
    const double p = prev.p();
    const double n = brace_point(theta, p);
    return p * std::sqrt(p) * (dorfman_fixed_point_map(n, prev) - n);
}

/// True iff p < (3 - sqrt 5)/2 and t^(D)(n, p) < 1 for real n.
///
/// Evaluated as (n - 1) ln q + ln(1 + q (n - 1)) > 0, which is equivalent and exact at n = 1.
[[nodiscard]] inline bool in_region_A_D(double n, const Prevalence& prev)
{
    if (!(n >= 1.0)) throw DomainError("in_region_A_D: n must be >= 1, got " + std::to_string(n));
    if (!prev.below_ungar_cutoff()) return false;
    const double x = n - 1.0;
    return x * prev.log_q() + std::log1p(prev.q() * x) > 0.0;
}

} // namespace pooltest::verifier
