#pragma once

// Closed-form expected cost per item for the three pooling schemes.
//
// With N items per pool and T the random number of tests spent on the pool,
// the cost per item is t = E[T] / N:
//
//   D0:  t = 1 - q^N + 1/N
//   D:   t = 1 - q^N + (1 - p q^(N-1)) / N
//   S:   t = 2 - q + (2q - (1 - q^(N+1)) / p) / N
//
// N = 1 means individual testing and costs exactly one test for every scheme.
// The D and S formulas already give 1 there; D0 would give 1 + p and is special-cased.

#include "pooltest/core.hpp"

#include <array>
#include <cmath>
#include <string>

namespace pooltest {

struct CostPoint {
    Scheme scheme;
    double n;
    Prevalence p;
    double t;
};

namespace detail {

inline void require_group_size(double n)
{
    if (!(n >= 1.0)) {
        throw DomainError("group size must be >= 1, got " + std::to_string(n));
    }
}

} // namespace detail

/// Real-N extension of the cost formulas. Used by derivative and root-finding code only.
[[nodiscard]] inline double cost_per_item_real(Scheme scheme, double n, const Prevalence& prev)
{
    detail::require_group_size(n);
    const double p = prev.p();
    switch (scheme) {
    case Scheme::D0:
        return prev.one_minus_q_pow(n) + 1.0 / n;
    case Scheme::D:
        return prev.one_minus_q_pow(n) + (1.0 - p * prev.q_pow(n - 1.0)) / n;
    case Scheme::S:
        return 2.0 - prev.q() + (2.0 * prev.q() - prev.one_minus_q_pow(n + 1.0) / p) / n;
    }
    throw UnsupportedSchemeError("unknown scheme");
}

/// Expected number of tests per item for an integer group size.
[[nodiscard]] inline double cost_per_item(Scheme scheme, long n, const Prevalence& prev)
{
    if (n < 1) {
        throw DomainError("group size must be >= 1, got " + std::to_string(n));
    }
    if (n == 1) return 1.0;
    return cost_per_item_real(scheme, static_cast<double>(n), prev);
}

[[nodiscard]] inline CostPoint cost_point(Scheme scheme, long n, const Prevalence& prev)
{
    return CostPoint{scheme, static_cast<double>(n), prev, cost_per_item(scheme, n, prev)};
}

struct TestCountAtom {
    long value;
    double prob;
};

/// Exact law of the number of tests T under the modified Dorfman scheme.
///
/// Three atoms: T = 1 (pool negative), T = N (first N-1 negative, last inferred),
/// T = N + 1 (everything else).
[[nodiscard]] inline std::array<TestCountAtom, 3>
tests_distribution_modified_dorfman(long n, const Prevalence& prev)
{
    if (n < 2) {
        throw DomainError("the modified Dorfman test-count law needs n >= 2, got " + std::to_string(n));
    }
    const auto nn = static_cast<double>(n);
    const double all_negative = prev.q_pow(nn);
    const double last_only = prev.p() * prev.q_pow(nn - 1.0);
    // 1 - q^N - p q^(N-1) = 1 - q^(N-1)
    const double rest = prev.one_minus_q_pow(nn - 1.0);
    return {{{1, all_negative}, {n, last_only}, {n + 1, rest}}};
}

/// dt/dN with N real, for the D and S schemes.
///
/// For S the zero of this derivative is the fixed point of
/// h(N) = 1/ln q - ((1 - 2pq)/ln q) (1/q)^(N+1).
[[nodiscard]] inline double cost_derivative_in_n(Scheme scheme, double n, const Prevalence& prev)
{
    detail::require_group_size(n);
    const double p = prev.p();
    const double lq = prev.log_q();
    switch (scheme) {
    case Scheme::D: {
        const double qn = prev.q_pow(n);
        const double qn1 = prev.q_pow(n - 1.0);
        return -lq * qn - 1.0 / (n * n) - p * qn1 * (lq / n - 1.0 / (n * n));
    }
    case Scheme::S: {
        const double qn1 = prev.q_pow(n + 1.0);
        const double tail = 2.0 * prev.q() - prev.one_minus_q_pow(n + 1.0) / p;
        return (lq * qn1 / p) / n - tail / (n * n);
    }
    case Scheme::D0:
        break;
    }
    throw UnsupportedSchemeError("cost_derivative_in_n supports only the D and S schemes");
}

} // namespace pooltest
