#pragma once

// Optimal group size three ways:
//   brute force     scan of 1..n_max (the oracle),
//   closed form     argmin over a two- or three-point candidate set,
//   continuous      bisection for the zero of dt/dN inside its certified bracket.

#include "pooltest/auxiliary.hpp"
#include "pooltest/core.hpp"
#include "pooltest/root_finding.hpp"
#include "pooltest/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace pooltest {

/// Candidate group sizes: either the contiguous range [first, last] or an explicit list.
class CandidateSet {
public:
    static CandidateSet range(long first, long last)
    {
        if (first < 1 || last < first) throw DomainError("candidate range must satisfy 1 <= first <= last");
        CandidateSet c;
        c.first_ = first;
        c.last_ = last;
        return c;
    }

    static CandidateSet of(std::vector<long> values)
    {
        if (values.empty()) throw DomainError("candidate set must not be empty");
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        if (values.front() < 1) throw DomainError("candidates must be >= 1");
        CandidateSet c;
        c.first_ = values.front();
        c.last_ = values.back();
        c.list_ = std::move(values);
        return c;
    }

    [[nodiscard]] bool contiguous() const noexcept { return list_.empty(); }
    [[nodiscard]] long first() const noexcept { return first_; }
    [[nodiscard]] long last() const noexcept { return last_; }

    [[nodiscard]] bool contains(long n) const
    {
        if (contiguous()) return n >= first_ && n <= last_;
        return std::binary_search(list_.begin(), list_.end(), n);
    }

    [[nodiscard]] std::vector<long> values() const
    {
        if (!contiguous()) return list_;
        std::vector<long> v;
        v.reserve(static_cast<std::size_t>(last_ - first_ + 1));
        for (long n = first_; n <= last_; ++n) v.push_back(n);
        return v;
    }

    /// "10,11" for explicit sets, "1..64" for ranges.
    [[nodiscard]] std::string to_string() const
    {
        if (contiguous()) return std::to_string(first_) + ".." + std::to_string(last_);
        std::string s;
        for (const long v : list_) {
            if (!s.empty()) s += ',';
            s += std::to_string(v);
        }
        return s;
    }

private:
    CandidateSet() = default;
    long first_ = 1;
    long last_ = 1;
    std::vector<long> list_;
};

enum class OptimizationMethod { brute_force, closed_form };

[[nodiscard]] inline std::string_view to_string(OptimizationMethod m) noexcept
{
    return m == OptimizationMethod::brute_force ? "brute_force" : "closed_form";
}

struct OptimalConfig {
    Scheme scheme;
    Prevalence p;
    long n_opt;
    double t_opt;
    CandidateSet candidates;
    OptimizationMethod method;
};

/// Default brute-force cap: max(64, ceil(4 sqrt(2/p))).
[[nodiscard]] inline long default_search_cap(const Prevalence& prev)
{
    return std::max(64L, static_cast<long>(std::ceil(4.0 * std::sqrt(2.0 / prev.p()))));
}

namespace detail {

/// Smallest minimizer of the cost over the given sizes; ties go to the smaller N.
template <class Range>
[[nodiscard]] std::pair<long, double> argmin_cost(Scheme scheme, const Prevalence& prev, const Range& sizes)
{
    long best_n = 0;
    double best_t = 0.0;
    for (const long n : sizes) {
        const double t = cost_per_item(scheme, n, prev);
        if (best_n == 0 || t < best_t) {
            best_n = n;
            best_t = t;
        }
    }
    return {best_n, best_t};
}

} // namespace detail

/// Exhaustive scan of N = 1..n_max. Throws if the minimizer sits on the cap.
[[nodiscard]] inline OptimalConfig optimal_group_size_bruteforce(Scheme scheme, const Prevalence& prev,
                                                                 std::optional<long> n_max = std::nullopt)
{
    const long cap = n_max.value_or(default_search_cap(prev));
    if (cap < 1) throw DomainError("n_max must be >= 1, got " + std::to_string(cap));
    long best_n = 1;
    double best_t = cost_per_item(scheme, 1, prev);
    for (long n = 2; n <= cap; ++n) {
        const double t = cost_per_item(scheme, n, prev);
        if (t < best_t) {
            best_n = n;
            best_t = t;
        }
    }
    if (cap > 1 && best_n == cap) {
        throw DomainError("brute-force cap n_max = " + std::to_string(cap) + " is binding; raise it");
    }
    return OptimalConfig{scheme, prev, best_n, best_t, CandidateSet::range(1, cap), OptimizationMethod::brute_force};
}

/// The closed-form candidate set for `scheme` at `prev`.
///
/// D:  {k, k+1} with k = floor(sqrt(1/p)).
/// D0: {k+1, k+2}, or {1} when p >= 1 - (1/3)^(1/3).
/// S:  {k, k+1} for p > p*, {k, k+1, k+2} for p <= p*, with k = floor(sqrt(2/p)).
/// All schemes collapse to {1} at p >= (3 - sqrt 5)/2.
[[nodiscard]] inline CandidateSet closed_form_candidates(Scheme scheme, const Prevalence& prev,
                                                         std::optional<double> p_star_value = std::nullopt)
{
    const double p = prev.p();
    if (p >= ungar_cutoff) return CandidateSet::of({1});
    switch (scheme) {
    case Scheme::D0: {
        if (p >= samuels_cutoff) return CandidateSet::of({1});
        const long k = floor_sqrt_ratio(1.0, p);
        return CandidateSet::of({k + 1, k + 2});
    }
    case Scheme::D: {
        const long k = floor_sqrt_ratio(1.0, p);
        return CandidateSet::of({k, k + 1});
    }
    case Scheme::S: {
        const long k = floor_sqrt_ratio(2.0, p);
        const double cut = p_star_value.value_or(verifier::p_star());
        if (p > cut) return CandidateSet::of({k, k + 1});
        return CandidateSet::of({k, k + 1, k + 2});
    }
    }
    throw UnsupportedSchemeError("unknown scheme");
}

/// Argmin of the cost over the closed-form candidate set. p* may be injected for reproducibility.
[[nodiscard]] inline OptimalConfig optimal_group_size_closed_form(Scheme scheme, const Prevalence& prev,
                                                                  std::optional<double> p_star_value = std::nullopt)
{
    auto candidates = closed_form_candidates(scheme, prev, p_star_value);
    const auto [n, t] = detail::argmin_cost(scheme, prev, candidates.values());
    return OptimalConfig{scheme, prev, n, t, std::move(candidates), OptimizationMethod::closed_form};
}

/// Bracket that must contain the continuous minimizer N*.
///   S: [max(1, sqrt(2/p) - 1), sqrt(2/p) + 1]
///   D: [1/sqrt(p) - p, 1/sqrt(p) + 1 - 5p/2]
[[nodiscard]] inline std::pair<double, double> continuous_minimizer_bracket(Scheme scheme, const Prevalence& prev)
{
    const double p = prev.p();
    switch (scheme) {
    case Scheme::S: {
        const double c = std::sqrt(2.0 / p);
        return {std::max(1.0, c - 1.0), c + 1.0};
    }
    case Scheme::D:
        return {verifier::dorfman_brace_lo(p), verifier::dorfman_brace_hi(p)};
    case Scheme::D0:
        break;
    }
    throw UnsupportedSchemeError("continuous minimizer supports only the D and S schemes");
}

/// Zero of dt/dN inside the certified bracket, by bisection to width and residual < 1e-10.
[[nodiscard]] inline RootFindResult continuous_minimizer(Scheme scheme, const Prevalence& prev)
{
    if (scheme == Scheme::D0) {
        throw UnsupportedSchemeError("continuous minimizer supports only the D and S schemes");
    }
    if (!prev.below_ungar_cutoff()) {
        throw DomainError("continuous minimizer needs p < (3 - sqrt 5)/2, got " + std::to_string(prev.p()));
    }
    const auto [lo, hi] = continuous_minimizer_bracket(scheme, prev);
    const auto derivative = [&](double n) { return cost_derivative_in_n(scheme, n, prev); };
    return bisect(derivative, lo, hi, {.x_tolerance = 1e-10, .f_tolerance = 1e-10, .max_iterations = 200});
}

/// t^(D)(N_opt^(D), p) / t^(S)(N_opt^(S), p) with brute-force optima; tends to sqrt 2 as p -> 0.
[[nodiscard]] inline double optimal_cost_ratio(const Prevalence& prev)
{
    if (!prev.below_ungar_cutoff()) {
        throw DomainError("optimal_cost_ratio needs p < (3 - sqrt 5)/2, got " + std::to_string(prev.p()));
    }
    return optimal_group_size_bruteforce(Scheme::D, prev).t_opt / optimal_group_size_bruteforce(Scheme::S, prev).t_opt;
}

} // namespace pooltest
