#pragma once

// Procedural execution of the pooling schemes on concrete defect patterns, plus the
// two oracles built on it: exhaustive enumeration and seeded Monte Carlo.

#include "pooltest/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace pooltest {

/// Defect statuses of the members of one pool, in testing order (true = defective).
class StatusVector {
public:
    explicit StatusVector(std::vector<bool> statuses) : statuses_(std::move(statuses))
    {
        if (statuses_.empty()) throw DomainError("status vector must not be empty");
    }
    StatusVector(std::initializer_list<bool> statuses) : StatusVector(std::vector<bool>(statuses)) {}

    [[nodiscard]] std::size_t size() const noexcept { return statuses_.size(); }
    [[nodiscard]] bool operator[](std::size_t i) const { return statuses_[i]; }
    [[nodiscard]] const std::vector<bool>& values() const noexcept { return statuses_; }

private:
    std::vector<bool> statuses_;
};

namespace detail {

template <class IsBad>
[[nodiscard]] bool any_bad_before_last(std::size_t n, const IsBad& is_bad)
{
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (is_bad(i)) return true;
    }
    return false;
}

/// Number of tests used on a pool of n members; is_bad(i) reports the status of member i.
template <class IsBad>
[[nodiscard]] long count_tests(Scheme scheme, std::size_t n, const IsBad& is_bad)
{
    auto any_bad = [&](std::size_t from) {
        for (std::size_t i = from; i < n; ++i) {
            if (is_bad(i)) return true;
        }
        return false;
    };

    if (n == 1 || !any_bad(0)) return 1;
    const auto nn = static_cast<long>(n);

    switch (scheme) {
    case Scheme::D0:
        return nn + 1;
    case Scheme::D:
        return any_bad_before_last(n, is_bad) ? nn + 1 : nn;
    case Scheme::S: {
        long tests = 0;
        std::size_t start = 0;
        while (start < n) {
            ++tests; // pool test of members [start, n); a single member is just tested
            if (start + 1 == n || !any_bad(start)) break;
            std::size_t i = start;
            for (;;) {
                if (i + 1 == n) {
                    // every earlier member of this positive pool was negative
                    start = n;
                    break;
                }
                ++tests;
                if (is_bad(i)) {
                    start = i + 1;
                    break;
                }
                ++i;
            }
        }
        return tests;
    }
    }
    throw UnsupportedSchemeError("unknown scheme");
}

} // namespace detail

/// Tests spent by `scheme` on one pool with the given statuses (a realization of T).
[[nodiscard]] inline long run_scheme(Scheme scheme, const StatusVector& statuses)
{
    return detail::count_tests(scheme, statuses.size(), [&](std::size_t i) { return statuses[i]; });
}

inline constexpr long max_enumeration_size = 24;

/// E[T] by summing over all 2^n defect patterns.
///
/// Patterns are the integers 0..2^n-1 with bit i giving member i. Test counts are first
/// tallied per (number of defectives, tests) and weighted afterwards, so the floating
/// point work is O(n^2) regardless of 2^n.
[[nodiscard]] inline double exact_expected_tests(Scheme scheme, long n, const Prevalence& prev)
{
    if (n < 1) throw DomainError("group size must be >= 1, got " + std::to_string(n));
    if (n > max_enumeration_size) {
        throw ResourceLimitError("enumeration is capped at n = 24, got " + std::to_string(n));
    }
    const auto size = static_cast<std::size_t>(n);
    const std::size_t max_tests = 2 * size + 1;
    std::vector<std::uint64_t> tally((size + 1) * (max_tests + 1), 0);

    const std::uint64_t patterns = std::uint64_t{1} << size;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        const long t = detail::count_tests(scheme, size, [mask](std::size_t i) { return ((mask >> i) & 1U) != 0; });
        const auto bad = static_cast<std::size_t>(std::popcount(mask));
        ++tally[bad * (max_tests + 1) + static_cast<std::size_t>(t)];
    }

    const bool log_space = prev.p() < 1e-4;
    const double log_p = std::log(prev.p());
    double expected = 0.0;
    for (std::size_t bad = 0; bad <= size; ++bad) {
        const auto good = static_cast<double>(size - bad);
        const double weight = log_space
            ? std::exp(static_cast<double>(bad) * log_p + good * prev.log_q())
            : std::pow(prev.p(), static_cast<double>(bad)) * prev.q_pow(good);
        std::uint64_t weighted_tests = 0;
        for (std::size_t t = 1; t <= max_tests; ++t) {
            weighted_tests += tally[bad * (max_tests + 1) + t] * t;
        }
        expected += weight * static_cast<double>(weighted_tests);
    }
    return expected;
}

struct SimulationEstimate {
    double mean;      ///< estimated tests per item
    double std_error; ///< sample standard deviation of T/N over sqrt(replications)
    long replications;
    std::uint64_t seed;

    friend bool operator==(const SimulationEstimate&, const SimulationEstimate&) = default;
};

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of the generator used for replication `index`: splitmix64(master + golden * (index + 1)).
[[nodiscard]] constexpr std::uint64_t replication_seed(std::uint64_t master, std::uint64_t index) noexcept
{
    return splitmix64(master + 0x9E3779B97F4A7C15ULL * (index + 1));
}

namespace detail {

/// One replication: fresh mt19937_64, members drawn bad iff a 53-bit uniform falls below p.
[[nodiscard]] inline long simulate_one(Scheme scheme, std::size_t n, double p, std::uint64_t seed,
                                       std::vector<bool>& scratch)
{
    std::mt19937_64 gen(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        scratch[i] = u < p;
    }
    return count_tests(scheme, n, [&](std::size_t i) { return static_cast<bool>(scratch[i]); });
}

} // namespace detail

/// Monte Carlo estimate of t = E[T]/N.
///
/// Replication r uses std::mt19937_64 seeded with replication_seed(seed, r). Sums of T and
/// T^2 are exact integers, so the estimate does not depend on `threads`.
[[nodiscard]] inline SimulationEstimate simulate_expected_tests(Scheme scheme, long n, const Prevalence& prev,
                                                                long replications, std::uint64_t seed,
                                                                unsigned threads = 1)
{
    if (n < 1) throw DomainError("group size must be >= 1, got " + std::to_string(n));
    if (replications < 1) {
        throw DomainError("replications must be >= 1, got " + std::to_string(replications));
    }
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(replications)));
    const auto size = static_cast<std::size_t>(n);
    const auto reps = static_cast<std::uint64_t>(replications);

    struct Partial {
        std::uint64_t sum = 0;
        unsigned __int128 sum_sq = 0;
    };
    std::vector<Partial> partials(threads);

    auto work = [&](unsigned w) {
        std::vector<bool> scratch(size);
        const std::uint64_t lo = reps * w / threads;
        const std::uint64_t hi = reps * (w + 1) / threads;
        Partial acc;
        for (std::uint64_t r = lo; r < hi; ++r) {
            const auto t = static_cast<std::uint64_t>(
                detail::simulate_one(scheme, size, prev.p(), replication_seed(seed, r), scratch));
            acc.sum += t;
            acc.sum_sq += static_cast<unsigned __int128>(t) * t;
        }
        partials[w] = acc;
    };

    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    }

    std::uint64_t sum = 0;
    unsigned __int128 sum_sq = 0;
    for (const auto& part : partials) {
        sum += part.sum;
        sum_sq += part.sum_sq;
    }

    const auto r = static_cast<double>(reps);
    const auto nn = static_cast<double>(n);
    const double mean = static_cast<double>(sum) / r / nn;
    double std_error = 0.0;
    if (reps > 1) {
        // R * sum(T^2) - (sum T)^2 is exact in 128-bit arithmetic
        const unsigned __int128 centered = static_cast<unsigned __int128>(reps) * sum_sq
            - static_cast<unsigned __int128>(sum) * sum;
        const double variance_t = static_cast<double>(centered) / (r * (r - 1.0));
        std_error = std::sqrt(variance_t) / nn / std::sqrt(r);
    }
    return SimulationEstimate{mean, std_error, replications, seed};
}

} // namespace pooltest
