// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "pooltest/auxiliary.hpp"
#include "pooltest/executor.hpp"
#include "pooltest/grid.hpp"
#include "pooltest/optimizer.hpp"
#include "pooltest/schemes.hpp"
#include "pooltest/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace pooltest;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const double cut = ungar_cutoff;
const double cut_minus = ungar_cutoff - 1e-9;

std::vector<double> proposition_grid()
{
    return log_grid(1e-6, cut_minus, 500);
}

Outcome oracle_equivalence()
{
    double worst = 0.0;
    for (const Scheme s : all_schemes) {
        for (long n = 1; n <= 12; ++n) {
            for (const double p : {0.01, 0.05, 0.1, 0.2, 0.3}) {
                const Prevalence prev(p);
                const double diff = std::abs(exact_expected_tests(s, n, prev) - static_cast<double>(n) * cost_per_item(s, n, prev));
                worst = std::max(worst, diff);
            }
        }
    }
    return {worst <= 1e-12, fmt("max |E T - N t| = %.3e (tol 1e-12)", worst)};
}

Outcome p_star_recovery()
{
    const double ps = verifier::find_p_star();
    return {std::abs(ps - 0.1711) <= 5e-4, fmt("p* = %.12f (target 0.1711 +- 5e-4)", ps)};
}

Outcome gap_values()
{
    const double at = verifier::sterrett_gap(Prevalence(2.0 / 9.0));
    const double end = verifier::sterrett_gap(Prevalence(cut_minus));
    const bool ok = std::abs(at - 0.018976) <= 1e-5 && std::abs(end) <= 1e-6;
    return {ok, fmt("f(2/9) = %.9f (0.018976 +- 1e-5), f(cut - 1e-9) = %.3e (0 +- 1e-6)", at, end)};
}

Outcome limit_values()
{
    const double gm1 = verifier::g(verifier::GIndex(-1), Prevalence(cut_minus));
    const double margin = verifier::dorfman_region_margin(std::sqrt(cut) - 1e-9);
    const bool ok = std::abs(gm1 - 0.9912) <= 1e-3 && std::abs(margin - 0.024) <= 1e-3;
    return {ok, fmt("g_-1(cut - 1e-9) = %.6f (0.9912 +- 1e-3), region margin = %.6f (0.024 +- 1e-3)", gm1, margin)};
}

Outcome proposition_dorfman()
{
    long misses = 0;
    double first_miss = 0.0;
    for (const double p : proposition_grid()) {
        const long k = floor_sqrt_ratio(1.0, p);
        const long n = optimal_group_size_bruteforce(Scheme::D, Prevalence(p)).n_opt;
        if (n != k && n != k + 1) {
            if (misses++ == 0) first_miss = p;
        }
    }
    return {misses == 0, fmt("%ld of 500 grid points outside {k, k+1}%s", misses,
                             misses ? fmt(" (first at p = %.6g)", first_miss).c_str() : "")};
}

Outcome proposition_sterrett()
{
    const double ps = verifier::p_star();
    long misses = 0;
    long three_point = 0;
    for (const double p : proposition_grid()) {
        const long k = floor_sqrt_ratio(2.0, p);
        const long n = optimal_group_size_bruteforce(Scheme::S, Prevalence(p)).n_opt;
        const bool ok = p > ps ? (n == k || n == k + 1) : (n >= k && n <= k + 2);
        if (p <= ps) ++three_point;
        if (!ok) ++misses;
    }
    return {misses == 0, fmt("%ld of 500 grid points outside their set (%ld points with p <= p*)", misses, three_point)};
}

Outcome samuels()
{
    long misses = 0;
    long checked = 0;
    for (const double p : proposition_grid()) {
        if (p >= samuels_cutoff) continue;
        ++checked;
        const long k = floor_sqrt_ratio(1.0, p);
        const long n = optimal_group_size_bruteforce(Scheme::D0, Prevalence(p)).n_opt;
        if (n != k + 1 && n != k + 2) ++misses;
    }
    long individual_misses = 0;
    for (const double p : linear_grid(samuels_cutoff, 0.99, 20)) {
        if (optimal_group_size_bruteforce(Scheme::D0, Prevalence(p)).n_opt != 1) ++individual_misses;
    }
    return {misses == 0 && individual_misses == 0,
            fmt("%ld of %ld small-p points outside {k+1, k+2}; %ld of 20 high-p points with N_opt != 1", misses, checked,
                individual_misses)};
}

Outcome ungar()
{
    long not_one = 0;
    double worst = INFINITY;
    for (const double p : linear_grid(cut, 0.99, 20)) {
        const Prevalence prev(p);
        for (const Scheme s : {Scheme::D, Scheme::S}) {
            if (optimal_group_size_bruteforce(s, prev).n_opt != 1) ++not_one;
        }
        for (const Scheme s : all_schemes) {
            for (long n = 2; n <= 200; ++n) worst = std::min(worst, cost_per_item(s, n, prev) - 1.0);
        }
    }
    return {not_one == 0 && worst >= -verifier::ungar_tolerance,
            fmt("%ld optima != 1; min over N in [2,200] of t - 1 = %.3e (>= -1e-12)", not_one, worst)};
}

Outcome asymptotic_ratio()
{
    const double r = optimal_cost_ratio(Prevalence(1e-5));
    const double rel = std::abs(r - std::sqrt(2.0)) / std::sqrt(2.0);
    return {rel <= 0.05, fmt("ratio(1e-5) = %.6f, |ratio/sqrt2 - 1| = %.4f (<= 0.05)", r, rel)};
}

Outcome bracing()
{
    long misses = 0;
    double first = 0.0;
    for (const double p : proposition_grid()) {
        const Prevalence prev(p);
        const double xd = continuous_minimizer(Scheme::D, prev).x;
        bool ok = xd > verifier::dorfman_brace_lo(p) && xd < verifier::dorfman_brace_hi(p);
        if (p < 0.3) ok = ok && xd > 1.0 / std::sqrt(p);
        const double xs = continuous_minimizer(Scheme::S, prev).x;
        const double c = std::sqrt(2.0 / p);
        ok = ok && xs >= c - 1.0 && xs <= c + 1.0;
        if (!ok && misses++ == 0) first = p;
    }
    return {misses == 0, fmt("%ld of 500 grid points outside the brackets%s", misses,
                             misses ? fmt(" (first at %.6g)", first).c_str() : "")};
}

std::string render(const SimulationEstimate& e)
{
    return fmt("%.17g %.17g %ld %llu", e.mean, e.std_error, e.replications, static_cast<unsigned long long>(e.seed));
}

Outcome monte_carlo()
{
    struct Case {
        Scheme scheme;
        long n;
        double p;
    };
    const Case cases[] = {{Scheme::D0, 5, 0.05}, {Scheme::D0, 10, 0.02}, {Scheme::D, 2, 0.1},  {Scheme::D, 10, 0.05},
                          {Scheme::D, 20, 0.01}, {Scheme::D, 4, 0.3},    {Scheme::S, 3, 0.2},  {Scheme::S, 8, 0.1},
                          {Scheme::S, 15, 0.01}, {Scheme::S, 30, 0.005}};
    constexpr long reps = 200000;
    constexpr std::uint64_t seed = 20210101;
    long off = 0;
    long nondeterministic = 0;
    double worst_z = 0.0;
    for (const auto& c : cases) {
        const Prevalence prev(c.p);
        const auto one = simulate_expected_tests(c.scheme, c.n, prev, reps, seed, 1);
        const auto two = simulate_expected_tests(c.scheme, c.n, prev, reps, seed, 2);
        const auto eight = simulate_expected_tests(c.scheme, c.n, prev, reps, seed, 8);
        if (render(one) != render(two) || render(one) != render(eight)) ++nondeterministic;
        const double z = std::abs(one.mean - cost_per_item(c.scheme, c.n, prev)) / one.std_error;
        worst_z = std::max(worst_z, z);
        if (!(z < 4.0)) ++off;
    }
    return {off == 0 && nondeterministic == 0,
            fmt("worst |mean - t| / se = %.3f (< 4); %ld of 10 cases differ across 1/2/8 threads", worst_z,
                nondeterministic)};
}

Outcome verification_suite()
{
    const auto reports = verifier::verify_all(500);
    long failed = 0;
    std::string names;
    long changes = -1;
    for (const auto& r : reports) {
        if (!r.passed) {
            ++failed;
            names += " " + r.claim_id;
        }
        if (r.claim_id == "p_star_unique") changes = r.sign_changes.value_or(-1);
    }
    return {failed == 0 && changes == 1 && reports.size() == 11,
            fmt("%zu reports, %ld failed%s; g_0 - 1 sign changes = %ld", reports.size(), failed, names.c_str(), changes)};
}

} // namespace

int main()
{
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"oracle equivalence", oracle_equivalence},
        {"p* recovery", p_star_recovery},
        {"gap values", gap_values},
        {"limit values", limit_values},
        {"modified Dorfman optimum set", proposition_dorfman},
        {"Sterrett optimum set", proposition_sterrett},
        {"original Dorfman optimum set", samuels},
        {"individual testing above cut-off", ungar},
        {"asymptotic cost ratio", asymptotic_ratio},
        {"bracing intervals", bracing},
        {"Monte Carlo agreement and determinism", monte_carlo},
        {"full verification", verification_suite},
    };

    int failures = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %2d %-40s %s (%.2fs)\n", o.passed ? "PASS" : "FAIL", index, c.name, o.detail.c_str(), secs);
        if (!o.passed) ++failures;
    }
    std::printf("%d of %d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
