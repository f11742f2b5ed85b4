#pragma once

// Grid checks of every inequality behind the optimal-configuration results.
// Each check reduces to the tightest signed margin over its grid; failures are reported,
// never thrown.

#include "pooltest/auxiliary.hpp"
#include "pooltest/core.hpp"
#include "pooltest/grid.hpp"
#include "pooltest/optimizer.hpp"
#include "pooltest/schemes.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace pooltest::verifier {

struct VerificationReport {
    std::string claim_id;
    std::string claim;
    std::string grid;
    bool passed = false;
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_location = std::numeric_limits<double>::quiet_NaN();
    std::optional<long> sign_changes; ///< only for the p* uniqueness check
};

inline constexpr std::size_t min_grid_points = 10;
inline constexpr double endpoint_inset = 1e-9;
inline constexpr double ungar_tolerance = 1e-12;
inline constexpr double theta_step = 1e-6;

namespace detail {

/// Running minimum; the first location wins ties and a NaN margin sticks.
struct WorstCase {
    double margin = std::numeric_limits<double>::infinity();
    double location = std::numeric_limits<double>::quiet_NaN();

    void update(double m, double at)
    {
        if (std::isnan(margin)) return;
        if (std::isnan(m) || m < margin) {
            margin = m;
            location = at;
        }
    }
};

inline VerificationReport make_report(std::string id, std::string claim, std::string grid, const WorstCase& w,
                                      bool passed)
{
    VerificationReport r;
    r.claim_id = std::move(id);
    r.claim = std::move(claim);
    r.grid = std::move(grid);
    r.worst_margin = w.margin;
    r.worst_location = w.location;
    r.passed = passed;
    return r;
}

inline double brace_theta_slope(double theta, const Prevalence& prev)
{
    return (dorfman_brace(theta + theta_step, prev) - dorfman_brace(theta - theta_step, prev)) / (2.0 * theta_step);
}

} // namespace detail

/// Number of strict sign changes in a sequence (zeros are skipped).
[[nodiscard]] inline long count_sign_changes(const std::vector<double>& values)
{
    long changes = 0;
    int last = 0;
    for (const double v : values) {
        const int s = (v > 0.0) - (v < 0.0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

/// Grid for the g_m checks: log-spaced near 0, linear beyond 0.01, endpoints inset by 1e-9.
[[nodiscard]] inline std::vector<double> g_grid(std::size_t count)
{
    return hybrid_grid(endpoint_inset, 0.01, ungar_cutoff - endpoint_inset, count);
}

[[nodiscard]] inline VerificationReport check_g_one_above(std::size_t count)
{
    detail::WorstCase w;
    for (const double p : g_grid(count)) w.update(log_g(GIndex(1), Prevalence(p)), p);
    return detail::make_report("g1_gt_1", "g_1(p) > 1 (margin: ln g_1)",
                               describe_grid("hybrid-log/linear", endpoint_inset, ungar_cutoff - endpoint_inset, count),
                               w, w.margin > 0.0);
}

[[nodiscard]] inline VerificationReport check_g_minus_one_below(std::size_t count)
{
    detail::WorstCase w;
    for (const double p : g_grid(count)) w.update(-log_g(GIndex(-1), Prevalence(p)), p);
    return detail::make_report("gm1_lt_1", "g_-1(p) < 1 (margin: -ln g_-1)",
                               describe_grid("hybrid-log/linear", endpoint_inset, ungar_cutoff - endpoint_inset, count),
                               w, w.margin > 0.0);
}

/// Sign changes of g_0 - 1 (evaluated as ln g_0) along the g grid.
[[nodiscard]] inline long g0_sign_changes(const std::vector<double>& grid)
{
    std::vector<double> v;
    v.reserve(grid.size());
    for (const double p : grid) v.push_back(log_g(GIndex(0), Prevalence(p)));
    return count_sign_changes(v);
}

[[nodiscard]] inline VerificationReport check_p_star_unique(std::size_t count)
{
    const auto grid = g_grid(count);
    const long changes = g0_sign_changes(grid);
    detail::WorstCase w;
    // location: first grid point past the crossing
    double prev_value = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = log_g(GIndex(0), Prevalence(grid[i]));
        if (i > 0 && (v > 0.0) != (prev_value > 0.0) && std::isnan(w.location)) w.location = grid[i];
        prev_value = v;
    }
    w.margin = 1.0 - std::abs(static_cast<double>(changes - 1));
    auto r = detail::make_report("p_star_unique", "g_0 - 1 changes sign exactly once (margin: 1 - |changes - 1|)",
                                 describe_grid("hybrid-log/linear", endpoint_inset, ungar_cutoff - endpoint_inset, count),
                                 w, changes == 1);
    r.sign_changes = changes;
    return r;
}

[[nodiscard]] inline VerificationReport check_sterrett_gap(std::size_t count)
{
    const double lo = p_star() + 1e-6;
    const double hi = ungar_cutoff - endpoint_inset;
    detail::WorstCase w;
    for (const double p : linear_grid(lo, hi, count)) w.update(sterrett_gap(Prevalence(p)), p);
    return detail::make_report("sterrett_gap_positive",
                               "t^(S)(floor(sqrt(2/p)) - 1, p) - t^(S)(floor(sqrt(2/p)), p) > 0 on (p*, cut-off)",
                               describe_grid("linear", lo, hi, count), w, w.margin > 0.0);
}

[[nodiscard]] inline VerificationReport check_region_margin(std::size_t count)
{
    const double lo = endpoint_inset;
    const double hi = std::sqrt(ungar_cutoff) - endpoint_inset;
    detail::WorstCase w;
    for (const double y : linear_grid(lo, hi, count)) w.update(dorfman_region_margin(y), y);
    return detail::make_report("dorfman_region_positive",
                               "(p, 1/sqrt(p) + 1 - 5p/2) lies in A^(D) (margin over y = sqrt(p))",
                               describe_grid("linear(y)", lo, hi, count), w, w.margin > 0.0);
}

/// h(0, p) h(1, p) < 0 and dh/dtheta < 0 at theta in {0.25, 0.5, 0.75}.
[[nodiscard]] inline VerificationReport check_dorfman_brace(std::size_t count)
{
    detail::WorstCase w;
    for (const double p : g_grid(count)) {
        const Prevalence prev(p);
        double m = -dorfman_brace(0.0, prev) * dorfman_brace(1.0, prev);
        for (const double theta : {0.25, 0.5, 0.75}) m = std::min(m, -detail::brace_theta_slope(theta, prev));
        w.update(m, p);
    }
    return detail::make_report("dorfman_brace_sign_change",
                               "h(0,p) h(1,p) < 0 and theta -> h(theta,p) decreasing",
                               describe_grid("hybrid-log/linear", endpoint_inset, ungar_cutoff - endpoint_inset, count),
                               w, w.margin > 0.0);
}

/// Grid for the optimizer checks: log-spaced over (1e-6, cut-off - 1e-9).
[[nodiscard]] inline std::vector<double> optimizer_grid(std::size_t count)
{
    return log_grid(1e-6, ungar_cutoff - endpoint_inset, count);
}

/// Closed-form and brute-force optima agree. Margin: cheapest non-candidate cost minus optimal cost.
[[nodiscard]] inline VerificationReport check_closed_form(Scheme scheme, std::size_t count)
{
    detail::WorstCase w;
    bool agree = true;
    for (const double p : optimizer_grid(count)) {
        const Prevalence prev(p);
        const auto closed = optimal_group_size_closed_form(scheme, prev);
        const auto brute = optimal_group_size_bruteforce(scheme, prev);
        agree = agree && closed.n_opt == brute.n_opt && closed.t_opt == brute.t_opt;
        double best_outside = std::numeric_limits<double>::infinity();
        for (long n = 1; n <= brute.candidates.last(); ++n) {
            if (!closed.candidates.contains(n)) best_outside = std::min(best_outside, cost_per_item(scheme, n, prev));
        }
        w.update(best_outside - closed.t_opt, p);
    }
    const std::string id = "closed_form_" + std::string(to_string(scheme));
    return detail::make_report(id, "closed-form candidate argmin equals brute-force N_opt for " + std::string(to_string(scheme)),
                               describe_grid("log", 1e-6, ungar_cutoff - endpoint_inset, count), w,
                               agree && w.margin > 0.0);
}

/// Above the Ungar cut-off every scheme has N_opt = 1 and t(N, p) >= 1 for N in [2, 200].
[[nodiscard]] inline VerificationReport check_ungar(std::size_t count)
{
    detail::WorstCase w;
    bool individual = true;
    for (const double p : linear_grid(ungar_cutoff, 0.99, count)) {
        const Prevalence prev(p);
        for (const Scheme s : all_schemes) {
            individual = individual && optimal_group_size_bruteforce(s, prev).n_opt == 1;
            for (long n = 2; n <= 200; ++n) w.update(cost_per_item(s, n, prev) - 1.0, p);
        }
    }
    return detail::make_report("ungar_individual",
                               "p >= (3 - sqrt 5)/2: N_opt = 1 and t >= 1 (tolerance 1e-12)",
                               describe_grid("linear", ungar_cutoff, 0.99, count), w,
                               individual && w.margin >= -ungar_tolerance);
}

/// The Sterrett continuous minimizer decreases strictly in p.
[[nodiscard]] inline VerificationReport check_sterrett_minimizer_monotone(std::size_t count)
{
    detail::WorstCase w;
    const auto grid = optimizer_grid(count);
    double previous = continuous_minimizer(Scheme::S, Prevalence(grid.front())).x;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double x = continuous_minimizer(Scheme::S, Prevalence(grid[i])).x;
        w.update(previous - x, grid[i - 1]);
        previous = x;
    }
    return detail::make_report("sterrett_minimizer_decreasing", "p -> N*^(S)(p) strictly decreasing",
                               describe_grid("log", 1e-6, ungar_cutoff - endpoint_inset, count), w,
                               w.margin > 0.0);
}

/// Runs every check on grids of `grid_points` points; one report per claim.
[[nodiscard]] inline std::vector<VerificationReport> verify_all(std::size_t grid_points)
{
    if (grid_points < min_grid_points) {
        throw DomainError("verify_all needs at least 10 grid points, got " + std::to_string(grid_points));
    }
    std::vector<VerificationReport> reports;
    reports.push_back(check_g_one_above(grid_points));
    reports.push_back(check_g_minus_one_below(grid_points));
    reports.push_back(check_p_star_unique(grid_points));
    reports.push_back(check_sterrett_gap(grid_points));
    reports.push_back(check_region_margin(grid_points));
    reports.push_back(check_dorfman_brace(grid_points));
    for (const Scheme s : all_schemes) reports.push_back(check_closed_form(s, grid_points));
    reports.push_back(check_ungar(grid_points));
    reports.push_back(check_sterrett_minimizer_monotone(grid_points));
    return reports;
}

} // namespace pooltest::verifier
