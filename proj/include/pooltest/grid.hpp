#pragma once

#include "pooltest/core.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace pooltest {

/// `count` points from lo to hi inclusive, equally spaced.
[[nodiscard]] inline std::vector<double> linear_grid(double lo, double hi, std::size_t count)
{
    if (count < 2 || !(lo < hi)) throw DomainError("linear_grid needs count >= 2 and lo < hi");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    g.back() = hi;
    return g;
}

/// `count` points from lo to hi inclusive, equally spaced in log.
[[nodiscard]] inline std::vector<double> log_grid(double lo, double hi, std::size_t count)
{
    if (count < 2 || !(lo > 0.0 && lo < hi)) throw DomainError("log_grid needs count >= 2 and 0 < lo < hi");
    const double a = std::log(lo);
    const double b = std::log(hi);
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) {
        g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

/// `count` points strictly inside (lo, hi): lo + (hi - lo) k / (count + 1), k = 1..count.
[[nodiscard]] inline std::vector<double> interior_grid(double lo, double hi, std::size_t count)
{
    if (count < 1 || !(lo < hi)) throw DomainError("interior_grid needs count >= 1 and lo < hi");
    std::vector<double> g(count);
    for (std::size_t k = 1; k <= count; ++k) {
        g[k - 1] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count + 1);
    }
    return g;
}

/// Log-spaced on [lo, knee], linear on (knee, hi]; half the points each.
[[nodiscard]] inline std::vector<double> hybrid_grid(double lo, double knee, double hi, std::size_t count)
{
    if (count < 4 || !(lo < knee && knee < hi)) throw DomainError("hybrid_grid needs count >= 4 and lo < knee < hi");
    const std::size_t n_log = count / 2;
    std::vector<double> g = log_grid(lo, knee, n_log);
    const auto lin = linear_grid(knee, hi, count - n_log + 1);
    g.insert(g.end(), lin.begin() + 1, lin.end());
    return g;
}

[[nodiscard]] inline std::string describe_grid(const std::string& kind, double lo, double hi, std::size_t count)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s [%.10g, %.10g] n=%zu", kind.c_str(), lo, hi, count);
    return buf;
}

} // namespace pooltest
