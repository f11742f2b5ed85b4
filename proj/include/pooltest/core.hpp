#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pooltest {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class UnsupportedSchemeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Work requested exceeds a hard cap (e.g. 2^n enumeration).
class ResourceLimitError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A root bracket without a sign change, or a root finder that did not converge.
class BracketFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerically checked claim turned out false where it must hold.
class ClaimViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Prevalence above which no pooling scheme beats individual testing: (3 - sqrt 5) / 2.
inline const double ungar_cutoff = (3.0 - std::sqrt(5.0)) / 2.0;

/// Prevalence above which the original Dorfman scheme is optimal at N = 1: 1 - (1/3)^(1/3).
inline const double samuels_cutoff = 1.0 - std::cbrt(1.0 / 3.0);

/// Defect probability p together with q = 1 - p and ln q.
///
/// ln q comes from log1p so q^N = exp(N ln q) stays accurate for p down to 1e-9 and below.
class Prevalence {
public:
    explicit Prevalence(double p) : p_(p), q_(1.0 - p), log_q_(std::log1p(-p))
    {
        if (!(p > 0.0 && p < 1.0)) {
            throw DomainError("prevalence must lie in (0, 1), got " + std::to_string(p));
        }
    }

    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] double q() const noexcept { return q_; }
    [[nodiscard]] double log_q() const noexcept { return log_q_; }

    /// q^x for real x.
    [[nodiscard]] double q_pow(double x) const noexcept { return std::exp(x * log_q_); }

    /// 1 - q^x without cancellation.
    [[nodiscard]] double one_minus_q_pow(double x) const noexcept { return -std::expm1(x * log_q_); }

    [[nodiscard]] bool below_ungar_cutoff() const noexcept { return p_ < ungar_cutoff; }

    friend bool operator==(const Prevalence& a, const Prevalence& b) noexcept { return a.p_ == b.p_; }

private:
    double p_;
    double q_;
    double log_q_;
};

enum class Scheme : std::uint8_t {
    D0, ///< original Dorfman: pool, then every member individually
    D,  ///< modified Dorfman: last member inferred when the others test negative
    S,  ///< Sterrett: individual tests until the first positive, then re-pool the tail
};

inline constexpr Scheme all_schemes[] = {Scheme::D0, Scheme::D, Scheme::S};

[[nodiscard]] inline std::string_view to_string(Scheme s) noexcept
{
    switch (s) {
    case Scheme::D0: return "D0";
    case Scheme::D: return "D";
    case Scheme::S: return "S";
    }
    return "?";
}

[[nodiscard]] inline Scheme parse_scheme(std::string_view name)
{
    if (name == "D0") return Scheme::D0;
    if (name == "D") return Scheme::D;
    if (name == "S") return Scheme::S;
    throw DomainError("unknown scheme '" + std::string(name) + "' (expected D0, D or S)");
}

/// floor(sqrt(c / p)) as an integer, corrected against rounding at perfect squares.
[[nodiscard]] inline long floor_sqrt_ratio(double c, double p)
{
    const double r = c / p;
    auto k = static_cast<long>(std::floor(std::sqrt(r)));
    while (k > 0 && static_cast<double>(k) * static_cast<double>(k) > r) --k;
    while (static_cast<double>(k + 1) * static_cast<double>(k + 1) <= r) ++k;
    return k;
}

} // namespace pooltest
