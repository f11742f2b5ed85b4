// Prints the optimal group size and cost of each scheme for a few prevalences.

#include "pooltest/optimizer.hpp"

#include <cstdio>

int main()
{
    using namespace pooltest;
    std::printf("%-8s %6s %9s %6s %9s %6s %9s %7s\n", "p", "N(D0)", "t(D0)", "N(D)", "t(D)", "N(S)", "t(S)", "D/S");
    for (const double p : {0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3}) {
        const Prevalence prev(p);
        const auto d0 = optimal_group_size_closed_form(Scheme::D0, prev);
        const auto d = optimal_group_size_closed_form(Scheme::D, prev);
        const auto s = optimal_group_size_closed_form(Scheme::S, prev);
        std::printf("%-8g %6ld %9.6f %6ld %9.6f %6ld %9.6f %7.4f\n", p, d0.n_opt, d0.t_opt, d.n_opt, d.t_opt,
                    s.n_opt, s.t_opt, d.t_opt / s.t_opt);
    }
}
