#pragma once

// Command-line front end. `run_cli` is the whole program minus process plumbing so tests
// can drive it with in-memory streams.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or domain error, 3 I/O error.

#include "pooltest/auxiliary.hpp"
#include "pooltest/core.hpp"
#include "pooltest/executor.hpp"
#include "pooltest/grid.hpp"
#include "pooltest/optimizer.hpp"
#include "pooltest/schemes.hpp"
#include "pooltest/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace pooltest::cli {

enum ExitCode : int { ok = 0, verification_failed = 1, usage_error = 2, io_error = 3 };

inline constexpr std::uint64_t fallback_seed = 20210101;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Field = std::variant<std::string, double, long, std::uint64_t, bool>;

/// Ordered (column, value) pairs; one record per CSV row or JSON object.
struct Record {
    std::vector<std::pair<std::string, Field>> fields;

    Record& add(std::string name, Field value)
    {
        fields.emplace_back(std::move(name), std::move(value));
        return *this;
    }
};

[[nodiscard]] inline std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

[[nodiscard]] inline std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

[[nodiscard]] inline std::string csv_field(const Field& f)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) return csv_escape(v);
            else if constexpr (std::is_same_v<T, double>) return format_number(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return std::to_string(v);
        },
        f);
}

/// Header row plus one row per record; '.' decimals, '\n' line endings, 15 significant digits.
[[nodiscard]] inline std::string render_csv(const std::vector<Record>& records)
{
    std::string out;
    if (records.empty()) return out;
    for (std::size_t i = 0; i < records.front().fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(records.front().fields[i].first);
    }
    out += '\n';
    for (const auto& r : records) {
        for (std::size_t i = 0; i < r.fields.size(); ++i) {
            if (i) out += ',';
            out += csv_field(r.fields[i].second);
        }
        out += '\n';
    }
    return out;
}

[[nodiscard]] inline nlohmann::ordered_json to_json(const Record& r)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [name, value] : r.fields) {
        std::visit([&](const auto& v) { j[name] = v; }, value);
    }
    return j;
}

/// A single record renders as an object, several as an array.
[[nodiscard]] inline std::string render_json(const std::vector<Record>& records, bool as_array)
{
    nlohmann::ordered_json j;
    if (as_array) {
        j = nlohmann::ordered_json::array();
        for (const auto& r : records) j.push_back(to_json(r));
    } else {
        j = to_json(records.front());
    }
    return j.dump(2) + "\n";
}

enum class Format { csv, json };

/// Writes to `path`, or to `out` when no path is given.
inline void emit(const std::string& text, const std::optional<std::string>& path, std::ostream& out)
{
    if (!path) {
        out << text;
        return;
    }
    std::ofstream f(*path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + *path + "' for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("write to '" + *path + "' failed");
}

inline void emit_records(const std::vector<Record>& records, Format format, bool as_array,
                         const std::optional<std::string>& path, std::ostream& out)
{
    emit(format == Format::csv ? render_csv(records) : render_json(records, as_array), path, out);
}

[[nodiscard]] inline Record cost_record(const CostPoint& c)
{
    Record r;
    r.add("scheme", std::string(to_string(c.scheme)))
        .add("n", static_cast<long>(c.n))
        .add("p", c.p.p())
        .add("t", c.t);
    return r;
}

[[nodiscard]] inline Record optimal_record(const OptimalConfig& c)
{
    Record r;
    r.add("scheme", std::string(to_string(c.scheme)))
        .add("p", c.p.p())
        .add("method", std::string(to_string(c.method)))
        .add("n_opt", c.n_opt)
        .add("t_opt", c.t_opt)
        .add("candidates", c.candidates.to_string());
    return r;
}

[[nodiscard]] inline Record report_record(const verifier::VerificationReport& v)
{
    Record r;
    r.add("claim_id", v.claim_id)
        .add("status", std::string(v.passed ? "PASS" : "FAIL"))
        .add("passed", v.passed)
        .add("worst_margin", v.worst_margin)
        .add("worst_location", v.worst_location)
        .add("sign_changes", v.sign_changes ? std::to_string(*v.sign_changes) : std::string())
        .add("grid", v.grid)
        .add("claim", v.claim);
    return r;
}

// Figure data -----------------------------------------------------------------

[[nodiscard]] inline std::vector<Record> g_table(const std::vector<double>& grid)
{
    std::vector<Record> rows;
    rows.reserve(grid.size());
    for (const double p : grid) {
        const Prevalence prev(p);
        Record r;
        r.add("p", p)
            .add("g_minus1", verifier::g(verifier::GIndex(-1), prev))
            .add("g_0", verifier::g(verifier::GIndex(0), prev))
            .add("g_1", verifier::g(verifier::GIndex(1), prev));
        rows.push_back(std::move(r));
    }
    return rows;
}

/// Fig. 1: g_m over (0, (3 - sqrt 5)/2).
[[nodiscard]] inline std::vector<Record> figure1(std::size_t points)
{
    return g_table(interior_grid(0.0, ungar_cutoff, points));
}

/// Fig. 2: g_m over (0, 0.25), where g_0 crosses 1 at p*.
[[nodiscard]] inline std::vector<Record> figure2(std::size_t points)
{
    return g_table(interior_grid(0.0, 0.25, points));
}

/// Fig. 3: the Sterrett gap over (p*, (3 - sqrt 5)/2), with the breakpoint 2/9 included.
[[nodiscard]] inline std::vector<Record> figure3(std::size_t points)
{
    auto grid = interior_grid(verifier::p_star(), ungar_cutoff, points);
    grid.push_back(2.0 / 9.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<Record> rows;
    rows.reserve(grid.size());
    for (const double p : grid) {
        Record r;
        r.add("p", p).add("f", verifier::sterrett_gap(Prevalence(p)));
        rows.push_back(std::move(r));
    }
    return rows;
}

inline constexpr double figure4_n_step = 0.25;
inline constexpr double figure4_n_max = 20.0;

/// Fig. 4, region part: membership of (p, n) in A^(D) on p-grid x {1, 1.25, ..., 20}.
[[nodiscard]] inline std::vector<Record> figure4_region(std::size_t points)
{
    std::vector<Record> rows;
    const auto steps = static_cast<long>((figure4_n_max - 1.0) / figure4_n_step);
    for (const double p : interior_grid(0.0, ungar_cutoff, points)) {
        const Prevalence prev(p);
        for (long k = 0; k <= steps; ++k) {
            const double n = 1.0 + figure4_n_step * static_cast<double>(k);
            Record r;
            r.add("p", p).add("n", n).add("in_A_D", static_cast<long>(verifier::in_region_A_D(n, prev)));
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

/// Fig. 4, curve part: bracing functions and the Dorfman continuous minimizer.
[[nodiscard]] inline std::vector<Record> figure4_brace(std::size_t points)
{
    std::vector<Record> rows;
    for (const double p : interior_grid(0.0, ungar_cutoff, points)) {
        const Prevalence prev(p);
        Record r;
        r.add("p", p)
            .add("sqrt_inv_p", 1.0 / std::sqrt(p))
            .add("brace_lo", verifier::dorfman_brace_lo(p))
            .add("brace_hi", verifier::dorfman_brace_hi(p))
            .add("n_star", continuous_minimizer(Scheme::D, prev).x);
        rows.push_back(std::move(r));
    }
    return rows;
}

/// "out/fig4.csv" -> "out/fig4_brace.csv".
[[nodiscard]] inline std::string companion_path(const std::string& path)
{
    const std::filesystem::path p(path);
    auto name = p.stem().string() + "_brace" + (p.has_extension() ? p.extension().string() : std::string(".csv"));
    return (p.parent_path() / name).string();
}

// Seed --------------------------------------------------------------------------

[[nodiscard]] inline std::uint64_t parse_seed(const std::string& text)
{
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw DomainError("seed must be a non-negative integer, got '" + text + "'");
    }
    errno = 0;
    const unsigned long long v = std::strtoull(text.c_str(), nullptr, 10);
    if (errno == ERANGE) throw DomainError("seed does not fit in 64 bits: '" + text + "'");
    return v;
}

/// --seed, else POOLTEST_SEED, else the fixed fallback.
[[nodiscard]] inline std::uint64_t resolve_seed(const std::optional<std::string>& flag)
{
    if (flag) return parse_seed(*flag);
    if (const char* env = std::getenv("POOLTEST_SEED"); env && *env) return parse_seed(env);
    return fallback_seed;
}

// Entry point ---------------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Expected cost and optimal pool size for Dorfman-type group testing"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    std::string scheme_name;
    std::string format_name = "csv";
    long n = 0;
    double p = 0.0;
    std::optional<std::string> output;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output", output, "Write to PATH instead of standard output");
    };
    auto add_scheme = [&](CLI::App* sub) {
        sub->add_option("--scheme", scheme_name, "D0, D or S")->required()->check(CLI::IsMember({"D0", "D", "S"}));
    };

    auto* cost = app.add_subcommand("cost", "Expected tests per item");
    add_scheme(cost);
    cost->add_option("--n", n, "Group size")->required();
    cost->add_option("--p", p, "Prevalence")->required();
    add_common(cost);

    auto* dist = app.add_subcommand("distribution", "Law of the test count for the modified Dorfman scheme");
    dist->add_option("--n", n, "Group size (>= 2)")->required();
    dist->add_option("--p", p, "Prevalence")->required();
    add_common(dist);

    std::string method = "closed-form";
    std::optional<long> n_max;
    auto* opt = app.add_subcommand("optimal", "Optimal group size");
    add_scheme(opt);
    opt->add_option("--p", p, "Prevalence")->required();
    opt->add_option("--method", method, "brute-force, closed-form or continuous")
        ->check(CLI::IsMember({"brute-force", "closed-form", "continuous"}));
    opt->add_option("--n-max", n_max, "Brute-force search cap");
    add_common(opt);

    long reps = 0;
    std::optional<std::string> seed_text;
    unsigned threads = 1;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of tests per item");
    add_scheme(sim);
    sim->add_option("--n", n, "Group size")->required();
    sim->add_option("--p", p, "Prevalence")->required();
    sim->add_option("--reps", reps, "Replications")->required();
    sim->add_option("--seed", seed_text, "Master seed (default: $POOLTEST_SEED)");
    sim->add_option("--threads", threads, "Worker threads");
    add_common(sim);

    long grid_points = 500;
    auto* ver = app.add_subcommand("verify", "Grid verification of every optimality claim");
    ver->add_option("--grid-points", grid_points, "Points per grid (>= 10)");
    add_common(ver);

    int which = 0;
    auto* fig = app.add_subcommand("figures", "CSV data behind figures 1-4");
    fig->add_option("--which", which, "Figure number")->required()->check(CLI::Range(1, 4));
    fig->add_option("--grid-points", grid_points, "Points per grid");
    fig->add_option("--output", output, "Write to PATH instead of standard output");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    }

    const Scheme scheme = scheme_name.empty() ? Scheme::D : parse_scheme(scheme_name);
    const Format format = format_name == "json" ? Format::json : Format::csv;

    try {
        if (cost->parsed()) {
            emit_records({cost_record(cost_point(scheme, n, Prevalence(p)))}, format, false, output, out);
            return ok;
        }
        if (dist->parsed()) {
            std::vector<Record> rows;
            for (const auto& atom : tests_distribution_modified_dorfman(n, Prevalence(p))) {
                Record r;
                r.add("value", atom.value).add("prob", atom.prob);
                rows.push_back(std::move(r));
            }
            emit_records(rows, format, true, output, out);
            return ok;
        }
        if (opt->parsed()) {
            const Prevalence prev(p);
            if (method == "continuous") {
                const auto root = continuous_minimizer(scheme, prev);
                const auto lo = static_cast<long>(std::floor(root.x));
                const auto [n_opt, t_opt] = detail::argmin_cost(scheme, prev, std::vector<long>{lo, lo + 1});
                Record r;
                r.add("scheme", std::string(to_string(scheme)))
                    .add("p", p)
                    .add("method", std::string("continuous"))
                    .add("n_star", root.x)
                    .add("residual", root.residual)
                    .add("iterations", static_cast<long>(root.iterations))
                    .add("bracket_lo", root.lo)
                    .add("bracket_hi", root.hi)
                    .add("n_opt", n_opt)
                    .add("t_opt", t_opt);
                emit_records({r}, format, false, output, out);
                return ok;
            }
            const auto config = method == "brute-force" ? optimal_group_size_bruteforce(scheme, prev, n_max)
                                                        : optimal_group_size_closed_form(scheme, prev);
            emit_records({optimal_record(config)}, format, false, output, out);
            return ok;
        }
        if (sim->parsed()) {
            const Prevalence prev(p);
            const std::uint64_t seed = resolve_seed(seed_text);
            const auto est = simulate_expected_tests(scheme, n, prev, reps, seed, threads == 0 ? 1 : threads);
            Record r;
            r.add("scheme", std::string(to_string(scheme)))
                .add("n", n)
                .add("p", p)
                .add("replications", est.replications)
                .add("seed", est.seed)
                .add("mean", est.mean)
                .add("std_error", est.std_error)
                .add("analytic_t", cost_per_item(scheme, n, prev));
            emit_records({r}, format, false, output, out);
            return ok;
        }
        if (ver->parsed()) {
            if (grid_points < static_cast<long>(verifier::min_grid_points)) {
                throw DomainError("--grid-points must be >= 10, got " + std::to_string(grid_points));
            }
            const auto reports = verifier::verify_all(static_cast<std::size_t>(grid_points));
            std::vector<Record> rows;
            bool all = true;
            for (const auto& rep : reports) {
                rows.push_back(report_record(rep));
                all = all && rep.passed;
            }
            emit_records(rows, format, true, output, out);
            return all ? ok : verification_failed;
        }
        if (fig->parsed()) {
            if (grid_points < 2) throw DomainError("--grid-points must be >= 2 for figures");
            const auto points = static_cast<std::size_t>(grid_points);
            switch (which) {
            case 1: emit(render_csv(figure1(points)), output, out); break;
            case 2: emit(render_csv(figure2(points)), output, out); break;
            case 3: emit(render_csv(figure3(points)), output, out); break;
            default: {
                const auto region = render_csv(figure4_region(points));
                const auto brace = render_csv(figure4_brace(points));
                if (output) {
                    emit(region, output, out);
                    emit(brace, companion_path(*output), out);
                } else {
                    out << region << '\n' << brace;
                }
            }
            }
            return ok;
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return io_error;
    } catch (const BracketFailure& e) {
        err << "claim violated: " << e.what() << "\n";
        return verification_failed;
    } catch (const ClaimViolation& e) {
        err << "claim violated: " << e.what() << "\n";
        return verification_failed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    }
    return usage_error;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, out, err);
}

} // namespace pooltest::cli
