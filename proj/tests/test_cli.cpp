#include "cli_app.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pooltest;
using pooltest::cli::run_cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) break;
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (const char c : line) {
            if (c == '"') quoted = !quoted;
            else if (c == ',' && !quoted) {
                cells.push_back(cell);
                cell.clear();
            } else cell += c;
        }
        cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name)
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    ADD_FAILURE() << "missing column " << name;
    return 0;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

} // namespace

TEST(CliCost, Csv)
{
    const auto r = run({"cost", "--scheme", "D", "--n", "2", "--p", "0.1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 2U);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"scheme", "n", "p", "t"}));
    EXPECT_NEAR(std::stod(rows[1][3]), 0.645, 1e-14);
}

TEST(CliCost, IndividualAndErrors)
{
    const auto one = run({"cost", "--scheme", "D0", "--n", "1", "--p", "0.2"});
    ASSERT_EQ(one.code, 0);
    EXPECT_EQ(parse_csv(one.out)[1][3], "1");

    const auto bad_n = run({"cost", "--scheme", "S", "--n", "0", "--p", "0.1"});
    EXPECT_EQ(bad_n.code, 2);
    EXPECT_NE(bad_n.err.find("group size"), std::string::npos);

    EXPECT_EQ(run({"cost", "--scheme", "S", "--n", "3", "--p", "1.5"}).code, 2);
    EXPECT_EQ(run({"cost", "--scheme", "X", "--n", "3", "--p", "0.1"}).code, 2);
    EXPECT_EQ(run({"cost", "--n", "3", "--p", "0.1"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
}

TEST(CliCost, Json)
{
    const auto r = run({"cost", "--scheme", "S", "--n", "3", "--p", "0.2", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["scheme"], "S");
    EXPECT_EQ(j["n"], 3);
    EXPECT_NEAR(j["t"].get<double>(), 2.248 / 3.0, 1e-14);
}

TEST(CliDistribution, Rows)
{
    const auto r = run({"distribution", "--n", "3", "--p", "0.5"});
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 4U);
    EXPECT_EQ(rows[3][0], "4");
    EXPECT_EQ(rows[3][1], "0.75");
    EXPECT_EQ(run({"distribution", "--n", "1", "--p", "0.5"}).code, 2);
}

TEST(CliOptimal, ClosedFormAndBruteForce)
{
    const auto cf = run({"optimal", "--scheme", "D", "--p", "0.01", "--method", "closed-form"});
    ASSERT_EQ(cf.code, 0);
    auto rows = parse_csv(cf.out);
    EXPECT_EQ(rows[1][column(rows[0], "n_opt")], "10");
    EXPECT_EQ(rows[1][column(rows[0], "candidates")], "10,11");
    EXPECT_NE(cf.out.find("\"10,11\""), std::string::npos);

    const auto bf = run({"optimal", "--scheme", "S", "--p", "0.01", "--method", "brute-force"});
    ASSERT_EQ(bf.code, 0);
    rows = parse_csv(bf.out);
    EXPECT_EQ(rows[1][column(rows[0], "n_opt")], "15");

    for (const std::string scheme : {"D0", "D", "S"}) {
        for (const std::string p : {"0.003", "0.05", "0.2", "0.31"}) {
            const auto a = parse_csv(run({"optimal", "--scheme", scheme, "--p", p, "--method", "closed-form"}).out);
            const auto b = parse_csv(run({"optimal", "--scheme", scheme, "--p", p, "--method", "brute-force"}).out);
            EXPECT_EQ(a[1][column(a[0], "n_opt")], b[1][column(b[0], "n_opt")]) << scheme << " " << p;
        }
    }
}

TEST(CliOptimal, Continuous)
{
    const auto r = run({"optimal", "--scheme", "S", "--p", "0.01", "--method", "continuous", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["n_star"].get<double>(), 14.7024039078133, 1e-9);
    EXPECT_EQ(j["n_opt"], 15);
    EXPECT_EQ(run({"optimal", "--scheme", "D0", "--p", "0.01", "--method", "continuous"}).code, 2);
    EXPECT_EQ(run({"optimal", "--scheme", "D", "--p", "0.01", "--method", "magic"}).code, 2);
}

TEST(CliSimulate, DeterministicAndAccurate)
{
    const std::vector<std::string> args{"simulate", "--scheme", "D", "--n", "10", "--p", "0.05",
                                        "--reps", "50000", "--seed", "7"};
    const auto a = run(args);
    const auto b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);

    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "4"});
    EXPECT_EQ(run(threaded).out, a.out);

    const auto rows = parse_csv(a.out);
    const double mean = std::stod(rows[1][column(rows[0], "mean")]);
    const double se = std::stod(rows[1][column(rows[0], "std_error")]);
    const double t = std::stod(rows[1][column(rows[0], "analytic_t")]);
    EXPECT_LT(std::abs(mean - t), 4.0 * se);

    EXPECT_EQ(run({"simulate", "--scheme", "D", "--n", "10", "--p", "0.05", "--reps", "0"}).code, 2);
}

TEST(CliSimulate, SeedFromEnvironment)
{
    const std::vector<std::string> base{"simulate", "--scheme", "S", "--n", "6", "--p", "0.1", "--reps", "1000"};
    ::setenv("POOLTEST_SEED", "123", 1);
    const auto from_env = run(base);
    auto explicit_seed = base;
    explicit_seed.insert(explicit_seed.end(), {"--seed", "123"});
    const auto from_flag = run(explicit_seed);
    EXPECT_EQ(from_env.out, from_flag.out);

    auto override_seed = base;
    override_seed.insert(override_seed.end(), {"--seed", "124"});
    EXPECT_NE(run(override_seed).out, from_env.out);

    ::setenv("POOLTEST_SEED", "not-a-number", 1);
    EXPECT_EQ(run(base).code, 2);
    ::unsetenv("POOLTEST_SEED");
    const auto fallback = parse_csv(run(base).out);
    EXPECT_EQ(fallback[1][column(fallback[0], "seed")], std::to_string(cli::fallback_seed));
}

TEST(CliVerify, SmallGridRejected)
{
    EXPECT_EQ(run({"verify", "--grid-points", "5"}).code, 2);
}

TEST(CliVerify, JsonRoundTrip)
{
    const auto r = run({"verify", "--grid-points", "20", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_TRUE(j.is_array());
    EXPECT_EQ(j.size(), 11U);
    EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
    for (const auto& rep : j) EXPECT_EQ(rep["status"], "PASS");
}

TEST(CliVerify, FiveHundredPoints)
{
    const auto r = run({"verify", "--grid-points", "500"});
    EXPECT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 12U);
    const auto status = column(rows[0], "status");
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][status], "PASS") << rows[i][0];
}

TEST(CliFigures, Figure1GOneAboveOne)
{
    const auto r = run({"figures", "--which", "1", "--grid-points", "200"});
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"p", "g_minus1", "g_0", "g_1"}));
    ASSERT_EQ(rows.size(), 201U);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(std::stod(rows[i][3]), 1.0);
}

TEST(CliFigures, Figure3NearTwoNinths)
{
    const auto r = run({"figures", "--which", "3", "--grid-points", "300"});
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    double best_dist = 1.0;
    double f_at = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double p = std::stod(rows[i][0]);
        if (std::abs(p - 2.0 / 9.0) < best_dist) {
            best_dist = std::abs(p - 2.0 / 9.0);
            f_at = std::stod(rows[i][1]);
        }
    }
    EXPECT_NEAR(f_at, 0.018976, 1e-4);
}

TEST(CliFigures, Figure4WritesBothFiles)
{
    const auto dir = std::filesystem::temp_directory_path() / "pooltest_cli_fig4";
    std::filesystem::create_directories(dir);
    const auto path = dir / "fig4.csv";
    const auto r = run({"figures", "--which", "4", "--grid-points", "50", "--output", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;

    const auto region = parse_csv(slurp(path));
    EXPECT_EQ(region[0], (std::vector<std::string>{"p", "n", "in_A_D"}));
    EXPECT_EQ(region.size(), 1U + 50U * 77U);

    const auto brace = parse_csv(slurp(dir / "fig4_brace.csv"));
    EXPECT_EQ(brace[0], (std::vector<std::string>{"p", "sqrt_inv_p", "brace_lo", "brace_hi", "n_star"}));
    ASSERT_EQ(brace.size(), 51U);
    for (std::size_t i = 1; i < brace.size(); ++i) {
        const double lo = std::stod(brace[i][2]);
        const double hi = std::stod(brace[i][3]);
        const double n = std::stod(brace[i][4]);
        EXPECT_LT(lo, n);
        EXPECT_LT(n, hi);
    }
    std::filesystem::remove_all(dir);
}

TEST(CliFigures, Errors)
{
    EXPECT_EQ(run({"figures", "--which", "5"}).code, 2);
    EXPECT_EQ(run({"figures", "--which", "1", "--output", "/nonexistent-dir/x/fig.csv"}).code, 3);
    EXPECT_EQ(run({"cost", "--scheme", "D", "--n", "2", "--p", "0.1", "--output", "/nonexistent-dir/x.csv"}).code, 3);
}

TEST(CliHelp, ExitsZero)
{
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

TEST(CliFormat, CompanionPathAndCsvEscape)
{
    EXPECT_EQ(cli::companion_path("out/fig4.csv"), "out/fig4_brace.csv");
    EXPECT_EQ(cli::companion_path("fig4"), "fig4_brace.csv");
    EXPECT_EQ(cli::csv_escape("a,b"), "\"a,b\"");
    EXPECT_EQ(cli::csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(cli::format_number(0.1 + 0.2), "0.3");
}
