// Descriptor grammar, CSV emitters and exit codes of the command-line tool.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <gtest/gtest.h>

#include "qwell/cli.hpp"

using namespace qwell;
using namespace qwell::cli;

namespace {

std::vector<std::vector<std::string>> rows(const std::string& csv) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) out.push_back(cli::detail::split(line, ','));
    return out;
}

int run_tool(const std::string& args) {
    const std::string cmd = std::string(QWELL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string tool_output(const std::string& args) {
    const std::string cmd = std::string(QWELL_CLI_PATH) + " " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    pclose(pipe);
    return out;
}

}  // namespace

TEST(Cli, StateGrammar) {
    EXPECT_EQ(parse_state("eigen:3").label(), "eigen:3");
    EXPECT_EQ(parse_state("super:1:3:0.25").label(), "super:1:3:0.25");
    EXPECT_EQ(parse_state("poly:4").label(), "poly:4");
    EXPECT_EQ(parse_state("parabolic").label(), "parabolic");
    for (const char* bad : {"eigen", "eigen:x", "eigen:0", "eigen:1:2", "super:1:1:0.1", "poly:-1", "wave:2",
                            "parabolic:1", "custom:", "custom:@/nonexistent/file", ""}) {
        EXPECT_THROW(parse_state(bad), UsageError) << bad;
    }
}

TEST(Cli, CustomStateFromFile) {
    const std::string path = ::testing::TempDir() + "qwell_custom.txt";
    {
        std::ofstream f(path);
        f << "0.6\n0\n0.8\n";
    }
    const auto s = parse_state("custom:@" + path);
    ASSERT_TRUE(s.is<states::Custom>());
    EXPECT_EQ(s.as<states::Custom>().coefficients, (std::vector<double>{0.6, 0.0, 0.8}));
    {
        std::ofstream f(path);
        f << "0.6 0.6\n";
    }
    EXPECT_THROW(parse_state("custom:@" + path), UsageError);
}

TEST(Cli, ValueGrammar) {
    EXPECT_EQ(parse_values("1,2,4"), (std::vector<double>{1, 2, 4}));
    const auto r = parse_values("0:2:101");
    ASSERT_EQ(r.size(), 101u);
    EXPECT_EQ(r.front(), 0.0);
    EXPECT_EQ(r.back(), 2.0);
    EXPECT_EQ(r[50], 1.0);
    EXPECT_EQ(parse_values("3:3:1"), (std::vector<double>{3}));
    EXPECT_EQ(parse_values("0:1:3,5"), (std::vector<double>{0, 0.5, 1, 5}));
    for (const char* bad : {"", "a", "1:2", "2:1:5", "0:1:0", "0:1:1", "1,,2", "1e999", "0:1:2:3"}) {
        EXPECT_THROW(parse_values(bad), UsageError) << bad;
    }
    EXPECT_EQ(parse_index_range("2:15").lo, 2);
    EXPECT_THROW(parse_index_range("5:5"), UsageError);
    EXPECT_THROW(parse_index_range("0:5"), UsageError);
    EXPECT_THROW(parse_family("ghz"), UsageError);
}

TEST(Cli, StaticRows) {
    std::ostringstream out;
    cmd_static(out, {"eigen:1", "poly:1"}, {1.0, 2.0, 4.0}, 50);
    const auto t = rows(out.str());
    ASSERT_EQ(t.size(), 7u);
    EXPECT_EQ(t[0], (std::vector<std::string>{"state", "a", "qfi", "fi_position", "fi_energy", "qsnr"}));
    EXPECT_NEAR(std::stod(t[1][5]), 14.1595, 1e-4);
    EXPECT_EQ(t[1][5], t[2][5]);
    EXPECT_EQ(t[1][5], t[3][5]);
    EXPECT_EQ(t[4][5], "15");
    EXPECT_EQ(t[2][1], "2");
}

TEST(Cli, EnergyRows) {
    std::ostringstream out;
    cmd_energy(out, default_energy_axis(12));
    const auto t = rows(out.str());
    EXPECT_EQ(t[0], (std::vector<std::string>{"energy", "qsnr_eigen", "qsnr_poly"}));
    double prev_e = 0.0, prev_poly = 0.0;
    int eigen_points = 0;
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double e = std::stod(t[k][0]);
        const double qe = std::stod(t[k][1]);
        EXPECT_GT(e, prev_e);
        prev_e = e;
        for (int n = 1; n <= 12; ++n) {
            if (std::abs(e - n * n * M_PI * M_PI / 2.0) < 1e-9) ++eigen_points;
        }
        if (t[k].size() < 3 || t[k][2].empty()) {
            EXPECT_LT(e, 5.0);
            continue;
        }
        const double qp = std::stod(t[k][2]);
        EXPECT_GT(qp, qe);
        EXPECT_GT(qp, prev_poly);
        prev_poly = qp;
    }
    EXPECT_EQ(eigen_points, 12);
    EXPECT_NEAR(*qsnr_poly_at_energy(5.0), 15.0, 1e-12);
    EXPECT_FALSE(qsnr_poly_at_energy(4.9).has_value());
}

TEST(Cli, TimeRows) {
    std::ostringstream out;
    cmd_time(out, {1, 2, 3}, parse_values("0:2:101"), 50);
    const auto t = rows(out.str());
    EXPECT_EQ(t.size(), 304u);
    EXPECT_EQ(t[0], (std::vector<std::string>{"a", "t", "qsnr", "residual"}));
    EXPECT_NEAR(std::stod(t[1][2]), 15.0, 1e-3);
    EXPECT_THROW(cmd_time(out, {1}, {-1.0}, 50), UsageError);
}

TEST(Cli, EntangledRows) {
    std::ostringstream out;
    cmd_entangled(out, PairFamily::eigen, {1, 20});
    const auto t = rows(out.str());
    EXPECT_EQ(t.size(), 401u);
    EXPECT_EQ(t[0], (std::vector<std::string>{"kind", "i", "j", "q_joint", "q_sum", "gamma"}));
    for (std::size_t k = 1; k < t.size(); ++k) {
        const int i = std::stoi(t[k][1]);
        const int j = std::stoi(t[k][2]);
        ASSERT_EQ(t[k].size(), 6u);
        if (i == j) {
            EXPECT_TRUE(t[k][3].empty());
            EXPECT_TRUE(t[k][5].empty());
            continue;
        }
        const double extra = std::stod(t[k][3]) - std::stod(t[k][4]);
        const double ni = i, nj = j;
        const double ref = 32.0 * ni * ni * nj * nj / ((ni * ni - nj * nj) * (ni * ni - nj * nj));
        // Fields carry 12 significant digits, so the difference keeps about 1e-11 of q_joint.
        EXPECT_NEAR(extra, ref, 1e-10 * std::stod(t[k][3]));
        EXPECT_GT(std::stod(t[k][5]), 1.0);
    }
}

TEST(Cli, MonteCarloRowsAreDeterministic) {
    std::ostringstream a, b;
    cmd_montecarlo(a, "poly:2", {1.0}, {200, 400}, 30, 3, 50);
    cmd_montecarlo(b, "poly:2", {1.0}, {200, 400}, 30, 3, 50);
    EXPECT_EQ(a.str(), b.str());
    const auto t = rows(a.str());
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(t[0], (std::vector<std::string>{"state", "a", "M", "replicas", "variance", "crlb_ratio"}));
    EXPECT_EQ(t[2][2], "400");
    EXPECT_THROW(cmd_montecarlo(a, "poly:2", {1.0}, {0}, 30, 3, 50), UsageError);
}

TEST(Cli, ToolExitCodes) {
    EXPECT_EQ(run_tool("static --state eigen:1"), 0);
    EXPECT_EQ(run_tool("static --state eigen:zero"), 2);
    EXPECT_EQ(run_tool("static"), 2);
    EXPECT_EQ(run_tool("nosuchcommand"), 2);
    EXPECT_EQ(run_tool("time --t 2:1:5"), 2);
    EXPECT_EQ(run_tool("--truncation 0 static --state eigen:1"), 2);
    EXPECT_EQ(run_tool("static --state eigen:1 --output /nonexistent/dir/out.csv"), 3);
}

TEST(Cli, ToolOutputIsByteIdentical) {
    const std::string args = "montecarlo --state eigen:1 --M 100 --replicas 30 --seed 9";
    const auto first = tool_output(args);
    EXPECT_EQ(first, tool_output(args));
    EXPECT_EQ(first.rfind("state,a,M,replicas,variance,crlb_ratio\n", 0), 0u);
}
