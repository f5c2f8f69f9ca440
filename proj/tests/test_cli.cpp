#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "support.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cies_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

// Runs the CLI with `args` and returns its exit code; stderr goes to `log`.
int cli(const std::string& args, const fs::path& log) {
  const std::string cmd = quote(CIES_TEST_CLI) + " " + args + " 2> " + quote(log.string()) + " > /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string bundled() { return quote(cies::test::data_path("scenario3.json")); }

std::string solver_flag(const std::string& cmd) { return "--solver-cmd " + quote(cmd); }

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Cli, HelpExitsZero) {
  const auto dir = scratch("help");
  EXPECT_EQ(cli("run --help", dir / "log"), 0);
}

TEST(Cli, ConfigErrorsExitTwo) {
  const auto dir = scratch("config");
  EXPECT_EQ(cli(quote((dir / "missing.json").string()) + " ", dir / "log0"), 2);
  EXPECT_EQ(cli("run " + quote((dir / "missing.json").string()), dir / "log1"), 2);

  std::ofstream(dir / "broken.json") << "{ \"periods\": ";
  EXPECT_EQ(cli("run " + quote((dir / "broken.json").string()), dir / "log2"), 2);
  EXPECT_NE(slurp(dir / "log2").find("config error"), std::string::npos);

  EXPECT_EQ(cli("run " + bundled() + " --alpha 1.5 --out " + quote((dir / "o").string()), dir / "log3"), 2);
  EXPECT_EQ(cli("run " + bundled() + " --sweep-alpha 0.8,x --out " + quote((dir / "o").string()), dir / "log4"), 2);
  EXPECT_EQ(cli("run " + bundled() + " --scenario 4", dir / "log5"), 2);
}

TEST(Cli, SolverFailureExitsThree) {
  const auto dir = scratch("solver");
  const std::string args = "run " + bundled() + " --out " + quote((dir / "o").string());
  EXPECT_EQ(cli(args + " " + solver_flag("false {model} {solution}"), dir / "log"), 3);
  EXPECT_NE(slurp(dir / "log").find("solver failure"), std::string::npos);
}

TEST(Cli, TamperedSolutionFailsAudit) {
  CIES_REQUIRE_SOLVER();
  const auto dir = scratch("audit");
  // Solve for real, then nudge one grid purchase so the electric balance breaks.
  const fs::path stub = dir / "tamper.sh";
  std::string real = cies::test::solver_command();
  real.replace(real.find("{model}"), 7, "\"$1\"");
  real.replace(real.find("{solution}"), 10, "\"$2\"");
  std::ofstream(stub) << real << " || exit $?\n"
                      << "awk '$1==\"pg_el_6\"{$2=$2+1}1' \"$2\" > \"$2.tmp\" && mv \"$2.tmp\" \"$2\"\n";
  const fs::path out = dir / "o";
  EXPECT_EQ(cli("run " + bundled() + " --alpha 0.9 --out " + quote(out.string()) + " " +
                    solver_flag("sh " + quote(stub.string()) + " {model} {solution}"),
                dir / "log"),
            4)
      << slurp(dir / "log");
  const auto audit = nlohmann::json::parse(slurp(out / "audit.json"));
  ASSERT_FALSE(audit.at("violations").empty());
  bool balance = false;
  for (const auto& v : audit.at("violations")) balance = balance || v.dump().find("bal_e") != std::string::npos;
  EXPECT_TRUE(balance) << audit.dump();
}

TEST(Cli, RunWritesReportsAndSweepIsMonotone) {
  CIES_REQUIRE_SOLVER();
  const auto dir = scratch("run");
  const fs::path a = dir / "a", b = dir / "b";
  const std::string solver = solver_flag(cies::test::solver_command());
  ASSERT_EQ(cli("run " + bundled() + " --alpha 0.90 --out " + quote(a.string()) + " " + solver +
                    " --sweep-alpha 0.8,0.85,0.9,0.95,1.0 --jobs 5",
                dir / "log_a"),
            0)
      << slurp(dir / "log_a");
  ASSERT_EQ(cli("run " + bundled() + " --alpha 0.90 --out " + quote(b.string()) + " " + solver, dir / "log_b"), 0)
      << slurp(dir / "log_b");

  const std::vector<std::string> reports = {"audit.json",          "validation.json",    "costs.csv",
                                            "satisfaction.csv",    "dispatch_electric.csv", "dispatch_gas.csv",
                                            "dispatch_heat.csv"};
  for (const auto& f : reports) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_GT(fs::file_size(a / f), 0u) << f;
    if (f.ends_with(".csv")) {
      EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
  }
  EXPECT_FALSE(fs::exists(b / "reserve_sweep.csv"));
  EXPECT_TRUE(nlohmann::json::parse(slurp(a / "audit.json")).at("violations").empty());

  const auto rows = csv_rows(a / "reserve_sweep.csv");
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"alpha", "total_reserve_kw", "total_cost_yuan", "violations"}));
  double prev_r = -1.0, prev_c = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 4u);
    const double r = std::stod(rows[i][1]), c = std::stod(rows[i][2]);
    EXPECT_GE(r, prev_r - 1e-6) << rows[i][0];
    EXPECT_GE(c, prev_c - 1e-6 * (1.0 + std::abs(c))) << rows[i][0];
    EXPECT_EQ(rows[i][3], "0");
    prev_r = r;
    prev_c = c;
  }
}
