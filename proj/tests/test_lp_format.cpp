#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cies/ccp.hpp"
#include "cies/lp_format.hpp"
#include "support.hpp"

using namespace cies;

namespace {

ModelIR toy() {
  ModelIR m;
  const int x = m.add_var("x", 0.0, 10.0);
  LinExpr row;
  row.add(x, 1.0);
  m.add_constraint("c1", row, Sense::Ge, 1.0);
  m.objective().add(x, 1.0);
  return m;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = 0; (pos = text.find(needle, pos)) != std::string::npos; pos += needle.size()) ++n;
  return n;
}

// Reads back "name: a x + b y ... <= rhs" rows of an exported model.
std::vector<std::pair<std::string, double>> row_terms(const std::string& text, const std::string& row) {
  const auto start = text.find(" " + row + ": ");
  EXPECT_NE(start, std::string::npos);
  auto end = text.find_first_of("<>=", start + row.size() + 3);
  std::string body = text.substr(start + row.size() + 3, end - start - row.size() - 3);
  std::vector<std::pair<std::string, double>> out;
  std::istringstream is(body);
  std::string tok;
  double sign = 1.0, coef = 1.0;
  bool have_coef = false;
  while (is >> tok) {
    if (tok == "+") {
      sign = 1.0;
    } else if (tok == "-") {
      sign = -1.0;
    } else if (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '.') {
      coef = std::stod(tok);
      have_coef = true;
    } else {
      out.emplace_back(tok, sign * (have_coef ? coef : 1.0));
      sign = 1.0;
      have_coef = false;
    }
  }
  return out;
}

}  // namespace

TEST(ExportLp, SingleVariableModel) {
  const auto text = export_lp(toy());
  EXPECT_NE(text.find("Minimize"), std::string::npos);
  EXPECT_NE(text.find("Subject To"), std::string::npos);
  EXPECT_NE(text.find("x >= 1"), std::string::npos);
  EXPECT_NE(text.find("x <= 10"), std::string::npos);
  EXPECT_NE(text.find("End"), std::string::npos);
}

TEST(ExportLp, BinaryListedOnce) {
  ModelIR m = toy();
  const int b = m.add_binary("b");
  LinExpr row;
  row.add(b, 1.0).add(0, -1.0);
  m.add_constraint("c2", row, Sense::Le, 0.0);
  const auto text = export_lp(m);
  const auto bin = text.find("Binary\n");
  ASSERT_NE(bin, std::string::npos);
  EXPECT_EQ(count_of(text.substr(bin), " b\n"), 1u);
  EXPECT_EQ(count_of(text, "Binary"), 1u);
}

TEST(ExportLp, Deterministic) {
  ModelIR m;
  std::vector<int> ids;
  for (int i = 0; i < 50; ++i) ids.push_back(m.add_var("v_" + std::to_string(i), -1.0, 1.0));
  LinExpr row;
  for (int i : ids) row.add(i, 0.1 * i + 1e-7);
  m.add_constraint("r", row, Sense::Eq, 0.5);
  EXPECT_EQ(export_lp(m), export_lp(m));
}

TEST(ExportLp, CoefficientsRoundTripAt12Digits) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  ModelIR m;
  std::vector<double> coefs;
  LinExpr row;
  for (int i = 0; i < 40; ++i) {
    const int v = m.add_var("y" + std::to_string(i), 0.0, 1.0);
    const double c = u(rng);
    coefs.push_back(c);
    row.add(v, c);
  }
  m.add_constraint("big", row, Sense::Le, 3.0);
  const auto terms = row_terms(export_lp(m), "big");
  ASSERT_EQ(terms.size(), coefs.size());
  for (std::size_t i = 0; i < coefs.size(); ++i) {
    EXPECT_EQ(terms[i].first, "y" + std::to_string(i));
    EXPECT_NEAR(terms[i].second, coefs[i], 1e-11 * std::fabs(coefs[i]));
  }
}

TEST(ExportLp, Errors) {
  ModelIR m = toy();
  LinExpr bad;
  bad.add(0, std::nan(""));
  m.add_constraint("nan_row", bad, Sense::Le, 1.0);
  EXPECT_THROW(export_lp(m), ExportError);

  ModelIR dup = toy();
  LinExpr row;
  row.add(0, 1.0);
  dup.add_constraint("c1", row, Sense::Le, 5.0);
  EXPECT_THROW(export_lp(dup), ExportError);

  ModelIR named;
  named.add_var("bad name", 0.0, 1.0);
  EXPECT_THROW(export_lp(named), ExportError);

  ModelIR v;
  v.add_var("x", 0.0, 1.0);
  EXPECT_THROW(v.add_var("x", 0.0, 1.0), ParameterError);
}

TEST(ParseSolution, Examples) {
  const ModelIR m = toy();
  auto s = parse_solution("# status optimal\n# objective 1\nx 1.0\n", m);
  EXPECT_DOUBLE_EQ(s.values[0], 1.0);
  EXPECT_EQ(s.status, "optimal");
  ASSERT_TRUE(s.reported_objective.has_value());
  EXPECT_DOUBLE_EQ(*s.reported_objective, 1.0);

  try {
    parse_solution("# nothing\n", m);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("x"), std::string::npos);
  }
  SolutionParseOptions partial;
  partial.partial_output = true;
  s = parse_solution("", m, partial);
  EXPECT_DOUBLE_EQ(s.values[0], 0.0);
  EXPECT_EQ(s.warnings.size(), 1u);
}

TEST(ParseSolution, BinaryRounding) {
  ModelIR m;
  m.add_binary("b");
  EXPECT_DOUBLE_EQ(parse_solution("b 0.9999999\n", m).values[0], 1.0);
  EXPECT_DOUBLE_EQ(parse_solution("b 1e-7\n", m).values[0], 0.0);
  EXPECT_THROW(parse_solution("b 0.5\n", m), ParseError);
}

TEST(ParseSolution, Errors) {
  const ModelIR m = toy();
  EXPECT_THROW(parse_solution("y 1\n", m), ParseError);
  EXPECT_THROW(parse_solution("x 11\n", m), ParseError);
  EXPECT_THROW(parse_solution("x\n", m), ParseError);
  EXPECT_THROW(parse_solution("x abc\n", m), ParseError);
  EXPECT_THROW(parse_solution("x 1\nx 2\n", m), ParseError);
  try {
    parse_solution("x 1\n\ngarbage\n", m);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_DOUBLE_EQ(parse_solution("x 2 # trailing comment\n", m).values[0], 2.0);
}

TEST(ExternalBackend, ConfigChecks) {
  SolverConfig c;
  EXPECT_THROW(ExternalCommandBackend{c}, ConfigError);
  c.command = "solver {model}";
  EXPECT_THROW(ExternalCommandBackend{c}, ConfigError);
  c.command = "solver {model} {solution}";
  c.timeout_s = 0.0;
  EXPECT_THROW(ExternalCommandBackend{c}, ConfigError);
}

TEST(ExternalBackend, FailuresRaiseSolverError) {
  SolverConfig c;
  c.timeout_s = 5.0;
  c.command = "false {model} {solution}";
  EXPECT_THROW(ExternalCommandBackend(c).solve(toy()), SolverError);
  c.command = "true {model} {solution}";
  EXPECT_THROW(ExternalCommandBackend(c).solve(toy()), SolverError);
  c.command = "echo '# status infeasible' > {solution}; echo {model}";
  EXPECT_THROW(ExternalCommandBackend(c).solve(toy()), SolverError);
  c.command = "echo 'x 12' > {solution}; echo {model}";
  EXPECT_THROW(ExternalCommandBackend(c).solve(toy()), SolverError);
}

TEST(ExternalBackend, Timeout) {
  SolverConfig c;
  c.timeout_s = 0.3;
  c.command = "sleep 10; echo {model} {solution}";
  const auto t0 = std::chrono::steady_clock::now();
  EXPECT_THROW(ExternalCommandBackend(c).solve(toy()), SolverError);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 5.0);
}

TEST(ExternalBackend, ShellStubRoundTrip) {
  SolverConfig c;
  c.timeout_s = 5.0;
  c.command = "printf '# status optimal\\n# objective 1\\nx 1\\n' > {solution}; test -s {model}";
  const auto r = ExternalCommandBackend(c).solve(toy());
  EXPECT_DOUBLE_EQ(r.solution.values[0], 1.0);
}

TEST(ExternalBackend, ToyChanceRoundTrip) {
  CIES_REQUIRE_SOLVER();
  ModelIR m;
  const int r = m.add_var("r", 0.0, 100.0);
  LinExpr reserve;
  reserve.add(r, 1.0);
  const ProbSeq c(10.0, {0.2, 0.3, 0.5});
  build_chance_rows(m, "t1", {c, expectation(c), 100.0, 0.9}, reserve);
  m.objective().add(r, 2.5).add(4.0);
  const auto res = test::solve(m);
  ASSERT_TRUE(res.solution.reported_objective.has_value());
  EXPECT_NEAR(m.objective().evaluate(res.solution.values), *res.solution.reported_objective, 1e-6);
  EXPECT_NEAR(*res.solution.reported_objective, 2.5 * 13.0 + 4.0, 1e-6);
}
