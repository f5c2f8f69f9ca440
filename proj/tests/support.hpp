#pragma once

#include <cstdlib>
#include <string>

#include "cies/config.hpp"
#include "cies/model_ir.hpp"
#include "cies/solver.hpp"

namespace cies::test {

inline std::string solver_command() {
  if (const char* env = std::getenv("CIES_SOLVER_CMD")) return env;
  return CIES_TEST_SOLVER_CMD;
}

inline bool have_solver() { return !solver_command().empty(); }

inline std::string data_path(const std::string& file) { return std::string(CIES_TEST_DATA_DIR) + "/" + file; }

inline CiesConfig bundled_config() { return load_config(data_path("scenario3.json")); }

inline SolverConfig solver_config(double timeout_s = 600.0) {
  SolverConfig c;
  c.command = solver_command();
  c.timeout_s = timeout_s;
  return c;
}

inline SolveResult solve(const ModelIR& m, double timeout_s = 600.0) {
  ExternalCommandBackend backend(solver_config(timeout_s));
  return backend.solve(m);
}

}  // namespace cies::test

#define CIES_REQUIRE_SOLVER() \
  if (!::cies::test::have_solver()) GTEST_SKIP() << "no solver command configured"
