#pragma once

// Solver backends. The reference backend runs a configured command on an LP
// file and reads back `name value` lines.

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include "cies/config.hpp"
#include "cies/errors.hpp"
#include "cies/lp_format.hpp"
#include "cies/model_ir.hpp"

namespace cies {

struct SolverCapabilities {
  std::string name;
  bool partial_output = false;
};

struct SolveResult {
  SolutionValues solution;
  std::string log;
  double wall_seconds = 0.0;
};

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual SolverCapabilities capabilities() const = 0;
  virtual SolveResult solve(const ModelIR& m) = 0;
};

namespace solver_detail {

inline std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

inline std::string shell_quote(const std::string& s) {
  return "'" + replace_all(s, "'", "'\\''") + "'";
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::filesystem::path make_temp_dir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "cies-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw SolverError("cannot create temporary directory");
  return tmpl;
}

struct ExitInfo {
  int code = -1;
  bool timed_out = false;
};

// Runs `command` through /bin/sh in its own process group with stdout and
// stderr redirected to `log`; kills the group after `timeout_s`.
inline ExitInfo run_command(const std::string& command, const std::filesystem::path& log, double timeout_s) {
  const pid_t pid = fork();
  if (pid < 0) throw SolverError("fork failed");
  if (pid == 0) {
    setpgid(0, 0);
    const std::string full = command + " >" + shell_quote(log.string()) + " 2>&1";
    execl("/bin/sh", "sh", "-c", full.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
  ExitInfo info;
  int status = 0;
  auto pause = std::chrono::milliseconds(1);
  for (;;) {
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0) throw SolverError("waitpid failed");
    if (std::chrono::steady_clock::now() > deadline) {
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      info.timed_out = true;
      return info;
    }
    std::this_thread::sleep_for(pause);
    pause = std::min(pause * 2, std::chrono::milliseconds(50));
  }
  info.code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return info;
}

}  // namespace solver_detail

/// Backend driven by a command template with `{model}` and `{solution}`
/// placeholders, e.g. `highs_solve.py {model} {solution}`.
class ExternalCommandBackend : public SolverBackend {
 public:
  explicit ExternalCommandBackend(SolverConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.command.empty()) throw ConfigError("no solver command configured");
    if (cfg_.command.find("{model}") == std::string::npos ||
        cfg_.command.find("{solution}") == std::string::npos) {
      throw ConfigError("solver command needs {model} and {solution} placeholders");
    }
    if (!(cfg_.timeout_s > 0.0)) throw ConfigError("solver timeout must be positive");
  }

  SolverCapabilities capabilities() const override { return {cfg_.command, cfg_.partial_output}; }

  SolveResult solve(const ModelIR& m) override {
    namespace fs = std::filesystem;
    using solver_detail::shell_quote;
    const fs::path dir = solver_detail::make_temp_dir();
    const fs::path model = dir / "model.lp";
    const fs::path solution = dir / "solution.txt";
    const fs::path log = dir / "solver.log";
    struct Cleanup {
      fs::path dir;
      bool keep;
      ~Cleanup() {
        std::error_code ec;
        if (!keep) fs::remove_all(dir, ec);
      }
    } cleanup{dir, cfg_.keep_files};

    {
      std::ofstream out(model);
      out << export_lp(m);
      if (!out) throw SolverError("cannot write model file " + model.string());
    }
    std::string cmd = solver_detail::replace_all(cfg_.command, "{model}", shell_quote(model.string()));
    cmd = solver_detail::replace_all(cmd, "{solution}", shell_quote(solution.string()));

    SolveResult res;
    const auto t0 = std::chrono::steady_clock::now();
    const auto info = solver_detail::run_command(cmd, log, cfg_.timeout_s);
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.log = solver_detail::read_file(log);
    if (info.timed_out) {
      throw SolverError("solver timed out after " + std::to_string(cfg_.timeout_s) + " s\n" + res.log);
    }
    if (info.code != 0) {
      throw SolverError("solver exited with code " + std::to_string(info.code) + "\n" + res.log);
    }
    if (!fs::exists(solution)) throw SolverError("solver wrote no solution file\n" + res.log);
    SolutionParseOptions popt;
    popt.partial_output = cfg_.partial_output;
    popt.integrality_tol = cfg_.integrality_tol;
    popt.feasibility_tol = cfg_.feasibility_tol;
    try {
      res.solution = parse_solution(solver_detail::read_file(solution), m, popt);
    } catch (const ParseError& e) {
      throw SolverError(std::string("unreadable solution: ") + e.what());
    }
    const auto& st = res.solution.status;
    if (!st.empty() && st != "optimal") {
      throw SolverError("solver status '" + st + "'\n" + res.log);
    }
    return res;
  }

 private:
  SolverConfig cfg_;
};

}  // namespace cies
