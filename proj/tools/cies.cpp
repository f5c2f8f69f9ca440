// Command-line front end: `cies run CONFIG [flags]`.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cies/pipeline.hpp"

#ifndef CIES_DEFAULT_SOLVER_CMD
#define CIES_DEFAULT_SOLVER_CMD ""
#endif

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Day-ahead scheduling of a community integrated energy system"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "Solve, audit and report one scenario configuration");

  cies::RunOptions opt;
  std::string config, sweep, out = "out";
  double alpha = 0.0, q = 0.0;
  int scenario = 0;
  std::uint64_t seed = 0;
  run->add_option("config", config, "Scenario configuration (JSON)")->required();
  auto* a_opt = run->add_option("--alpha", alpha, "Reserve confidence level in [0, 1]");
  auto* q_opt = run->add_option("--q", q, "Discretization step (kW)");
  auto* s_opt = run->add_option("--scenario", scenario, "1: baseline, 2: with IDR, 3: with IDR and P2G/MT")
                    ->check(CLI::IsMember({1, 2, 3}));
  run->add_option("--sweep-alpha", sweep, "Comma-separated confidence levels for the reserve sweep");
  run->add_flag("--with-hia", opt.with_hia, "Also run the particle swarm baseline and compare");
  run->add_option("--jobs", opt.jobs, "Parallel sweep jobs")->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Random seed for the EV fleet and validation");
  run->add_option("--solver-cmd", opt.solver_cmd, "Solver command template with {model} and {solution}");
  run->add_option("--out", out, "Output directory");
  run->add_option("--mc-samples", opt.mc_samples, "Monte Carlo samples per period")->check(CLI::Range(1000, 100000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cies::kExitConfig;
  }

  opt.config = config;
  opt.out = out;
  if (*a_opt) opt.alpha = alpha;
  if (*q_opt) opt.q = q;
  if (*s_opt) opt.scenario = scenario;
  if (*seed_opt) opt.seed = seed;
  if (!sweep.empty()) {
    try {
      opt.sweep_alpha = parse_list(sweep);
    } catch (const std::exception&) {
      std::cerr << "config error: --sweep-alpha expects numbers separated by commas\n";
      return cies::kExitConfig;
    }
  }
  if (opt.solver_cmd.empty()) {
    if (const char* env = std::getenv("CIES_SOLVER_CMD")) opt.solver_cmd = env;
  }
  // The config's own solver command wins over the build default.
  std::string fallback = CIES_DEFAULT_SOLVER_CMD;
  try {
    if (opt.solver_cmd.empty() && cies::load_config(opt.config).solver.command.empty()) opt.solver_cmd = fallback;
  } catch (const cies::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cies::kExitConfig;
  }
  try {
    return cies::run_pipeline(opt, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cies::kExitError;
  }
}
