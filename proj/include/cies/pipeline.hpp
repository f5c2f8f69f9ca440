#pragma once

// End-to-end run: configuration -> sequences -> model -> solve -> audit ->
// validation -> report files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cies/assemble.hpp"
#include "cies/audit.hpp"
#include "cies/config.hpp"
#include "cies/hia.hpp"
#include "cies/objective.hpp"
#include "cies/solver.hpp"
#include "cies/validate.hpp"

namespace cies {

struct MilpRun {
  ScenarioData data;
  AssembledModel model;
  ScheduleSolution schedule;
  CostBreakdown costs;
  SolveResult raw;
  ViolationList violations;
  double seconds = 0.0;  // assembly + solve + parse
};

/// Solves one configuration with the given backend and audits the result.
/// An objective that disagrees with the solver's report is recorded as a
/// violation.
inline MilpRun solve_milp(const CiesConfig& cfg, SolverBackend& backend, double audit_tol = 1e-6) {
  const auto t0 = std::chrono::steady_clock::now();
  MilpRun r;
  r.data = prepare(cfg);
  r.model = assemble_model(r.data);
  r.raw = backend.solve(r.model.model);
  r.schedule = extract_schedule(r.model, r.data, r.raw.solution.values);
  r.schedule.reported_objective = r.raw.solution.reported_objective;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.costs = evaluate_objective(r.schedule, cfg, r.data.renewables);
  r.violations = audit_feasibility(r.schedule, r.data, AuditOptions{audit_tol, false});
  if (r.raw.solution.reported_objective) {
    const double rep = *r.raw.solution.reported_objective;
    const double gap = std::fabs(rep - r.costs.total);
    if (gap > 1e-6 * (1.0 + std::fabs(rep))) {
      r.violations.push_back({"objective", 0, gap, "recomputed objective differs from solver report"});
    }
  }
  return r;
}

struct RunOptions {
  std::filesystem::path config;
  std::optional<double> alpha;
  std::optional<double> q;
  std::optional<int> scenario;
  std::vector<double> sweep_alpha;
  bool with_hia = false;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::string solver_cmd;
  std::filesystem::path out = "out";
  int mc_samples = 10000;
};

enum ExitCode { kExitOk = 0, kExitError = 1, kExitConfig = 2, kExitSolver = 3, kExitAudit = 4 };

namespace pipeline_detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);  // no "-0.000000"
  return buf;
}

using Column = std::pair<const char*, std::function<double(int)>>;

inline void write_table(const std::filesystem::path& path, const std::vector<Column>& cols, int rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "period";
  for (const auto& c : cols) os << ',' << c.first;
  os << '\n';
  for (int t = 0; t < rows; ++t) {
    os << t + 1;
    for (const auto& c : cols) os << ',' << fmt(c.second(t));
    os << '\n';
  }
}

inline nlohmann::json violations_json(const ViolationList& v) {
  auto arr = nlohmann::json::array();
  for (const auto& x : v) {
    arr.push_back({{"constraint", x.constraint}, {"period", x.period}, {"margin", x.margin}, {"detail", x.detail}});
  }
  return arr;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  os << j.dump(2) << '\n';
}

}  // namespace pipeline_detail

inline void write_dispatch(const std::filesystem::path& dir, const ScheduleSolution& s, const ScenarioData& d) {
  using pipeline_detail::write_table;
  const auto& l = d.cfg.loads;
  const int T = s.periods;
  write_table(dir / "dispatch_electric.csv",
              {{"grid_el_kw", [&](int t) { return s.pg_el[t]; }},
               {"renewable_el_kw", [&](int t) { return s.prg_el[t]; }},
               {"esd_discharge_kw", [&](int t) { return s.esd_dc[t]; }},
               {"mt_el_kw", [&](int t) { return s.p_mt[t]; }},
               {"load_kw", [&](int t) { return l.p0[t] + s.p_tse[t] - s.p_ie[t]; }},
               {"ev_kw", [&](int t) { return s.ev_load[t]; }},
               {"esd_charge_kw", [&](int t) { return s.esd_ch[t]; }},
               {"eb_in_kw", [&](int t) { return s.p_eb[t]; }},
               {"p2g_in_kw", [&](int t) { return s.p_p2g[t]; }},
               {"curtailment_kw", [&](int t) { return s.ps[t]; }},
               {"reserve_grid_kw", [&](int t) { return s.r_grid[t]; }},
               {"reserve_esd_kw", [&](int t) { return s.r_esd[t]; }},
               {"esd_capacity_kwh", [&](int t) { return s.esd_c[t + 1]; }}},
              T);
  write_table(dir / "dispatch_gas.csv",
              {{"grid_gas_m3", [&](int t) { return s.q_gl[t]; }},
               {"p2g_gas_m3", [&](int t) { return s.q_p2g[t]; }},
               {"mt_gas_m3", [&](int t) { return s.q_mt[t]; }},
               {"mt_from_grid_m3", [&](int t) { return s.q_mt_g[t]; }},
               {"mt_from_p2g_m3", [&](int t) { return s.q_mt_p2g[t]; }},
               {"load_m3", [&](int t) { return l.q0[t] + s.q_tsq[t] - s.q_iq[t]; }},
               {"shifted_m3", [&](int t) { return s.q_tsq[t]; }},
               {"interrupted_m3", [&](int t) { return s.q_iq[t]; }}},
              T);
  write_table(dir / "dispatch_heat.csv",
              {{"eb_heat_kw", [&](int t) { return s.h_eb[t]; }},
               {"hsd_discharge_kw", [&](int t) { return s.hsd_dc[t]; }},
               {"hsd_charge_kw", [&](int t) { return s.hsd_ch[t]; }},
               {"mt_heat_kw", [&](int t) { return s.h_mt[t]; }},
               {"baseline_heat_kw", [&](int t) { return d.h0[t]; }},
               {"heat_reduction_kw", [&](int t) { return s.h_ch[t]; }},
               {"indoor_temp_c", [&](int t) { return s.t_in[t + 1]; }},
               {"hsd_capacity_kwh", [&](int t) { return s.hsd_c[t + 1]; }}},
              T);
}

/// Executes the run described by `opt`; returns the process exit code and
/// prints diagnostics to `log`.
inline int run_pipeline(const RunOptions& opt, std::ostream& log) {
  namespace fs = std::filesystem;
  using pipeline_detail::write_json;
  CiesConfig cfg;
  try {
    cfg = load_config(opt.config);
    if (opt.alpha) cfg.alpha = *opt.alpha;
    if (opt.q) cfg.q = *opt.q;
    if (opt.scenario) cfg.scenario = *opt.scenario;
    if (opt.seed) cfg.seed = *opt.seed;
    if (!opt.solver_cmd.empty()) cfg.solver.command = opt.solver_cmd;
    for (double a : opt.sweep_alpha) {
      if (a < 0.0 || a > 1.0) throw ConfigError("sweep alpha outside [0, 1]");
    }
    if (opt.jobs < 1) throw ConfigError("--jobs must be at least 1");
    cfg.validate();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::error_code ec;
  fs::create_directories(opt.out, ec);
  if (ec) {
    log << "cannot create output directory " << opt.out << ": " << ec.message() << '\n';
    return kExitError;
  }

  auto solve = [&](const CiesConfig& c) {
    ExternalCommandBackend backend(c.solver);
    return solve_milp(c, backend);
  };

  MilpRun main;
  try {
    main = solve(cfg);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& e) {
    log << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
  log << "solved scenario " << cfg.scenario << " at alpha " << cfg.alpha << ": cost " << main.costs.total
      << " yuan in " << main.seconds << " s\n";

  nlohmann::json audit = {{"scenario", cfg.scenario},
                          {"alpha", cfg.alpha},
                          {"tolerance", 1e-6},
                          {"violations", pipeline_detail::violations_json(main.violations)}};
  write_json(opt.out / "audit.json", audit);
  if (!main.violations.empty()) {
    log << "audit found " << main.violations.size() << " violation(s); see audit.json\n";
    return kExitAudit;
  }

  McOptions mc;
  mc.n_samples = opt.mc_samples;
  mc.seed = cfg.seed;
  mc.jobs = opt.jobs;
  const auto report = scenario_report(main.schedule, main.data, mc);
  write_json(opt.out / "validation.json", to_json(report));
  {
    std::ofstream os(opt.out / "costs.csv");
    write_costs_csv(os, report);
  }
  {
    std::ofstream os(opt.out / "satisfaction.csv");
    write_satisfaction_csv(os, report);
  }
  write_dispatch(opt.out, main.schedule, main.data);

  // Alpha sweep: independent solves, at most `jobs` at a time.
  std::vector<MilpRun> sweep(opt.sweep_alpha.size());
  if (!opt.sweep_alpha.empty()) {
    std::vector<std::string> errors(sweep.size());
    std::size_t next = 0;
    std::mutex mu;
    auto worker = [&]() {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (next >= sweep.size()) return;
          i = next++;
        }
        CiesConfig c = cfg;
        c.alpha = opt.sweep_alpha[i];
        try {
          sweep[i] = solve(c);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    const int workers = std::min<int>(opt.jobs, static_cast<int>(sweep.size()));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      if (!errors[i].empty()) {
        log << "solver failure at alpha " << opt.sweep_alpha[i] << ": " << errors[i] << '\n';
        return kExitSolver;
      }
    }
    std::ofstream os(opt.out / "reserve_sweep.csv");
    os << "alpha,total_reserve_kw,total_cost_yuan,violations\n";
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      double reserve = 0.0;
      for (double r : sweep[i].schedule.total_reserve()) reserve += r;
      os << opt.sweep_alpha[i] << ',' << pipeline_detail::fmt(reserve) << ','
         << pipeline_detail::fmt(sweep[i].costs.total) << ','
         << sweep[i].violations.size() << '\n';
    }
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      if (!sweep[i].violations.empty()) {
        audit["sweep_violations"][std::to_string(opt.sweep_alpha[i])] =
            pipeline_detail::violations_json(sweep[i].violations);
      }
    }
    if (audit.contains("sweep_violations")) {
      write_json(opt.out / "audit.json", audit);
      log << "sweep audit found violations; see audit.json\n";
      return kExitAudit;
    }
  }

  if (opt.with_hia) {
    std::vector<MethodRun> milp_runs, hia_runs;
    const std::vector<double> alphas = opt.sweep_alpha.empty() ? std::vector<double>{cfg.alpha} : opt.sweep_alpha;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      const MilpRun& m = opt.sweep_alpha.empty() ? main : sweep[i];
      milp_runs.push_back({alphas[i], m.costs.total, m.seconds});
      ScenarioData d = m.data;
      d.cfg.alpha = alphas[i];
      try {
        const auto h = hia_solve(d, alphas[i], cfg.hia, 1);
        hia_runs.push_back({alphas[i], h.cost, h.wall_seconds});
        log << "hia at alpha " << alphas[i] << ": cost " << h.cost << " yuan in " << h.wall_seconds << " s\n";
      } catch (const SearchFailure& e) {
        log << e.what() << '\n';
        return kExitSolver;
      }
    }
    std::ofstream os(opt.out / "comparison.csv");
    write_comparison_csv(os, compare_methods(milp_runs, hia_runs));
  }
  return kExitOk;
}

}  // namespace cies
