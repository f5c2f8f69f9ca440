#pragma once

// Scenario configuration: one JSON document, units carried in field names.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cies/demand.hpp"
#include "cies/devices.hpp"
#include "cies/errors.hpp"
#include "cies/evfleet.hpp"
#include "cies/uncertainty.hpp"

namespace cies {

struct Pollutant {
  std::string name;
  double penalty = 0.0;   // yuan/kg
  double mu_elec = 0.0;   // kg/kWh of purchased electricity (and grid reserve)
  double mu_gas = 0.0;    // kg/kWh of purchased gas energy
  double mu_p2g = 0.0;    // kg absorbed per kWh fed to P2G
};

struct MaintenanceCosts {  // yuan/kWh
  double pv = 0.025, wt = 0.025, eb = 0.032, esd = 0.002, hsd = 0.005, p2g = 0.007, mt = 0.012;
};

struct CompensationCosts {
  double ie = 0.5, tse = 0.3, ch = 0.4;  // yuan/kWh
  double iq = 3.5, tsq = 0.7;            // yuan/m3
};

struct CostParams {
  std::vector<double> reserve_grid;  // yuan/kWh per period
  double reserve_esd = 0.14;
  MaintenanceCosts maintenance;
  CompensationCosts compensation;
  std::vector<Pollutant> pollutants;
};

struct SolverConfig {
  std::string command;  // template with {model} and {solution}
  double timeout_s = 300.0;
  double integrality_tol = 1e-5;
  double feasibility_tol = 1e-6;
  bool partial_output = false;
  bool keep_files = false;
};

struct PsoParams {
  int population = 100;
  int iterations = 200;
  double inertia_start = 0.9;
  double inertia_end = 0.4;
  double cognitive = 2.0;
  double social = 2.0;
  int mc_samples = 1000;
  std::uint64_t seed = 7;

  void validate() const {
    if (population < 2) throw ParameterError("pso: population must be at least 2");
    if (iterations < 1) throw ParameterError("pso: need at least one iteration");
    if (!(cognitive > 0.0) || !(social > 0.0) || !(inertia_start > 0.0) || !(inertia_end > 0.0)) {
      throw ParameterError("pso: coefficients must be positive");
    }
    if (mc_samples < 100) throw ParameterError("pso: mc_samples must be at least 100");
  }
};

struct CiesConfig {
  std::string label;
  int periods = 24;
  double dt = 1.0;  // h

  WindPowerModel wind;
  std::vector<double> wind_scale;  // per-period Weibull scale (m/s)
  PvPowerModel pv;
  std::vector<double> pv_p_max;    // per-period PV ceiling (kW); 0 at night

  EvFleetSpec ev;
  LoadProfiles loads;
  FlexRatios flex;
  BuildingThermal building;
  ComfortParams comfort;
  DeviceSpecs devices;

  double p_grid_max = 1000.0;  // kW
  double q_grid_max = 80.0;    // m3 per period

  CostParams costs;
  double alpha = 0.9;
  double q = 5.0;  // kW
  int scenario = 3;
  std::uint64_t seed = 42;
  SolverConfig solver;
  PsoParams hia;

  bool idr_enabled() const { return scenario >= 2; }
  bool coupling_enabled() const { return scenario >= 3; }

  /// Reserve the grid and ESD could pledge at most.
  double reserve_max() const { return p_grid_max + devices.esd.p_dc_max; }

  void validate() const {
    if (periods <= 0 || !(dt > 0.0)) throw ConfigError("horizon must have positive length");
    if (scenario < 1 || scenario > 3) throw ConfigError("scenario must be 1, 2 or 3");
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must lie in [0, 1]");
    if (!(q > 0.0)) throw ConfigError("q must be positive");
    const auto n = static_cast<std::size_t>(periods);
    if (wind_scale.size() != n || pv_p_max.size() != n) {
      throw ConfigError("wind/pv profiles must have one entry per period");
    }
    if (costs.reserve_grid.size() != n) throw ConfigError("grid reserve price needs one entry per period");
    try {
      wind.validate();
      pv.validate();
      ev.validate();
      loads.validate(n);
      flex.validate();
      building.validate();
      comfort.validate(n);
      devices.eb.validate();
      devices.esd.validate();
      devices.hsd.validate();
      devices.p2g.validate();
      devices.mt.validate();
      hia.validate();
    } catch (const ParameterError& e) {
      throw ConfigError(e.what());
    }
    if (!(q < wind.p_rated)) throw ConfigError("q must be below the rated wind power");
    for (std::size_t t = 0; t < n; ++t) {
      if (!(wind_scale[t] > 0.0)) throw ConfigError("wind scale must be positive");
      if (pv_p_max[t] < 0.0 || (pv_p_max[t] > 0.0 && !(pv_p_max[t] > q))) {
        throw ConfigError("per-period PV ceiling must be 0 or exceed q");
      }
    }
    if (!(p_grid_max > 0.0) || !(q_grid_max >= 0.0)) throw ConfigError("grid limits invalid");
  }
};

namespace config_detail {

using nlohmann::json;

template <typename T>
void get(const json& j, const char* key, T& into) {
  if (auto it = j.find(key); it != j.end()) into = it->get<T>();
}

inline std::vector<double> profile(const json& j, const char* key, std::size_t n, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return std::vector<double>(n, fallback);
  if (it->is_number()) return std::vector<double>(n, it->get<double>());
  auto v = it->get<std::vector<double>>();
  if (v.size() != n) throw ConfigError(std::string("profile '") + key + "' has wrong length");
  return v;
}

inline const json& section(const json& j, const char* key) {
  static const json empty = json::object();
  auto it = j.find(key);
  return it == j.end() ? empty : *it;
}

inline void read_storage(const json& j, StorageSpec& s) {
  get(j, "c_min_kwh", s.c_min);
  get(j, "c_max_kwh", s.c_max);
  get(j, "p_ch_max_kw", s.p_ch_max);
  get(j, "p_dc_max_kw", s.p_dc_max);
  get(j, "eta_ch", s.eta_ch);
  get(j, "eta_dc", s.eta_dc);
  get(j, "k_loss", s.k_loss);
}

}  // namespace config_detail

inline CiesConfig config_from_json(const nlohmann::json& j) {
  using namespace config_detail;
  CiesConfig c;
  c.devices.hsd = StorageSpec{0.0, 160.0, 60.0, 60.0, 1.0, 1.0, 0.01};
  try {
    get(j, "label", c.label);
    const auto& hz = section(j, "horizon");
    get(hz, "periods", c.periods);
    get(hz, "dt_h", c.dt);
    if (c.periods <= 0) throw ConfigError("horizon.periods must be positive");
    const auto n = static_cast<std::size_t>(c.periods);
    get(j, "scenario", c.scenario);
    get(j, "alpha", c.alpha);
    get(j, "q_kw", c.q);
    get(j, "seed", c.seed);

    const auto& w = section(j, "wind");
    get(w, "scale_mps", c.wind.scale);
    get(w, "shape", c.wind.shape);
    get(w, "v_in_mps", c.wind.v_in);
    get(w, "v_rated_mps", c.wind.v_r);
    get(w, "p_rated_kw", c.wind.p_rated);
    c.wind_scale = profile(w, "scale_profile_mps", n, c.wind.scale);

    const auto& pv = section(j, "pv");
    get(pv, "lambda1", c.pv.lambda1);
    get(pv, "lambda2", c.pv.lambda2);
    get(pv, "p_max_kw", c.pv.p_max);
    c.pv_p_max = profile(pv, "p_max_profile_kw", n, c.pv.p_max);

    const auto& ev = section(j, "ev");
    get(ev, "count", c.ev.n_evs);
    get(ev, "w_100_kwh", c.ev.w_100);
    get(ev, "c_max_kwh", c.ev.c_max);
    get(ev, "c_min_kwh", c.ev.c_min);
    get(ev, "p_ch_rated_kw", c.ev.p_ch_rated);
    get(ev, "eta_ch", c.ev.eta_ch);
    get(ev, "s_expected", c.ev.s_expected);
    get(ev, "p_station_max_kw", c.ev.p_station_max);
    get(ev, "return_mean_h", c.ev.mu_s);
    get(ev, "return_std_h", c.ev.sigma_s);
    get(ev, "log_mileage_mean", c.ev.mu_d);
    get(ev, "log_mileage_std", c.ev.sigma_d);

    const auto& ld = section(j, "loads");
    c.loads.p0 = profile(ld, "p0_kw", n, 0.0);
    c.loads.q0 = profile(ld, "q0_m3", n, 0.0);
    c.loads.t_out = profile(ld, "t_out_c", n, 0.0);
    c.loads.price_elec = profile(ld, "price_elec_yuan_per_kwh", n, 0.0);
    c.loads.price_gas = profile(ld, "price_gas_yuan_per_m3", n, 0.0);

    const auto& fx = section(j, "flex");
    get(fx, "a_tse", c.flex.a_tse);
    get(fx, "a_ie", c.flex.a_ie);
    get(fx, "a_tsq", c.flex.a_tsq);
    get(fx, "a_iq", c.flex.a_iq);

    const auto& b = section(j, "building");
    get(b, "k_w_per_m2c", c.building.k_ht);
    get(b, "area_m2", c.building.f_area);
    get(b, "volume_m3", c.building.volume);
    get(b, "c_air_kj_per_kgc", c.building.c_air);
    get(b, "rho_air_kg_per_m3", c.building.rho_air);

    const auto& cf = section(j, "comfort");
    get(cf, "metabolic_w_per_m2", c.comfort.m_met);
    get(cf, "clothing_m2c_per_w", c.comfort.i_cl);
    get(cf, "skin_temp_c", c.comfort.t_skin);
    if (cf.contains("pmv_limit_profile")) {
      c.comfort.pmv_limit = profile(cf, "pmv_limit_profile", n, 0.5);
    } else {
      c.comfort.pmv_limit = ComfortParams::default_pmv_schedule(c.periods, c.dt);
    }

    const auto& eb = section(j, "eb");
    get(eb, "eta", c.devices.eb.eta);
    get(eb, "h_max_kw", c.devices.eb.h_max);
    read_storage(section(j, "esd"), c.devices.esd);
    read_storage(section(j, "hsd"), c.devices.hsd);

    double hhv = 9.7;
    get(j, "gas_hhv_kwh_per_m3", hhv);
    c.devices.p2g.hhv = hhv;
    c.devices.mt.hhv = hhv;
    const auto& p2g = section(j, "p2g");
    get(p2g, "p_min_kw", c.devices.p2g.p_min);
    get(p2g, "p_max_kw", c.devices.p2g.p_max);
    get(p2g, "ramp_min_kw", c.devices.p2g.ramp_min);
    get(p2g, "ramp_max_kw", c.devices.p2g.ramp_max);
    get(p2g, "eta", c.devices.p2g.eta);
    const auto& mt = section(j, "mt");
    get(mt, "q_min_m3", c.devices.mt.q_min);
    get(mt, "q_max_m3", c.devices.mt.q_max);
    get(mt, "ramp_min_m3", c.devices.mt.ramp_min);
    get(mt, "ramp_max_m3", c.devices.mt.ramp_max);
    get(mt, "eta_e", c.devices.mt.eta_e);
    get(mt, "eta_loss", c.devices.mt.eta_loss);

    const auto& g = section(j, "grid");
    get(g, "p_max_kw", c.p_grid_max);
    get(g, "q_max_m3", c.q_grid_max);

    const auto& co = section(j, "costs");
    c.costs.reserve_grid = profile(co, "reserve_grid_yuan_per_kwh", n, 0.2);
    get(co, "reserve_esd_yuan_per_kwh", c.costs.reserve_esd);
    const auto& mn = section(co, "maintenance_yuan_per_kwh");
    get(mn, "pv", c.costs.maintenance.pv);
    get(mn, "wt", c.costs.maintenance.wt);
    get(mn, "eb", c.costs.maintenance.eb);
    get(mn, "esd", c.costs.maintenance.esd);
    get(mn, "hsd", c.costs.maintenance.hsd);
    get(mn, "p2g", c.costs.maintenance.p2g);
    get(mn, "mt", c.costs.maintenance.mt);
    const auto& cp = section(co, "compensation");
    get(cp, "ie_yuan_per_kwh", c.costs.compensation.ie);
    get(cp, "tse_yuan_per_kwh", c.costs.compensation.tse);
    get(cp, "ch_yuan_per_kwh", c.costs.compensation.ch);
    get(cp, "iq_yuan_per_m3", c.costs.compensation.iq);
    get(cp, "tsq_yuan_per_m3", c.costs.compensation.tsq);
    if (auto it = co.find("pollutants"); it != co.end()) {
      for (const auto& p : *it) {
        Pollutant pol;
        get(p, "name", pol.name);
        get(p, "penalty_yuan_per_kg", pol.penalty);
        get(p, "mu_elec_kg_per_kwh", pol.mu_elec);
        get(p, "mu_gas_kg_per_kwh", pol.mu_gas);
        get(p, "mu_p2g_kg_per_kwh", pol.mu_p2g);
        c.costs.pollutants.push_back(pol);
      }
    }

    const auto& s = section(j, "solver");
    get(s, "command", c.solver.command);
    get(s, "timeout_s", c.solver.timeout_s);
    get(s, "integrality_tol", c.solver.integrality_tol);
    get(s, "feasibility_tol", c.solver.feasibility_tol);
    get(s, "partial_output", c.solver.partial_output);

    const auto& h = section(j, "hia");
    get(h, "population", c.hia.population);
    get(h, "iterations", c.hia.iterations);
    get(h, "inertia_start", c.hia.inertia_start);
    get(h, "inertia_end", c.hia.inertia_end);
    get(h, "cognitive", c.hia.cognitive);
    get(h, "social", c.hia.social);
    get(h, "mc_samples", c.hia.mc_samples);
    get(h, "seed", c.hia.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline CiesConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

/// Per-period renewable sequences and their expectations.
struct PeriodUncertainty {
  ProbSeq wt;
  ProbSeq pv;
  ProbSeq joint;
  double e_wt = 0.0;
  double e_pv = 0.0;
  double expected = 0.0;
};

/// Everything the model needs besides the configuration itself: discretized
/// renewable sequences, the EV fleet draw and the baseline heat load.
struct ScenarioData {
  CiesConfig cfg;
  std::vector<PeriodUncertainty> renewables;
  FleetSimulation fleet;
  std::vector<double> h0;
  double t_neutral = 0.0;
};

inline std::vector<PeriodUncertainty> build_sequences(const CiesConfig& cfg) {
  std::vector<PeriodUncertainty> out;
  out.reserve(cfg.periods);
  for (int t = 0; t < cfg.periods; ++t) {
    PeriodUncertainty pu;
    WindPowerModel wm = cfg.wind;
    wm.scale = cfg.wind_scale[t];
    pu.wt = discretize(wt_distribution(wm), cfg.q);
    if (cfg.pv_p_max[t] > 0.0) {
      PvPowerModel pm = cfg.pv;
      pm.p_max = cfg.pv_p_max[t];
      pu.pv = discretize(pv_distribution(pm), cfg.q);
    } else {
      pu.pv = ProbSeq::degenerate(cfg.q);
    }
    pu.joint = convolve(pu.pv, pu.wt);
    pu.e_wt = expectation(pu.wt);
    pu.e_pv = expectation(pu.pv);
    pu.expected = expectation(pu.joint);
    out.push_back(std::move(pu));
  }
  return out;
}

inline FleetSimulation build_fleet(const CiesConfig& cfg) {
  return simulate_fleet(cfg.ev, cfg.seed, cfg.dt, cfg.periods);
}

inline ScenarioData prepare(const CiesConfig& cfg) {
  cfg.validate();
  ScenarioData d;
  d.cfg = cfg;
  d.renewables = build_sequences(cfg);
  d.fleet = build_fleet(cfg);
  d.t_neutral = neutral_temperature(cfg.comfort);
  d.h0.resize(cfg.periods);
  for (int t = 0; t < cfg.periods; ++t) {
    d.h0[t] = baseline_heat_demand(d.t_neutral, cfg.loads.t_out[t], cfg.building);
  }
  return d;
}

}  // namespace cies
