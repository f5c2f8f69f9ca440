#pragma once

// Constraint-by-constraint recheck of a schedule on raw values.

#include <cmath>
#include <string>
#include <vector>

#include "cies/ccp.hpp"
#include "cies/config.hpp"
#include "cies/demand.hpp"
#include "cies/devices.hpp"
#include "cies/schedule.hpp"
#include "cies/violation.hpp"

namespace cies {

struct AuditOptions {
  double tol = 1e-6;
  // false: R_t >= min_reserve - q (lattice slack); true: R_t >= min_reserve.
  bool strict_reserve = false;
};

inline ViolationList audit_feasibility(const ScheduleSolution& s, const ScenarioData& d,
                                       const AuditOptions& opt = {}) {
  const auto& c = d.cfg;
  const auto& dev = c.devices;
  const int T = c.periods;
  const double dt = c.dt;
  const double tol = opt.tol;
  ViolationList out;

  if (s.periods != T) {
    out.push_back({"horizon", 0, std::fabs(double(s.periods - T)), "schedule length differs from config"});
    return out;
  }
  auto eq = [&](const char* name, int t, double lhs, double rhs) {
    const double r = lhs - rhs;
    if (std::fabs(r) > tol) out.push_back({name, t + 1, std::fabs(r), "residual " + std::to_string(r)});
  };
  auto le = [&](const char* name, int t, double lhs, double rhs) {
    if (lhs > rhs + tol) out.push_back({name, t + 1, lhs - rhs, "exceeds limit"});
  };

  // Sign conditions on nonnegative symbols.
  for (const auto& [name, member] : ScheduleSolution::period_fields()) {
    const std::string n = name;
    if (n == "p_tse" || n == "q_tsq") continue;
    const auto& v = s.*member;
    for (int t = 0; t < T; ++t) {
      if (v[t] < -tol) out.push_back({n + "_sign", t + 1, -v[t], "negative value"});
    }
  }

  for (int t = 0; t < T; ++t) {
    const auto& ru = d.renewables[t];
    eq("bal_e", t, s.pg_el[t] + s.prg_el[t] + s.esd_dc[t] + s.p_mt[t],
       c.loads.p0[t] + s.p_tse[t] - s.p_ie[t] + s.ev_load[t] + s.esd_ch[t]);
    eq("bal_h", t, s.h_eb[t] + s.hsd_dc[t] - s.hsd_ch[t] + s.h_mt[t], d.h0[t] - s.h_ch[t]);
    eq("bal_q", t, s.q_gl[t] + s.q_p2g[t] - s.q_mt[t], c.loads.q0[t] + s.q_tsq[t] - s.q_iq[t]);
    eq("alloc_rg", t, s.prg_el[t] + s.prg_hl[t] + s.prg_p2g[t] + s.ps[t], ru.expected);
    eq("eb_in", t, s.p_eb[t], s.pg_hl[t] + s.prg_hl[t]);
    eq("eb_out", t, s.h_eb[t], dev.eb.eta * s.p_eb[t]);
    eq("p2g_in", t, s.p_p2g[t], s.pg_p2g[t] + s.prg_p2g[t]);
    eq("p2g_out", t, s.q_p2g[t], dev.p2g.eta * s.p_p2g[t] / dev.p2g.hhv);
    eq("mt_split", t, s.q_mt[t], s.q_mt_g[t] + s.q_mt_p2g[t]);
    le("mt_p2g", t, s.q_mt_p2g[t], s.q_p2g[t]);
    le("mt_grid", t, s.q_mt_g[t], s.q_gl[t]);
    eq("mt_pe", t, s.p_mt[t], dev.mt.eta_e * s.q_mt[t] * dev.mt.hhv);
    eq("mt_he", t, s.h_mt[t], dev.mt.eta_h() * s.q_mt[t] * dev.mt.hhv);
    le("gas_cap", t, s.q_gl[t], c.q_grid_max);
    le("grid_cap", t, s.pg_el[t] + s.pg_hl[t] + s.r_grid[t], c.p_grid_max);
    le("esd_rsoc", t, s.r_esd[t], dev.esd.eta_dc * (s.esd_c[t] - dev.esd.c_min) / dt);
    le("esd_rpow", t, s.r_esd[t], dev.esd.p_dc_max - s.esd_dc[t]);
    le("heat_shed", t, s.h_ch[t], d.h0[t]);

    if (!c.coupling_enabled()) {
      le("p2g_disabled", t, std::fabs(s.p_p2g[t]) + std::fabs(s.pg_p2g[t]) + std::fabs(s.prg_p2g[t]), 0.0);
      le("mt_disabled", t, std::fabs(s.q_mt[t]), 0.0);
    }
    if (!c.idr_enabled()) {
      le("idr_disabled", t,
         std::fabs(s.p_tse[t]) + std::fabs(s.p_ie[t]) + std::fabs(s.q_tsq[t]) + std::fabs(s.q_iq[t]) +
             std::fabs(s.h_ch[t]),
         0.0);
    }

    // Thermal recursion and comfort band.
    const double next = indoor_temp_step(s.t_in[t], c.loads.t_out[t], d.h0[t] - s.h_ch[t], c.building, dt);
    eq("thermal", t, s.t_in[t + 1], next);
    const auto band = comfort_band(static_cast<std::size_t>(t), c.comfort);
    if (s.t_in[t + 1] < band.first - tol) out.push_back({"comfort_lo", t + 1, band.first - s.t_in[t + 1], "below band"});
    if (s.t_in[t + 1] > band.second + tol) out.push_back({"comfort_hi", t + 1, s.t_in[t + 1] - band.second, "above band"});

    // Spinning reserve against the deterministic equivalent.
    const double need = min_reserve(ru.joint, c.alpha) - (opt.strict_reserve ? 0.0 : c.q);
    const double have = s.r_grid[t] + s.r_esd[t];
    if (have < need - tol) out.push_back({"reserve", t + 1, need - have, "below minimum reserve"});
  }
  if (std::fabs(s.t_in.front() - d.t_neutral) > tol) {
    out.push_back({"thermal_start", 0, std::fabs(s.t_in.front() - d.t_neutral), "initial indoor temperature"});
  }

  append(out, check_device_limits(s.devices(), dev, dt, tol));
  if (c.idr_enabled()) append(out, check_flex_bounds(c.loads, s.flex(), c.flex, tol));

  // EV charging.
  const auto& sessions = d.fleet.sessions;
  if (!c.idr_enabled()) {
    for (int t = 0; t < T; ++t) eq("ev_profile", t, s.ev_load[t], d.fleet.load[t]);
  } else {
    std::vector<double> expect(T, 0.0);
    for (std::size_t n = 0; n < sessions.size(); ++n) {
      const EvPlan plan = ev_plan(sessions[n], c.ev, dt, T);
      const auto& on = n < s.ev_on.size() ? s.ev_on[n] : std::vector<double>(T, 0.0);
      double count = 0.0;
      const std::string tag = "ev_" + std::to_string(sessions[n].ev_id);
      for (int t = 0; t < T; ++t) {
        const double x = on[t];
        if (std::fabs(x - std::round(x)) > tol || x < -tol || x > 1.0 + tol) {
          out.push_back({tag + "_state", t + 1, std::fabs(x - std::round(x)), "non-binary charging state"});
        }
        if (t < plan.first_period && x > tol) {
          out.push_back({tag + "_before_arrival", t + 1, x, "charging before arrival"});
        }
        count += x;
        expect[t] += plan.power_kw * x;
      }
      if (std::fabs(count - plan.periods) > tol) {
        out.push_back({tag + "_energy", 0, std::fabs(count - plan.periods), "charging periods differ from requirement"});
      }
    }
    for (int t = 0; t < T; ++t) {
      eq("ev_profile", t, s.ev_load[t], expect[t]);
      le("ev_station", t, s.ev_load[t], c.ev.p_station_max);
    }
  }
  return out;
}

}  // namespace cies
