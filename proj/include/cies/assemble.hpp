#pragma once

// Builds the day-ahead scheduling MILP for one scenario and maps solver values
// back onto a ScheduleSolution.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "cies/ccp.hpp"
#include "cies/config.hpp"
#include "cies/lp_format.hpp"
#include "cies/model_ir.hpp"
#include "cies/schedule.hpp"

namespace cies {

struct AssembledModel {
  ModelIR model;
  std::map<std::string, std::vector<int>> ids;  // ScheduleSolution field -> var id per entry
  std::vector<std::vector<int>> ev_on;          // per session, per period (-1: not schedulable)
  std::vector<EvPlan> plans;
  std::vector<double> ev_fixed;                 // disorderly load used when EVs are not scheduled
  std::vector<ChanceRowSet> chance;
  double objective_constant = 0.0;

  std::size_t chance_binaries() const {
    std::size_t n = 0;
    for (const auto& c : chance) n += c.indicators.size();
    return n;
  }
};

namespace assemble_detail {

inline std::string vname(const char* base, int index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%d", base, index);
  return buf;
}

}  // namespace assemble_detail

/// Aggregate-bound screen run before assembly; throws ConfigError when some
/// period cannot be balanced whatever the dispatch.
inline void feasibility_precheck(const ScenarioData& d) {
  const auto& c = d.cfg;
  const auto& dev = c.devices;
  for (int t = 0; t < c.periods; ++t) {
    const double flex_cut = c.idr_enabled() ? (c.flex.a_tse + c.flex.a_ie) : 0.0;
    double min_elec = c.loads.p0[t] * (1.0 - flex_cut);
    if (!c.idr_enabled()) min_elec += d.fleet.load[t];
    const double max_elec = c.p_grid_max + d.renewables[t].expected + dev.esd.p_dc_max +
                            (c.coupling_enabled() ? dev.mt.eta_e * dev.mt.q_max * dev.mt.hhv : 0.0);
    if (min_elec > max_elec + 1e-9) {
      throw ConfigError("period " + std::to_string(t + 1) + ": electric load exceeds all supply");
    }
    const double gas_cut = c.idr_enabled() ? (c.flex.a_tsq + c.flex.a_iq) : 0.0;
    const double min_gas = c.loads.q0[t] * (1.0 - gas_cut);
    const double max_gas =
        c.q_grid_max + (c.coupling_enabled() ? dev.p2g.eta * dev.p2g.p_max / dev.p2g.hhv : 0.0);
    if (min_gas > max_gas + 1e-9) {
      throw ConfigError("period " + std::to_string(t + 1) + ": gas load exceeds all supply");
    }
  }
}

inline AssembledModel assemble_model(const ScenarioData& d) {
  using assemble_detail::vname;
  feasibility_precheck(d);
  const auto& c = d.cfg;
  const auto& dev = c.devices;
  const int T = c.periods;
  const double dt = c.dt;
  const bool idr = c.idr_enabled();
  const bool coupled = c.coupling_enabled();

  AssembledModel am;
  ModelIR& m = am.model;
  auto& ids = am.ids;

  auto per_period = [&](const char* name, double lo, double hi,
                        VarKind kind = VarKind::Continuous) -> const std::vector<int>& {
    auto& v = ids[name];
    for (int t = 0; t < T; ++t) v.push_back(m.add_var(vname(name, t + 1), lo, hi, kind));
    return v;
  };
  auto states = [&](const char* name, double lo, double hi) -> const std::vector<int>& {
    auto& v = ids[name];
    for (int t = 0; t <= T; ++t) v.push_back(m.add_var(vname(name, t), lo, hi));
    return v;
  };

  const double p2g_cap = coupled ? dev.p2g.p_max : 0.0;
  const double mt_cap = coupled ? dev.mt.q_max : 0.0;

  const auto& pg_el = per_period("pg_el", 0, kInf);
  const auto& pg_hl = per_period("pg_hl", 0, kInf);
  const auto& pg_p2g = per_period("pg_p2g", 0, coupled ? kInf : 0.0);
  const auto& prg_el = per_period("prg_el", 0, kInf);
  const auto& prg_hl = per_period("prg_hl", 0, kInf);
  const auto& prg_p2g = per_period("prg_p2g", 0, coupled ? kInf : 0.0);
  const auto& ps = per_period("ps", 0, kInf);
  const auto& esd_ch = per_period("esd_ch", 0, dev.esd.p_ch_max);
  const auto& esd_dc = per_period("esd_dc", 0, dev.esd.p_dc_max);
  const auto& esd_c = states("esd_c", dev.esd.c_min, dev.esd.c_max);
  const auto& hsd_ch = per_period("hsd_ch", 0, dev.hsd.p_ch_max);
  const auto& hsd_dc = per_period("hsd_dc", 0, dev.hsd.p_dc_max);
  const auto& hsd_c = states("hsd_c", dev.hsd.c_min, dev.hsd.c_max);
  const auto& p_eb = per_period("p_eb", 0, kInf);
  const auto& h_eb = per_period("h_eb", 0, dev.eb.h_max);
  const auto& p_p2g = per_period("p_p2g", 0, p2g_cap);
  const auto& q_p2g = per_period("q_p2g", 0, kInf);
  const auto& theta = per_period("theta", 0, coupled ? 1.0 : 0.0, VarKind::Binary);
  const auto& q_mt = per_period("q_mt", 0, mt_cap);
  const auto& q_mt_g = per_period("q_mt_g", 0, kInf);
  const auto& q_mt_p2g = per_period("q_mt_p2g", 0, kInf);
  const auto& p_mt = per_period("p_mt", 0, kInf);
  const auto& h_mt = per_period("h_mt", 0, kInf);
  const auto& psi = per_period("psi", 0, coupled ? 1.0 : 0.0, VarKind::Binary);
  const auto& q_gl = per_period("q_gl", 0, c.q_grid_max);
  const auto& r_grid = per_period("r_grid", 0, kInf);
  const auto& r_esd = per_period("r_esd", 0, kInf);

  std::vector<int> p_tse, p_ie, q_tsq, q_iq, h_ch;
  for (int t = 0; t < T; ++t) {
    const double pe = idr ? c.flex.a_tse * c.loads.p0[t] : 0.0;
    const double qe = idr ? c.flex.a_tsq * c.loads.q0[t] : 0.0;
    p_tse.push_back(m.add_var(vname("p_tse", t + 1), -pe, pe));
    p_ie.push_back(m.add_var(vname("p_ie", t + 1), 0, idr ? c.flex.a_ie * c.loads.p0[t] : 0.0));
    q_tsq.push_back(m.add_var(vname("q_tsq", t + 1), -qe, qe));
    q_iq.push_back(m.add_var(vname("q_iq", t + 1), 0, idr ? c.flex.a_iq * c.loads.q0[t] : 0.0));
    h_ch.push_back(m.add_var(vname("h_ch", t + 1), 0, idr ? d.h0[t] : 0.0));
  }
  ids["p_tse"] = p_tse;
  ids["p_ie"] = p_ie;
  ids["q_tsq"] = q_tsq;
  ids["q_iq"] = q_iq;
  ids["h_ch"] = h_ch;
  const auto& t_in = states("t_in", -kInf, kInf);

  // Storage cycles start and end at c_min; the building starts at PMV = 0.
  m.fix(esd_c.front(), dev.esd.c_min);
  m.fix(esd_c.back(), dev.esd.c_min);
  m.fix(hsd_c.front(), dev.hsd.c_min);
  m.fix(hsd_c.back(), dev.hsd.c_min);
  m.fix(t_in.front(), d.t_neutral);

  // EV charging: the disorderly profile as a fixed load, or one binary per
  // session and admissible period at the session's constant power.
  const auto& sessions = d.fleet.sessions;
  am.ev_fixed.assign(T, 0.0);
  am.ev_on.assign(sessions.size(), std::vector<int>(T, -1));
  std::vector<LinExpr> ev_load(T);
  if (!idr) {
    am.ev_fixed = d.fleet.load;
  } else {
    for (std::size_t n = 0; n < sessions.size(); ++n) {
      const EvPlan plan = ev_plan(sessions[n], c.ev, dt, T);
      am.plans.push_back(plan);
      if (plan.periods == 0) continue;
      if (plan.truncated) {
        for (int t = plan.first_period; t < T; ++t) am.ev_fixed[t] += plan.power_kw;
        continue;
      }
      const std::string tag = "ev_" + std::to_string(sessions[n].ev_id);
      LinExpr count;
      for (int t = plan.first_period; t < T; ++t) {
        const int x = m.add_binary(vname(tag.c_str(), t + 1));
        am.ev_on[n][t] = x;
        ev_load[t].add(x, plan.power_kw);
        count.add(x, 1.0);
      }
      m.add_constraint(tag + "_energy", count, Sense::Eq, plan.periods);
    }
  }
  for (int t = 0; t < T; ++t) ev_load[t].add(am.ev_fixed[t]);

  const double g_th = c.building.conductance_kw();
  const double c_th = c.building.capacitance_kwh();
  const auto& p2g = dev.p2g;
  const auto& mt = dev.mt;
  const auto& mc = c.costs.maintenance;
  const auto& comp = c.costs.compensation;
  LinExpr& obj = m.objective();
  std::vector<int> s_tse, s_tsq;

  for (int t = 0; t < T; ++t) {
    const std::string k = std::to_string(t + 1);
    const auto& ru = d.renewables[t];
    auto row = [&](const char* base, LinExpr e, Sense s, double rhs) {
      m.add_constraint(vname(base, t + 1), std::move(e), s, rhs);
    };

    // Electric balance; curtailment is accounted in the allocation only.
    {
      LinExpr e;
      e.add(pg_el[t], 1).add(prg_el[t], 1).add(esd_dc[t], 1).add(p_mt[t], 1);
      e.add(p_tse[t], -1).add(p_ie[t], 1).add(esd_ch[t], -1).add(ev_load[t], -1.0);
      row("bal_e", e, Sense::Eq, c.loads.p0[t]);
    }
    // Heat balance against the comfort-adjusted heat load h0 - h_ch.
    {
      LinExpr e;
      e.add(h_eb[t], 1).add(hsd_dc[t], 1).add(hsd_ch[t], -1).add(h_mt[t], 1).add(h_ch[t], 1);
      row("bal_h", e, Sense::Eq, d.h0[t]);
    }
    // Gas balance.
    {
      LinExpr e;
      e.add(q_gl[t], 1).add(q_p2g[t], 1).add(q_mt[t], -1).add(q_tsq[t], -1).add(q_iq[t], 1);
      row("bal_q", e, Sense::Eq, c.loads.q0[t]);
    }
    // Renewable allocation of the expected output.
    {
      LinExpr e;
      e.add(prg_el[t], 1).add(prg_hl[t], 1).add(prg_p2g[t], 1).add(ps[t], 1);
      row("alloc_rg", e, Sense::Eq, ru.expected);
    }
    // Electric boiler.
    {
      LinExpr in;
      in.add(p_eb[t], 1).add(pg_hl[t], -1).add(prg_hl[t], -1);
      row("eb_in", in, Sense::Eq, 0.0);
      LinExpr out;
      out.add(h_eb[t], 1).add(p_eb[t], -dev.eb.eta);
      row("eb_out", out, Sense::Eq, 0.0);
    }
    // Storage dynamics.
    for (auto [name, ch, dc, cap, spec] :
         {std::tuple{"esd_dyn", &esd_ch, &esd_dc, &esd_c, &dev.esd},
          std::tuple{"hsd_dyn", &hsd_ch, &hsd_dc, &hsd_c, &dev.hsd}}) {
      LinExpr e;
      e.add((*cap)[t + 1], 1).add((*cap)[t], -(1.0 - spec->k_loss));
      e.add((*ch)[t], -spec->eta_ch * dt).add((*dc)[t], dt / spec->eta_dc);
      row(name, e, Sense::Eq, 0.0);
    }
    // P2G.
    {
      LinExpr in;
      in.add(p_p2g[t], 1).add(pg_p2g[t], -1).add(prg_p2g[t], -1);
      row("p2g_in", in, Sense::Eq, 0.0);
      LinExpr out;
      out.add(q_p2g[t], 1).add(p_p2g[t], -p2g.eta / p2g.hhv);
      row("p2g_out", out, Sense::Eq, 0.0);
      LinExpr lo;
      lo.add(p_p2g[t], 1).add(theta[t], -p2g.p_min);
      row("p2g_min", lo, Sense::Ge, 0.0);
      LinExpr hi;
      hi.add(p_p2g[t], 1).add(theta[t], -p2g.p_max);
      row("p2g_max", hi, Sense::Le, 0.0);
      if (t > 0) {
        // Ramp limits bind only when the unit is on in both periods.
        LinExpr up;
        up.add(p_p2g[t], 1).add(p_p2g[t - 1], -1).add(theta[t - 1], p2g.p_max);
        row("p2g_rup", up, Sense::Le, p2g.ramp_max + p2g.p_max);
        LinExpr dn;
        dn.add(p_p2g[t], 1).add(p_p2g[t - 1], -1).add(theta[t], -p2g.p_max);
        row("p2g_rdn", dn, Sense::Ge, p2g.ramp_min - p2g.p_max);
      }
    }
    // Micro gas turbine.
    {
      LinExpr split;
      split.add(q_mt[t], 1).add(q_mt_g[t], -1).add(q_mt_p2g[t], -1);
      row("mt_split", split, Sense::Eq, 0.0);
      LinExpr from_p2g;
      from_p2g.add(q_mt_p2g[t], 1).add(q_p2g[t], -1);
      row("mt_p2g", from_p2g, Sense::Le, 0.0);
      LinExpr from_grid;
      from_grid.add(q_mt_g[t], 1).add(q_gl[t], -1);
      row("mt_grid", from_grid, Sense::Le, 0.0);
      LinExpr pe;
      pe.add(p_mt[t], 1).add(q_mt[t], -mt.eta_e * mt.hhv);
      row("mt_pe", pe, Sense::Eq, 0.0);
      LinExpr he;
      he.add(h_mt[t], 1).add(q_mt[t], -mt.eta_h() * mt.hhv);
      row("mt_he", he, Sense::Eq, 0.0);
      LinExpr lo;
      lo.add(q_mt[t], 1).add(psi[t], -mt.q_min);
      row("mt_min", lo, Sense::Ge, 0.0);
      LinExpr hi;
      hi.add(q_mt[t], 1).add(psi[t], -mt.q_max);
      row("mt_max", hi, Sense::Le, 0.0);
      if (t > 0) {
        LinExpr up;
        up.add(q_mt[t], 1).add(q_mt[t - 1], -1).add(psi[t - 1], mt.q_max);
        row("mt_rup", up, Sense::Le, mt.ramp_max + mt.q_max);
        LinExpr dn;
        dn.add(q_mt[t], 1).add(q_mt[t - 1], -1).add(psi[t], -mt.q_max);
        row("mt_rdn", dn, Sense::Ge, mt.ramp_min - mt.q_max);
      }
    }
    // Grid headroom and ESD reserve headroom.
    {
      LinExpr g;
      g.add(pg_el[t], 1).add(pg_hl[t], 1).add(r_grid[t], 1);
      row("grid_cap", g, Sense::Le, c.p_grid_max);
      LinExpr soc;
      soc.add(r_esd[t], 1).add(esd_c[t], -dev.esd.eta_dc / dt);
      row("esd_rsoc", soc, Sense::Le, -dev.esd.eta_dc * dev.esd.c_min / dt);
      LinExpr pw;
      pw.add(r_esd[t], 1).add(esd_dc[t], 1);
      row("esd_rpow", pw, Sense::Le, dev.esd.p_dc_max);
    }
    // Building thermal recursion; bounds come from the comfort band.
    {
      LinExpr e;
      e.add(t_in[t + 1], 1).add(t_in[t], -(1.0 - dt * g_th / c_th)).add(h_ch[t], dt / c_th);
      row("thermal", e, Sense::Eq, dt * (d.h0[t] + g_th * c.loads.t_out[t]) / c_th);
      const auto band = comfort_band(static_cast<std::size_t>(t), c.comfort);
      LinExpr lo;
      lo.add(t_in[t + 1], 1);
      row("comfort_lo", lo, Sense::Ge, band.first);
      LinExpr hi;
      hi.add(t_in[t + 1], 1);
      row("comfort_hi", hi, Sense::Le, band.second);
    }
    if (idr) {
      LinExpr cap = ev_load[t];
      row("ev_station", cap, Sense::Le, c.ev.p_station_max);
    }
    // Chance-constrained spinning reserve.
    {
      ReserveContext ctx{ru.joint, ru.expected, c.reserve_max(), c.alpha};
      LinExpr r;
      r.add(r_grid[t], 1).add(r_esd[t], 1);
      am.chance.push_back(build_chance_rows(m, "t" + k, ctx, r));
    }

    // Objective.
    const double pe = c.loads.price_elec[t] * dt;
    obj.add(pg_el[t], pe).add(pg_hl[t], pe).add(pg_p2g[t], pe).add(q_gl[t], c.loads.price_gas[t] * dt);
    obj.add(r_grid[t], c.costs.reserve_grid[t] * dt).add(r_esd[t], c.costs.reserve_esd * dt);
    obj.add((mc.pv * ru.e_pv + mc.wt * ru.e_wt) * dt);
    obj.add(p_eb[t], mc.eb * dt);
    obj.add(esd_ch[t], mc.esd * dt).add(esd_dc[t], mc.esd * dt);
    obj.add(hsd_ch[t], mc.hsd * dt).add(hsd_dc[t], mc.hsd * dt);
    obj.add(p_p2g[t], mc.p2g * dt).add(p_mt[t], mc.mt * dt);
    for (const auto& pol : c.costs.pollutants) {
      const double w = pol.penalty * dt;
      obj.add(pg_el[t], w * pol.mu_elec).add(pg_hl[t], w * pol.mu_elec);
      obj.add(pg_p2g[t], w * pol.mu_elec).add(r_grid[t], w * pol.mu_elec);
      obj.add(q_gl[t], w * pol.mu_gas * dev.mt.hhv).add(p_p2g[t], -w * pol.mu_p2g);
    }
    obj.add(p_ie[t], comp.ie * dt).add(h_ch[t], comp.ch * dt).add(q_iq[t], comp.iq * dt);
    s_tse.push_back(shift_cost_rows(m, vname("s_tse", t + 1), p_tse[t], comp.tse, dt));
    s_tsq.push_back(shift_cost_rows(m, vname("s_tsq", t + 1), q_tsq[t], comp.tsq, dt));
  }
  ids["s_tse"] = s_tse;
  ids["s_tsq"] = s_tsq;

  // Load shifting nets to zero over the horizon.
  LinExpr tse_sum, tsq_sum;
  for (int t = 0; t < T; ++t) {
    tse_sum.add(p_tse[t], 1);
    tsq_sum.add(q_tsq[t], 1);
  }
  m.add_constraint("tse_zero_sum", tse_sum, Sense::Eq, 0.0);
  m.add_constraint("tsq_zero_sum", tsq_sum, Sense::Eq, 0.0);

  am.objective_constant = obj.constant;
  return am;
}

/// Maps raw variable values onto a ScheduleSolution.
inline ScheduleSolution extract_schedule(const AssembledModel& am, const ScenarioData& d,
                                         const std::vector<double>& x) {
  const int T = d.cfg.periods;
  ScheduleSolution s = ScheduleSolution::zeros(T, d.cfg.dt, d.fleet.sessions.size());
  auto fill = [&](const std::vector<ScheduleSolution::Field>& fields) {
    for (const auto& [name, member] : fields) {
      auto it = am.ids.find(name);
      if (it == am.ids.end()) continue;
      auto& dst = s.*member;
      for (std::size_t i = 0; i < it->second.size(); ++i) dst[i] = x[it->second[i]];
    }
  };
  fill(ScheduleSolution::period_fields());
  fill(ScheduleSolution::state_fields());
  for (int t = 0; t < T; ++t) s.ev_load[t] = am.ev_fixed[t];
  for (std::size_t n = 0; n < am.ev_on.size(); ++n) {
    const EvPlan* plan = n < am.plans.size() ? &am.plans[n] : nullptr;
    for (int t = 0; t < T; ++t) {
      const int id = am.ev_on[n][t];
      if (id >= 0) {
        s.ev_on[n][t] = x[id];
        s.ev_load[t] += plan->power_kw * x[id];
      } else if (plan && plan->truncated && t >= plan->first_period) {
        s.ev_on[n][t] = 1.0;
      }
    }
  }
  for (int t = 0; t < T && static_cast<std::size_t>(t) < am.chance.size(); ++t) {
    for (int z : am.chance[t].indicators) s.z[t].push_back(x[z]);
  }
  return s;
}

}  // namespace cies
