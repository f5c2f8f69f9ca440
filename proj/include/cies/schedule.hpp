#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cies/config.hpp"
#include "cies/devices.hpp"
#include "cies/demand.hpp"

namespace cies {

/// Smart-charging plan of one session: `periods` whole on-periods at
/// `power_kw`, anywhere from `first_period` (0-based) to the end of the horizon.
struct EvPlan {
  int first_period = 0;
  int periods = 0;
  double power_kw = 0.0;
  bool truncated = false;
};

inline EvPlan ev_plan(const EvSession& s, const EvFleetSpec& spec, double dt, int horizon) {
  EvPlan p;
  p.first_period = s.arrival_period - 1;
  const int available = horizon - p.first_period;
  if (s.required_energy <= 1e-12) return p;
  const int needed = static_cast<int>(
      std::ceil(s.required_energy / (spec.p_ch_rated * spec.eta_ch * dt) - 1e-9));
  if (needed > available) {
    p.periods = available;
    p.power_kw = spec.p_ch_rated;
    p.truncated = true;
  } else {
    p.periods = needed;
    p.power_kw = s.required_energy / (spec.eta_ch * needed * dt);
  }
  return p;
}

/// Per-period values of every decision symbol of the scheduling model.
/// Capacity and indoor-temperature traces carry T+1 entries (entry 0 is the
/// state before period 1).
struct ScheduleSolution {
  int periods = 0;
  double dt = 1.0;

  std::vector<double> pg_el, pg_hl, pg_p2g;     // grid purchases (kW)
  std::vector<double> prg_el, prg_hl, prg_p2g;  // renewable allocations (kW)
  std::vector<double> ps;                       // curtailment (kW)
  std::vector<double> esd_ch, esd_dc, esd_c;
  std::vector<double> hsd_ch, hsd_dc, hsd_c;
  std::vector<double> p_eb, h_eb;
  std::vector<double> p_p2g, q_p2g, theta;
  std::vector<double> q_mt, q_mt_g, q_mt_p2g, p_mt, h_mt, psi;
  std::vector<double> q_gl;
  std::vector<double> r_grid, r_esd;
  std::vector<double> p_tse, p_ie, q_tsq, q_iq, h_ch;
  std::vector<double> s_tse, s_tsq;  // epigraph values of -min{x, 0}
  std::vector<double> t_in;
  std::vector<double> ev_load;                  // kW
  std::vector<std::vector<double>> ev_on;       // per session, per period
  std::vector<std::vector<double>> z;           // chance indicators per period

  std::optional<double> reported_objective;

  using Field = std::pair<const char*, std::vector<double> ScheduleSolution::*>;

  /// Per-period fields (length T), in report order.
  static const std::vector<Field>& period_fields() {
    static const std::vector<Field> f = {
        {"pg_el", &ScheduleSolution::pg_el},       {"pg_hl", &ScheduleSolution::pg_hl},
        {"pg_p2g", &ScheduleSolution::pg_p2g},     {"prg_el", &ScheduleSolution::prg_el},
        {"prg_hl", &ScheduleSolution::prg_hl},     {"prg_p2g", &ScheduleSolution::prg_p2g},
        {"ps", &ScheduleSolution::ps},             {"esd_ch", &ScheduleSolution::esd_ch},
        {"esd_dc", &ScheduleSolution::esd_dc},     {"hsd_ch", &ScheduleSolution::hsd_ch},
        {"hsd_dc", &ScheduleSolution::hsd_dc},     {"p_eb", &ScheduleSolution::p_eb},
        {"h_eb", &ScheduleSolution::h_eb},         {"p_p2g", &ScheduleSolution::p_p2g},
        {"q_p2g", &ScheduleSolution::q_p2g},       {"theta", &ScheduleSolution::theta},
        {"q_mt", &ScheduleSolution::q_mt},         {"q_mt_g", &ScheduleSolution::q_mt_g},
        {"q_mt_p2g", &ScheduleSolution::q_mt_p2g}, {"p_mt", &ScheduleSolution::p_mt},
        {"h_mt", &ScheduleSolution::h_mt},         {"psi", &ScheduleSolution::psi},
        {"q_gl", &ScheduleSolution::q_gl},         {"r_grid", &ScheduleSolution::r_grid},
        {"r_esd", &ScheduleSolution::r_esd},       {"p_tse", &ScheduleSolution::p_tse},
        {"p_ie", &ScheduleSolution::p_ie},         {"q_tsq", &ScheduleSolution::q_tsq},
        {"q_iq", &ScheduleSolution::q_iq},         {"h_ch", &ScheduleSolution::h_ch},
        {"s_tse", &ScheduleSolution::s_tse},       {"s_tsq", &ScheduleSolution::s_tsq},
        {"ev_load", &ScheduleSolution::ev_load},
    };
    return f;
  }

  /// State fields (length T+1).
  static const std::vector<Field>& state_fields() {
    static const std::vector<Field> f = {
        {"esd_c", &ScheduleSolution::esd_c},
        {"hsd_c", &ScheduleSolution::hsd_c},
        {"t_in", &ScheduleSolution::t_in},
    };
    return f;
  }

  static ScheduleSolution zeros(int periods, double dt, std::size_t sessions = 0) {
    ScheduleSolution s;
    s.periods = periods;
    s.dt = dt;
    for (const auto& [name, member] : period_fields()) (s.*member).assign(periods, 0.0);
    for (const auto& [name, member] : state_fields()) (s.*member).assign(periods + 1, 0.0);
    s.ev_on.assign(sessions, std::vector<double>(periods, 0.0));
    s.z.assign(periods, {});
    return s;
  }

  std::vector<double> total_reserve() const {
    std::vector<double> r(periods);
    for (int t = 0; t < periods; ++t) r[t] = r_grid[t] + r_esd[t];
    return r;
  }

  FlexDecision flex() const { return {p_tse, p_ie, q_tsq, q_iq, h_ch}; }

  DeviceSchedule devices() const {
    DeviceSchedule d;
    d.esd = {esd_ch, esd_dc, esd_c};
    d.hsd = {hsd_ch, hsd_dc, hsd_c};
    d.h_eb = h_eb;
    d.p_p2g = p_p2g;
    d.theta = theta;
    d.q_mt = q_mt;
    d.psi = psi;
    return d;
  }
};

}  // namespace cies
