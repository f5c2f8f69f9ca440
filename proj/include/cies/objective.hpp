#pragma once

// Operating-cost breakdown recomputed from raw schedule values, independent of
// the model's objective row.

#include <algorithm>
#include <vector>

#include "cies/config.hpp"
#include "cies/schedule.hpp"

namespace cies {

struct CostBreakdown {
  double purchase = 0.0;      // C1
  double reserve = 0.0;       // C2
  double maintenance = 0.0;   // C3
  double emission = 0.0;      // C4
  double compensation = 0.0;  // C5
  double total = 0.0;

  static constexpr const char* kRowNames[] = {
      "energy_purchase", "spinning_reserve", "maintenance", "environmental", "idr_compensation", "total"};

  std::vector<double> rows() const { return {purchase, reserve, maintenance, emission, compensation, total}; }
};

/// `renewables` supplies the expected PV/WT outputs charged for maintenance;
/// pass an empty vector to leave them out.
inline CostBreakdown evaluate_objective(const ScheduleSolution& s, const CiesConfig& cfg,
                                        const std::vector<PeriodUncertainty>& renewables) {
  CostBreakdown b;
  const double dt = cfg.dt;
  const auto& mc = cfg.costs.maintenance;
  const auto& comp = cfg.costs.compensation;
  const double hhv = cfg.devices.mt.hhv;
  for (int t = 0; t < s.periods; ++t) {
    const double grid = s.pg_el[t] + s.pg_hl[t] + s.pg_p2g[t];
    b.purchase += (cfg.loads.price_elec[t] * grid + cfg.loads.price_gas[t] * s.q_gl[t]) * dt;
    b.reserve += (cfg.costs.reserve_grid[t] * s.r_grid[t] + cfg.costs.reserve_esd * s.r_esd[t]) * dt;
    double maint = mc.eb * s.p_eb[t] + mc.esd * (s.esd_ch[t] + s.esd_dc[t]) +
                   mc.hsd * (s.hsd_ch[t] + s.hsd_dc[t]) + mc.p2g * s.p_p2g[t] + mc.mt * s.p_mt[t];
    if (static_cast<std::size_t>(t) < renewables.size()) {
      maint += mc.pv * renewables[t].e_pv + mc.wt * renewables[t].e_wt;
    }
    b.maintenance += maint * dt;
    for (const auto& pol : cfg.costs.pollutants) {
      b.emission += pol.penalty *
                    (pol.mu_elec * (grid + s.r_grid[t]) + pol.mu_gas * s.q_gl[t] * hhv - pol.mu_p2g * s.p_p2g[t]) *
                    dt;
    }
    b.compensation += (comp.ie * s.p_ie[t] - comp.tse * std::min(s.p_tse[t], 0.0) + comp.ch * s.h_ch[t] +
                       comp.iq * s.q_iq[t] - comp.tsq * std::min(s.q_tsq[t], 0.0)) *
                      dt;
  }
  b.total = b.purchase + b.reserve + b.maintenance + b.emission + b.compensation;
  return b;
}

}  // namespace cies
