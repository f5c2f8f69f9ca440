#pragma once

// Flexible electricity/gas/heat loads, building thermal inertia with PMV
// comfort bounds, and the user satisfaction index.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cies/errors.hpp"
#include "cies/violation.hpp"

namespace cies {

struct LoadProfiles {
  std::vector<double> p0;          // kW
  std::vector<double> q0;          // m3 per period
  std::vector<double> t_out;       // degC
  std::vector<double> price_elec;  // yuan/kWh
  std::vector<double> price_gas;   // yuan/m3

  std::size_t periods() const { return p0.size(); }

  void validate(std::size_t horizon) const {
    for (const auto* v : {&p0, &q0, &t_out, &price_elec, &price_gas}) {
      if (v->size() != horizon) throw ParameterError("load profiles: length differs from horizon");
    }
    for (std::size_t t = 0; t < horizon; ++t) {
      if (p0[t] < 0.0 || q0[t] < 0.0) throw ParameterError("load profiles: negative baseline load");
    }
  }
};

struct FlexRatios {
  double a_tse = 0.1;
  double a_ie = 0.1;
  double a_tsq = 0.1;
  double a_iq = 0.1;

  void validate() const {
    for (double a : {a_tse, a_ie, a_tsq, a_iq}) {
      if (a < 0.0 || a > 1.0) throw ParameterError("flex ratios must lie in [0, 1]");
    }
  }
};

struct BuildingThermal {
  double k_ht = 0.5;       // W/(m2 degC)
  double f_area = 2400.0;  // m2
  double volume = 36000.0; // m3
  double c_air = 1.007;    // kJ/(kg degC)
  double rho_air = 1.2;    // kg/m3

  void validate() const {
    if (!(k_ht > 0.0) || !(f_area > 0.0) || !(volume > 0.0) || !(c_air > 0.0) ||
        !(rho_air > 0.0)) {
      throw ParameterError("building parameters must be positive");
    }
  }

  /// Heat capacitance in kWh/degC.
  double capacitance_kwh() const { return c_air * rho_air * volume / 3600.0; }
  /// Envelope conductance in kW/degC.
  double conductance_kw() const { return k_ht * f_area / 1000.0; }
};

struct ComfortParams {
  double m_met = 80.0;   // W/m2
  double i_cl = 0.15;    // m2 degC / W
  double t_skin = 33.5;  // degC
  std::vector<double> pmv_limit;  // per period

  /// ISO 7730 schedule: 0.9 in [1:00-7:00] and [20:00-24:00], 0.5 in [8:00-19:00].
  static std::vector<double> default_pmv_schedule(int periods, double dt) {
    std::vector<double> out(periods);
    for (int t = 0; t < periods; ++t) {
      const double hour = std::ceil((t + 1) * dt - 1e-9);
      out[t] = (hour >= 8.0 && hour <= 19.0) ? 0.5 : 0.9;
    }
    return out;
  }

  void validate(std::size_t horizon) const {
    if (!(m_met > 0.0) || !(t_skin > 0.0) || !(i_cl > -0.1)) {
      throw ParameterError("comfort parameters out of range");
    }
    if (pmv_limit.size() != horizon) throw ParameterError("pmv schedule length differs from horizon");
    for (double l : pmv_limit) {
      if (!(l >= 0.0)) throw ParameterError("pmv limit must be nonnegative");
    }
  }
};

struct FlexDecision {
  std::vector<double> p_tse, p_ie;  // kW
  std::vector<double> q_tsq, q_iq;  // m3
  std::vector<double> h_ch;         // kW

  static FlexDecision zeros(std::size_t periods) {
    FlexDecision d;
    for (auto* v : {&d.p_tse, &d.p_ie, &d.q_tsq, &d.q_iq, &d.h_ch}) v->assign(periods, 0.0);
    return d;
  }
};

inline double pmv_index(double t_in, const ComfortParams& cp) {
  return 2.43 - 3.76 * (cp.t_skin - t_in) / (cp.m_met * (cp.i_cl + 0.1));
}

inline double indoor_temp_for_pmv(double pmv, const ComfortParams& cp) {
  return cp.t_skin - (2.43 - pmv) * cp.m_met * (cp.i_cl + 0.1) / 3.76;
}

/// Indoor temperature band admitted by |PMV| <= limit.
inline std::pair<double, double> comfort_band_for_limit(double limit, const ComfortParams& cp) {
  const double a = indoor_temp_for_pmv(-limit, cp);
  const double b = indoor_temp_for_pmv(limit, cp);
  return {std::min(a, b), std::max(a, b)};
}

/// `t` is a 0-based period index.
inline std::pair<double, double> comfort_band(std::size_t t, const ComfortParams& cp) {
  return comfort_band_for_limit(cp.pmv_limit.at(t), cp);
}

/// Temperature at which PMV is zero; the baseline heat load holds the building there.
inline double neutral_temperature(const ComfortParams& cp) { return indoor_temp_for_pmv(0.0, cp); }

inline double indoor_temp_step(double t_in, double t_out, double h, const BuildingThermal& b,
                               double dt) {
  if (!(dt > 0.0)) throw DomainError("indoor_temp_step: dt must be positive");
  return t_in + dt * (h - b.conductance_kw() * (t_in - t_out)) / b.capacitance_kwh();
}

inline double baseline_heat_demand(double t_target, double t_out, const BuildingThermal& b) {
  return std::max(0.0, b.conductance_kw() * (t_target - t_out));
}

struct AggregatedLoads {
  std::vector<double> p_load, q_load, h_load;
};

inline AggregatedLoads aggregate_flexible_loads(const LoadProfiles& profiles, const FlexDecision& d,
                                                std::span<const double> h0) {
  const std::size_t n = profiles.periods();
  AggregatedLoads out;
  out.p_load.resize(n);
  out.q_load.resize(n);
  out.h_load.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    out.p_load[t] = profiles.p0[t] + d.p_tse[t] - d.p_ie[t];
    out.q_load[t] = profiles.q0[t] + d.q_tsq[t] - d.q_iq[t];
    out.h_load[t] = h0[t] - d.h_ch[t];
    if (out.p_load[t] < -1e-9 || out.q_load[t] < -1e-9 || out.h_load[t] < -1e-9) {
      throw InfeasibleDecisionError("aggregate_flexible_loads: negative load in period " +
                                    std::to_string(t + 1));
    }
  }
  return out;
}

inline ViolationList check_flex_bounds(const LoadProfiles& profiles, const FlexDecision& d,
                                       const FlexRatios& r, double tol = 1e-6) {
  ViolationList out;
  const std::size_t n = profiles.periods();
  auto over = [&](const std::string& name, std::size_t t, double value, double lo, double hi) {
    if (value > hi + tol) out.push_back({name, static_cast<int>(t + 1), value - hi, "above bound"});
    if (value < lo - tol) out.push_back({name, static_cast<int>(t + 1), lo - value, "below bound"});
  };
  double sum_tse = 0.0;
  double sum_tsq = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double pe = r.a_tse * profiles.p0[t];
    const double qe = r.a_tsq * profiles.q0[t];
    over("tse_bound", t, d.p_tse[t], -pe, pe);
    over("ie_bound", t, d.p_ie[t], 0.0, r.a_ie * profiles.p0[t]);
    over("tsq_bound", t, d.q_tsq[t], -qe, qe);
    over("iq_bound", t, d.q_iq[t], 0.0, r.a_iq * profiles.q0[t]);
    sum_tse += d.p_tse[t];
    sum_tsq += d.q_tsq[t];
  }
  if (std::fabs(sum_tse) > tol) out.push_back({"tse_zero_sum", 0, std::fabs(sum_tse), "shift does not net to zero"});
  if (std::fabs(sum_tsq) > tol) out.push_back({"tsq_zero_sum", 0, std::fabs(sum_tsq), "shift does not net to zero"});
  return out;
}

struct CarrierLoads {
  double electric = 0.0;
  double heat = 0.0;
  double gas = 0.0;
};

/// Mean over carriers of 1 - |actual - baseline| / baseline, in percent.
/// Carriers with a non-positive baseline are skipped.
inline double satisfaction_index(const CarrierLoads& baseline, const CarrierLoads& actual) {
  double sum = 0.0;
  int terms = 0;
  auto term = [&](double b, double a) {
    if (!(b > 0.0)) return;
    sum += 1.0 - std::fabs(a - b) / b;
    ++terms;
  };
  term(baseline.electric, actual.electric);
  term(baseline.heat, actual.heat);
  term(baseline.gas, actual.gas);
  if (terms == 0) return 100.0;
  return std::clamp(100.0 * sum / terms, 0.0, 100.0);
}

inline std::vector<double> satisfaction_series(std::span<const CarrierLoads> baseline,
                                               std::span<const CarrierLoads> actual) {
  std::vector<double> out(baseline.size());
  for (std::size_t t = 0; t < baseline.size(); ++t) out[t] = satisfaction_index(baseline[t], actual[t]);
  return out;
}

}  // namespace cies
