#pragma once

// Conversion and storage devices: electric boiler, electricity/heat storage,
// power-to-gas and micro-gas turbine, plus a checker for their operating limits.

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cies/errors.hpp"
#include "cies/violation.hpp"

namespace cies {

struct EbSpec {
  double eta = 0.99;
  double h_max = 300.0;  // kW

  void validate() const {
    if (!(eta > 0.0) || eta > 1.0 || !(h_max > 0.0)) throw ParameterError("electric boiler spec invalid");
  }
};

struct StorageSpec {
  double c_min = 40.0;     // kWh
  double c_max = 200.0;    // kWh
  double p_ch_max = 60.0;  // kW
  double p_dc_max = 60.0;  // kW
  double eta_ch = 0.9;
  double eta_dc = 0.9;
  double k_loss = 0.001;   // per period

  void validate() const {
    if (!(c_min >= 0.0) || !(c_min < c_max)) throw ParameterError("storage: need 0 <= c_min < c_max");
    if (!(eta_ch > 0.0) || eta_ch > 1.0 || !(eta_dc > 0.0) || eta_dc > 1.0) {
      throw ParameterError("storage: efficiencies outside (0, 1]");
    }
    if (!(k_loss >= 0.0) || !(k_loss < 1.0)) throw ParameterError("storage: k_loss outside [0, 1)");
    if (!(p_ch_max >= 0.0) || !(p_dc_max >= 0.0)) throw ParameterError("storage: negative power limit");
  }
};

struct P2gSpec {
  double p_min = 100.0;     // kW
  double p_max = 500.0;     // kW
  double ramp_min = -200.0; // kW per period
  double ramp_max = 200.0;
  double eta = 0.6;
  double hhv = 9.7;         // kWh/m3

  void validate() const {
    if (!(p_min > 0.0) || !(p_min < p_max)) throw ParameterError("p2g: need 0 < p_min < p_max");
    if (!(ramp_min < 0.0) || !(ramp_max > 0.0)) throw ParameterError("p2g: need ramp_min < 0 < ramp_max");
    if (!(eta > 0.0) || eta > 1.0 || !(hhv > 0.0)) throw ParameterError("p2g: efficiency or hhv invalid");
  }
};

struct MtSpec {
  double q_min = 10.0;     // m3 per period
  double q_max = 40.0;
  double ramp_min = -10.0; // m3 per period
  double ramp_max = 10.0;
  double eta_e = 0.4;
  double eta_loss = 0.1;
  double hhv = 9.7;        // kWh/m3

  double eta_h() const { return 1.0 - eta_e - eta_loss; }

  void validate() const {
    if (!(eta_e > 0.0) || !(eta_loss >= 0.0) || !(eta_e + eta_loss < 1.0)) {
      throw ParameterError("mt: need eta_e + eta_loss < 1");
    }
    if (!(q_min > 0.0) || !(q_min < q_max)) throw ParameterError("mt: need 0 < q_min < q_max");
    if (!(ramp_min < 0.0) || !(ramp_max > 0.0) || !(hhv > 0.0)) throw ParameterError("mt: ramps or hhv invalid");
  }
};

inline double eb_output(double p_in, const EbSpec& spec) {
  if (p_in < 0.0) throw DomainError("eb_output: negative input power");
  return spec.eta * p_in;
}

/// Capacity after one period (kWh).
inline double storage_step(double c, double p_ch, double p_dc, const StorageSpec& spec, double dt) {
  if (p_ch < 0.0 || p_ch > spec.p_ch_max || p_dc < 0.0 || p_dc > spec.p_dc_max) {
    throw DomainError("storage_step: charge/discharge power outside limits");
  }
  return (1.0 - spec.k_loss) * c + (spec.eta_ch * p_ch - p_dc / spec.eta_dc) * dt;
}

/// Semi-continuous admission test: 0 (off) or within [lo, hi].
inline bool semi_continuous_ok(double x, double lo, double hi, double tol = 1e-9) {
  return std::fabs(x) <= tol || (x >= lo - tol && x <= hi + tol);
}

/// Gas volume produced per period (m3).
inline double p2g_gas_output(double p_in, const P2gSpec& spec) {
  if (!semi_continuous_ok(p_in, spec.p_min, spec.p_max)) {
    throw DomainError("p2g_gas_output: input power must be 0 or within [p_min, p_max]");
  }
  return spec.eta * p_in / spec.hhv;
}

struct MtOutputs {
  double p_elec = 0.0;  // kW
  double h_heat = 0.0;  // kW
};

inline MtOutputs mt_outputs(double q_gas, const MtSpec& spec) {
  if (!semi_continuous_ok(q_gas, spec.q_min, spec.q_max)) {
    throw DomainError("mt_outputs: gas input must be 0 or within [q_min, q_max]");
  }
  return {spec.eta_e * q_gas * spec.hhv, spec.eta_h() * q_gas * spec.hhv};
}

/// Storage trajectory: capacity has T+1 entries, entry 0 is the start of the cycle.
struct StorageTrace {
  std::vector<double> p_ch, p_dc, capacity;
};

struct DeviceSchedule {
  StorageTrace esd;
  StorageTrace hsd;
  std::vector<double> h_eb;
  std::vector<double> p_p2g, theta;
  std::vector<double> q_mt, psi;
};

struct DeviceSpecs {
  EbSpec eb;
  StorageSpec esd;
  StorageSpec hsd;
  P2gSpec p2g;
  MtSpec mt;
};

namespace detail {

inline void check_storage(const std::string& tag, const StorageTrace& s, const StorageSpec& spec,
                          double dt, double tol, ViolationList& out) {
  const std::size_t n = s.p_ch.size();
  auto add = [&](const std::string& what, std::size_t t, double margin, std::string detail) {
    out.push_back({tag + "_" + what, static_cast<int>(t), margin, std::move(detail)});
  };
  for (std::size_t t = 0; t < n; ++t) {
    if (s.p_ch[t] < -tol) add("charge_power", t + 1, -s.p_ch[t], "negative");
    if (s.p_ch[t] > spec.p_ch_max + tol) add("charge_power", t + 1, s.p_ch[t] - spec.p_ch_max, "above max");
    if (s.p_dc[t] < -tol) add("discharge_power", t + 1, -s.p_dc[t], "negative");
    if (s.p_dc[t] > spec.p_dc_max + tol) add("discharge_power", t + 1, s.p_dc[t] - spec.p_dc_max, "above max");
    const double next = (1.0 - spec.k_loss) * s.capacity[t] +
                        (spec.eta_ch * s.p_ch[t] - s.p_dc[t] / spec.eta_dc) * dt;
    if (std::fabs(next - s.capacity[t + 1]) > tol) {
      add("dynamics", t + 1, std::fabs(next - s.capacity[t + 1]), "capacity recursion residual");
    }
  }
  for (std::size_t t = 0; t <= n; ++t) {
    const double c = s.capacity[t];
    if (c < spec.c_min - tol) add("capacity", t, spec.c_min - c, "below c_min");
    if (c > spec.c_max + tol) add("capacity", t, c - spec.c_max, "above c_max");
  }
  if (std::fabs(s.capacity.front() - spec.c_min) > tol) {
    add("cycle_start", 0, std::fabs(s.capacity.front() - spec.c_min), "start capacity differs from c_min");
  }
  if (std::fabs(s.capacity.back() - spec.c_min) > tol) {
    add("cycle_end", static_cast<int>(n), std::fabs(s.capacity.back() - spec.c_min),
        "end capacity differs from c_min");
  }
}

// Semi-continuous unit with on-state indicator and ramp limits that bind only
// between consecutive on-periods. The unit is off before the horizon.
inline void check_unit(const std::string& tag, std::span<const double> x, std::span<const double> on,
                       double lo, double hi, double ramp_lo, double ramp_hi, double tol,
                       ViolationList& out) {
  for (std::size_t t = 0; t < x.size(); ++t) {
    const int period = static_cast<int>(t + 1);
    const bool is_on = on[t] > 0.5;
    if (std::fabs(on[t] - std::round(on[t])) > tol) {
      out.push_back({tag + "_state", period, std::fabs(on[t] - std::round(on[t])), "fractional on-state"});
    }
    const double upper = is_on ? hi : 0.0;
    const double lower = is_on ? lo : 0.0;
    if (x[t] > upper + tol) out.push_back({tag + "_max", period, x[t] - upper, "above upper limit"});
    if (x[t] < lower - tol) out.push_back({tag + "_min", period, lower - x[t], "below lower limit"});
    if (t > 0 && is_on && on[t - 1] > 0.5) {
      const double d = x[t] - x[t - 1];
      if (d > ramp_hi + tol) out.push_back({tag + "_ramp", period, d - ramp_hi, "ramp-up limit"});
      if (d < ramp_lo - tol) out.push_back({tag + "_ramp", period, ramp_lo - d, "ramp-down limit"});
    }
  }
}

}  // namespace detail

inline ViolationList check_device_limits(const DeviceSchedule& s, const DeviceSpecs& specs, double dt,
                                         double tol = 1e-6) {
  ViolationList out;
  detail::check_storage("esd", s.esd, specs.esd, dt, tol, out);
  detail::check_storage("hsd", s.hsd, specs.hsd, dt, tol, out);
  for (std::size_t t = 0; t < s.h_eb.size(); ++t) {
    if (s.h_eb[t] > specs.eb.h_max + tol) {
      out.push_back({"eb_max", static_cast<int>(t + 1), s.h_eb[t] - specs.eb.h_max, "heat output above cap"});
    }
    if (s.h_eb[t] < -tol) out.push_back({"eb_min", static_cast<int>(t + 1), -s.h_eb[t], "negative heat output"});
  }
  detail::check_unit("p2g", s.p_p2g, s.theta, specs.p2g.p_min, specs.p2g.p_max, specs.p2g.ramp_min,
                     specs.p2g.ramp_max, tol, out);
  detail::check_unit("mt", s.q_mt, s.psi, specs.mt.q_min, specs.mt.q_max, specs.mt.ramp_min,
                     specs.mt.ramp_max, tol, out);
  return out;
}

}  // namespace cies
