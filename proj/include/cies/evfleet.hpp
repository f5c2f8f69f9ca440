#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <random>
#include <vector>

#include "cies/errors.hpp"

namespace cies {

struct EvFleetSpec {
  int n_evs = 60;
  double w_100 = 15.0;          // kWh per 100 km
  double c_max = 30.0;          // kWh
  double c_min = 3.0;           // kWh
  double p_ch_rated = 15.0;     // kW
  double eta_ch = 0.9;
  double s_expected = 0.9;      // target SOC
  double p_station_max = 225.0; // kW
  double mu_s = 17.6;           // return time mean (h)
  double sigma_s = 3.4;
  double mu_d = 3.2;            // log-mileage mean
  double sigma_d = 0.88;

  void validate() const {
    if (n_evs < 0) throw ParameterError("ev fleet: negative fleet size");
    if (!(c_min > 0.0) || !(c_min < c_max)) throw ParameterError("ev fleet: need 0 < c_min < c_max");
    if (!(eta_ch > 0.0) || eta_ch > 1.0) throw ParameterError("ev fleet: eta_ch outside (0, 1]");
    if (!(s_expected > 0.0) || s_expected > 1.0) {
      throw ParameterError("ev fleet: s_expected outside (0, 1]");
    }
    if (!(p_ch_rated > 0.0) || p_station_max < p_ch_rated) {
      throw ParameterError("ev fleet: station cap below rated charging power");
    }
    if (!(sigma_s > 0.0) || !(sigma_d > 0.0)) throw ParameterError("ev fleet: sigmas must be positive");
    if (!(w_100 >= 0.0)) throw ParameterError("ev fleet: negative consumption");
  }

  double min_soc() const { return c_min / c_max; }
};

struct EvSession {
  int ev_id = 0;
  int arrival_period = 1;      // 1..T
  double soc_arrival = 0.0;
  double required_energy = 0.0;  // kWh to reach s_expected
  double charging_duration = 0.0;  // h actually charged at rated power
  bool soc_clamped = false;
  bool truncated = false;  // could not finish before the end of the horizon
};

// Wrap-around return-time density, before renormalization.
inline double return_time_density_raw(double t, double mu_s, double sigma_s) {
  if (!(t > 0.0) || t > 24.0) return 0.0;
  const double x = (t <= mu_s - 12.0) ? t + 24.0 - mu_s : t - mu_s;
  return std::exp(-x * x / (2.0 * sigma_s * sigma_s)) /
         (std::sqrt(2.0 * std::numbers::pi) * sigma_s);
}

/// Mass of the raw density over (0, 24]: the normal mass inside mu_s +/- 12 h.
inline double return_time_mass(double sigma_s) {
  return std::erf(12.0 / (sigma_s * std::numbers::sqrt2));
}

inline double return_time_density(double t, double mu_s, double sigma_s) {
  return return_time_density_raw(t, mu_s, sigma_s) / return_time_mass(sigma_s);
}

/// Draws from the renormalized wrap-around density: a normal truncated to
/// (mu_s - 12, mu_s + 12] with the part past midnight folded onto the morning.
template <typename Rng>
double sample_return_time(Rng& rng, double mu_s, double sigma_s) {
  std::normal_distribution<double> normal(mu_s, sigma_s);
  for (;;) {
    const double x = normal(rng);
    if (x <= mu_s - 12.0 || x > mu_s + 12.0) continue;
    const double t = x > 24.0 ? x - 24.0 : (x <= 0.0 ? x + 24.0 : x);
    if (t > 0.0 && t <= 24.0) return t;
  }
}

template <typename Rng>
double sample_mileage(Rng& rng, double mu_d, double sigma_d) {
  std::lognormal_distribution<double> d(mu_d, sigma_d);
  for (;;) {
    const double x = d(rng);
    if (x > 0.0) return x;
  }
}

struct ArrivalSoc {
  double soc = 0.0;
  bool clamped = false;
};

inline ArrivalSoc arrival_soc(double km, const EvFleetSpec& spec) {
  if (!(km >= 0.0)) throw DomainError("arrival_soc: negative mileage");
  const double raw = spec.s_expected - spec.w_100 * km / (100.0 * spec.c_max);
  if (raw < spec.min_soc()) return {spec.min_soc(), true};
  return {raw, false};
}

inline double charging_duration(double soc_arrival, const EvFleetSpec& spec) {
  if (soc_arrival > spec.s_expected + 1e-12) {
    throw DomainError("charging_duration: arrival SOC above target");
  }
  return std::max(0.0, spec.s_expected - soc_arrival) * spec.c_max /
         (spec.p_ch_rated * spec.eta_ch);
}

struct FleetSimulation {
  std::vector<double> load;  // kW per period, disorderly charging
  std::vector<EvSession> sessions;
};

/// Per-EV random stream derived from (seed, ev_id) so results do not depend on
/// how EVs are split across workers.
inline std::mt19937_64 ev_stream(std::uint64_t seed, int ev_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(ev_id), 0x45564eu};
  return std::mt19937_64(seq);
}

/// Builds the session of one EV from its return time and mileage and adds its
/// disorderly load (rated power from the start of the arrival period) to `load`.
inline EvSession add_session(int ev_id, double return_time, double km, const EvFleetSpec& spec,
                             double dt, std::vector<double>& load) {
  const int periods = static_cast<int>(load.size());
  EvSession s;
  s.ev_id = ev_id;
  s.arrival_period = std::clamp(static_cast<int>(std::ceil(return_time / dt - 1e-9)), 1, periods);
  const auto soc = arrival_soc(km, spec);
  s.soc_arrival = soc.soc;
  s.soc_clamped = soc.clamped;
  s.required_energy = (spec.s_expected - s.soc_arrival) * spec.c_max;
  double duration = charging_duration(s.soc_arrival, spec);
  const double available = (periods - s.arrival_period + 1) * dt;
  if (duration > available + 1e-12) {
    duration = available;
    s.truncated = true;
  }
  s.charging_duration = duration;
  double remaining = duration;
  for (int t = s.arrival_period - 1; t < periods && remaining > 0.0; ++t) {
    const double on = std::min(dt, remaining);
    load[t] += spec.p_ch_rated * on / dt;
    remaining -= on;
  }
  return s;
}

inline FleetSimulation simulate_fleet(const EvFleetSpec& spec, std::uint64_t seed, double dt,
                                      int periods) {
  spec.validate();
  if (periods <= 0 || std::fabs(periods * dt - 24.0) > 1e-9) {
    throw ParameterError("simulate_fleet: horizon must span 24 h");
  }
  FleetSimulation out;
  out.load.assign(periods, 0.0);
  out.sessions.reserve(spec.n_evs);
  for (int n = 0; n < spec.n_evs; ++n) {
    auto rng = ev_stream(seed, n);
    const double t = sample_return_time(rng, spec.mu_s, spec.sigma_s);
    const double km = sample_mileage(rng, spec.mu_d, spec.sigma_d);
    out.sessions.push_back(add_session(n, t, km, spec, dt, out.load));
  }
  return out;
}

inline void write_sessions_csv(std::ostream& os, const std::vector<EvSession>& sessions) {
  os << "ev_id,arrival_period,soc_arrival,required_energy_kwh,duration_h\n";
  os.precision(12);
  for (const auto& s : sessions) {
    os << s.ev_id << ',' << s.arrival_period << ',' << s.soc_arrival << ',' << s.required_energy
       << ',' << s.charging_duration << '\n';
  }
}

}  // namespace cies
