#pragma once

// Particle swarm baseline with Monte Carlo checking of the reserve chance
// constraint. Particles live in [0, 1]^D; a repair decoder turns every
// position into a schedule that satisfies all deterministic constraints, so
// the search only has to trade cost against the sampled reserve adequacy.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cies/audit.hpp"
#include "cies/ccp.hpp"
#include "cies/config.hpp"
#include "cies/objective.hpp"
#include "cies/schedule.hpp"
#include "cies/validate.hpp"

namespace cies {

struct SearchFailure : Error {
  double best_penalty;
  SearchFailure(const std::string& what, double penalty) : Error(what), best_penalty(penalty) {}
};

struct HiaResult {
  ScheduleSolution schedule;
  CostBreakdown costs;
  double cost = 0.0;
  double wall_seconds = 0.0;
  long evaluations = 0;
};

namespace hia_detail {

enum Gene { kTse, kIe, kTsq, kIq, kHch, kEsd, kHsd, kP2g, kMt, kResEsd, kResGrid, kGenesPerPeriod };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return lo > hi; }
  double at(double g) const { return lo + std::clamp(g, 0.0, 1.0) * (hi - lo); }
};

inline double lerp(double lo, double hi, double g) { return lo + std::clamp(g, 0.0, 1.0) * (hi - lo); }

/// Shifts the raw values by a common offset (clipped to +-bound) so that they
/// sum to zero, then removes the rounding residual period by period.
inline std::vector<double> project_zero_sum(const std::vector<double>& raw, const std::vector<double>& bound) {
  const std::size_t n = raw.size();
  std::vector<double> x(n, 0.0);
  double span = 0.0;
  for (std::size_t t = 0; t < n; ++t) span = std::max(span, std::fabs(raw[t]) + bound[t]);
  if (span == 0.0) return x;
  auto shifted = [&](double lambda) {
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      x[t] = std::clamp(raw[t] - lambda, -bound[t], bound[t]);
      s += x[t];
    }
    return s;
  };
  double lo = -span, hi = span;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * span; ++i) {
    const double mid = 0.5 * (lo + hi);
    (shifted(mid) > 0.0 ? lo : hi) = mid;
  }
  double residual = shifted(0.5 * (lo + hi));
  for (std::size_t t = 0; t < n && residual != 0.0; ++t) {
    const double room = residual > 0.0 ? x[t] + bound[t] : bound[t] - x[t];
    const double step = std::copysign(std::min(std::fabs(residual), room), residual);
    x[t] -= step;
    residual -= step;
  }
  return x;
}

struct Storage {
  std::vector<Interval> reach;  // feasible capacity at the start of each period, T+1 entries
  std::vector<double> max_ch, max_dc;
};

// Backward reachability of the cyclic storage condition C_T = c_min.
inline Storage storage_reach(const StorageSpec& s, const std::vector<double>& max_dc, double dt) {
  const std::size_t T = max_dc.size();
  Storage out;
  out.max_dc = max_dc;
  out.max_ch.assign(T, s.p_ch_max);
  out.reach.assign(T + 1, {});
  out.reach[T] = {s.c_min, s.c_min};
  const double keep = 1.0 - s.k_loss;
  for (std::size_t t = T; t-- > 0;) {
    const auto& nx = out.reach[t + 1];
    const double up = s.eta_ch * out.max_ch[t] * dt;
    const double down = max_dc[t] * dt / s.eta_dc;
    out.reach[t] = {std::max(s.c_min, (nx.lo - up) / keep), std::min(s.c_max, (nx.hi + down) / keep)};
  }
  return out;
}

struct StorageMove {
  double ch = 0.0, dc = 0.0, next = 0.0;
};

// Smallest discharge power that keeps the next state inside the reach set.
inline double storage_min_dc(const StorageSpec& s, const Storage& r, std::size_t t, double c, double dt) {
  const double excess = (1.0 - s.k_loss) * c - r.reach[t + 1].hi;
  return excess > 0.0 ? excess * s.eta_dc / dt : 0.0;
}

inline StorageMove storage_move(const StorageSpec& s, const Storage& r, std::size_t t, double c, double gene,
                                double dt, double dc_cap = std::numeric_limits<double>::infinity()) {
  const double keep = 1.0 - s.k_loss;
  const double max_dc = std::min(r.max_dc[t], dc_cap);
  Interval next{std::max(r.reach[t + 1].lo, keep * c - max_dc * dt / s.eta_dc),
                std::min(r.reach[t + 1].hi, keep * c + s.eta_ch * r.max_ch[t] * dt)};
  next.hi = std::max(next.hi, next.lo);
  StorageMove m;
  m.next = next.at(gene);
  const double delta = m.next - keep * c;
  if (delta >= 0.0) {
    m.ch = std::min(delta / (s.eta_ch * dt), r.max_ch[t]);
  } else {
    m.dc = std::min(-delta * s.eta_dc / dt, max_dc);
  }
  // Keep the stored trajectory consistent with the clipped powers.
  m.next = keep * c + (s.eta_ch * m.ch - m.dc / s.eta_dc) * dt;
  return m;
}

struct UnitState {
  bool on = false;
  double x = 0.0;
};

// Semi-continuous unit with ramp limits between consecutive on-periods;
// falls back to off whenever the request cannot be honoured.
inline UnitState settle_unit(const UnitState& prev, double gene, double lo, double hi, double ramp_lo,
                             double ramp_hi, double cap) {
  if (gene <= 0.5) return {};
  const double top = std::min(hi, cap);
  if (top < lo) return {};
  double x = lerp(lo, hi, (gene - 0.5) * 2.0);
  x = std::min(x, top);
  if (prev.on) x = std::clamp(x, prev.x + ramp_lo, prev.x + ramp_hi);
  if (x < lo - 1e-12 || x > top + 1e-12) return {};
  return {true, std::clamp(x, lo, top)};
}

class Decoder {
 public:
  explicit Decoder(const ScenarioData& d) : d_(d), c_(d.cfg), T_(d.cfg.periods) {
    const auto& dev = c_.devices;
    const double dt = c_.dt;
    // Heat storage can never discharge more than the period's baseline heat;
    // the per-particle limit is the heat actually delivered.
    hch_cap_.resize(T_);
    std::vector<double> hsd_dc(T_), esd_dc(T_, dev.esd.p_dc_max);
    for (int t = 0; t < T_; ++t) {
      hch_cap_[t] = c_.idr_enabled() ? d.h0[t] : 0.0;
      hsd_dc[t] = std::min(dev.hsd.p_dc_max, d.h0[t]);
    }
    hsd_ = storage_reach(dev.hsd, hsd_dc, dt);
    esd_ = storage_reach(dev.esd, esd_dc, dt);
    if (hsd_.reach[0].lo > dev.hsd.c_min + 1e-9 || esd_.reach[0].lo > dev.esd.c_min + 1e-9 ||
        hsd_.reach[0].empty() || esd_.reach[0].empty()) {
      throw ConfigError("hia: storage cycle cannot be closed");
    }
    thermal_reach();
    for (std::size_t n = 0; n < d.fleet.sessions.size() && c_.idr_enabled(); ++n) {
      plans_.push_back(ev_plan(d.fleet.sessions[n], c_.ev, dt, T_));
    }
  }

  int dimension() const { return kGenesPerPeriod * T_ + static_cast<int>(d_.fleet.sessions.size()); }

  /// Returns std::nullopt when the repair cannot produce a schedule.
  std::optional<ScheduleSolution> decode(const std::vector<double>& g) const {
    const auto& dev = c_.devices;
    const double dt = c_.dt;
    const bool idr = c_.idr_enabled();
    const bool coupled = c_.coupling_enabled();
    auto gene = [&](int t, Gene k) { return g[static_cast<std::size_t>(t) * kGenesPerPeriod + k]; };
    ScheduleSolution s = ScheduleSolution::zeros(T_, dt, d_.fleet.sessions.size());

    if (idr) {
      std::vector<double> raw_e(T_), bnd_e(T_), raw_q(T_), bnd_q(T_);
      for (int t = 0; t < T_; ++t) {
        bnd_e[t] = c_.flex.a_tse * c_.loads.p0[t];
        bnd_q[t] = c_.flex.a_tsq * c_.loads.q0[t];
        raw_e[t] = (2.0 * gene(t, kTse) - 1.0) * bnd_e[t];
        raw_q[t] = (2.0 * gene(t, kTsq) - 1.0) * bnd_q[t];
        s.p_ie[t] = gene(t, kIe) * c_.flex.a_ie * c_.loads.p0[t];
        s.q_iq[t] = gene(t, kIq) * c_.flex.a_iq * c_.loads.q0[t];
      }
      s.p_tse = project_zero_sum(raw_e, bnd_e);
      s.q_tsq = project_zero_sum(raw_q, bnd_q);
      if (!schedule_evs(g, s)) return std::nullopt;
    } else {
      s.ev_load = d_.fleet.load;
    }

    s.esd_c[0] = dev.esd.c_min;
    s.hsd_c[0] = dev.hsd.c_min;
    s.t_in[0] = d_.t_neutral;
    UnitState p2g_prev, mt_prev;
    const auto& p2g = dev.p2g;
    const auto& mt = dev.mt;
    for (int t = 0; t < T_; ++t) {
      const auto ut = static_cast<std::size_t>(t);
      s.s_tse[t] = std::max(-s.p_tse[t], 0.0);
      s.s_tsq[t] = std::max(-s.q_tsq[t], 0.0);

      // Heat delivered to the building, inside the comfort reach set and large
      // enough to absorb the discharge the heat storage cannot avoid.
      const double h0 = d_.h0[t];
      const Interval& band = target_[t];
      double h_lo = (band.lo - a_ * s.t_in[t] - e_[t]) / b_;
      double h_hi = (band.hi - a_ * s.t_in[t] - e_[t]) / b_;
      if (h_lo > h_hi) std::swap(h_lo, h_hi);
      h_lo = std::max({h_lo, h0 - hch_cap_[t], storage_min_dc(dev.hsd, hsd_, ut, s.hsd_c[t], dt), 0.0});
      h_hi = std::min(h_hi, h0);
      if (h_lo > h_hi + 1e-9) return std::nullopt;
      h_hi = std::max(h_hi, h_lo);
      const double heat = idr ? lerp(h_hi, h_lo, gene(t, kHch)) : h0;
      s.h_ch[t] = h0 - heat;

      const auto hm = storage_move(dev.hsd, hsd_, ut, s.hsd_c[t], gene(t, kHsd), dt, heat);
      s.hsd_ch[t] = hm.ch;
      s.hsd_dc[t] = hm.dc;
      s.hsd_c[t + 1] = hm.next;
      const double net_dc = hm.dc - hm.ch;
      s.t_in[t + 1] = indoor_temp_step(s.t_in[t], c_.loads.t_out[t], heat, c_.building, dt);

      const auto em = storage_move(dev.esd, esd_, ut, s.esd_c[t], gene(t, kEsd), dt);
      s.esd_ch[t] = em.ch;
      s.esd_dc[t] = em.dc;
      s.esd_c[t + 1] = em.next;

      const double p_load = c_.loads.p0[t] + s.p_tse[t] - s.p_ie[t] + s.ev_load[t];
      const double q_load = c_.loads.q0[t] + s.q_tsq[t] - s.q_iq[t];
      const double elec_need = p_load + em.ch - em.dc;
      if (q_load < -1e-9 || elec_need < -1e-9) return std::nullopt;

      UnitState mt_now, p2g_now;
      if (coupled) {
        double cap = mt.q_max;
        cap = std::min(cap, (heat - net_dc) / (mt.eta_h() * mt.hhv));
        cap = std::min(cap, elec_need / (mt.eta_e * mt.hhv));
        cap = std::min(cap, c_.q_grid_max - q_load);
        mt_now = settle_unit(mt_prev, gene(t, kMt), mt.q_min, mt.q_max, mt.ramp_min, mt.ramp_max, cap);
        const double p2g_cap = (q_load + mt_now.x) * p2g.hhv / p2g.eta;
        p2g_now = settle_unit(p2g_prev, gene(t, kP2g), p2g.p_min, p2g.p_max, p2g.ramp_min, p2g.ramp_max,
                              p2g_cap);
      }
      mt_prev = mt_now;
      p2g_prev = p2g_now;
      s.psi[t] = mt_now.on;
      s.q_mt[t] = mt_now.x;
      s.p_mt[t] = mt.eta_e * s.q_mt[t] * mt.hhv;
      s.h_mt[t] = mt.eta_h() * s.q_mt[t] * mt.hhv;
      s.theta[t] = p2g_now.on;
      s.p_p2g[t] = p2g_now.x;
      s.q_p2g[t] = p2g.eta * s.p_p2g[t] / p2g.hhv;

      s.h_eb[t] = std::max(0.0, heat - net_dc - s.h_mt[t]);
      if (s.h_eb[t] > dev.eb.h_max) return std::nullopt;
      s.p_eb[t] = s.h_eb[t] / dev.eb.eta;

      // Expected renewable output: electric load, then boiler, then P2G.
      double rest = d_.renewables[t].expected;
      const double l_el = std::max(0.0, elec_need - s.p_mt[t]);
      s.prg_el[t] = std::min(rest, l_el);
      rest -= s.prg_el[t];
      s.pg_el[t] = l_el - s.prg_el[t];
      s.prg_hl[t] = std::min(rest, s.p_eb[t]);
      rest -= s.prg_hl[t];
      s.pg_hl[t] = s.p_eb[t] - s.prg_hl[t];
      s.prg_p2g[t] = std::min(rest, s.p_p2g[t]);
      rest -= s.prg_p2g[t];
      s.pg_p2g[t] = s.p_p2g[t] - s.prg_p2g[t];
      s.ps[t] = rest;

      s.q_gl[t] = q_load + s.q_mt[t] - s.q_p2g[t];
      if (s.q_gl[t] < -1e-9 || s.q_gl[t] > c_.q_grid_max + 1e-9) return std::nullopt;
      s.q_gl[t] = std::max(0.0, s.q_gl[t]);
      s.q_mt_p2g[t] = std::min(s.q_mt[t], s.q_p2g[t]);
      s.q_mt_g[t] = s.q_mt[t] - s.q_mt_p2g[t];

      const double headroom = c_.p_grid_max - s.pg_el[t] - s.pg_hl[t];
      if (headroom < -1e-9) return std::nullopt;
      const double esd_room = std::min(dev.esd.eta_dc * (s.esd_c[t] - dev.esd.c_min) / dt,
                                       dev.esd.p_dc_max - s.esd_dc[t]);
      s.r_esd[t] = gene(t, kResEsd) * std::max(0.0, esd_room);
      s.r_grid[t] = gene(t, kResGrid) * std::max(0.0, headroom);
    }
    return s;
  }

 private:
  // Comfort-band reach sets for the indoor temperature, assuming heat
  // delivery anywhere in [h0 - cap, h0].
  void thermal_reach() {
    const double dt = c_.dt;
    const double g = c_.building.conductance_kw();
    const double cap = c_.building.capacitance_kwh();
    a_ = 1.0 - dt * g / cap;
    b_ = dt / cap;
    e_.resize(T_);
    target_.assign(T_, {});
    Interval next{-kInf, kInf};
    for (int t = T_; t-- > 0;) {
      e_[t] = dt * g * c_.loads.t_out[t] / cap;
      const auto band = comfort_band(static_cast<std::size_t>(t), c_.comfort);
      target_[t] = {std::max(band.first, next.lo), std::min(band.second, next.hi)};
      const double h_lo = d_.h0[t] - hch_cap_[t];
      const double h_hi = d_.h0[t];
      double lo = (target_[t].lo - b_ * h_hi - e_[t]) / a_;
      double hi = (target_[t].hi - b_ * h_lo - e_[t]) / a_;
      if (lo > hi) std::swap(lo, hi);
      next = {lo, hi};
    }
  }

  bool schedule_evs(const std::vector<double>& g, ScheduleSolution& s) const {
    const double cap = c_.ev.p_station_max + 1e-9;
    std::vector<double>& load = s.ev_load;
    for (const auto& p : plans_) {
      if (!p.truncated || p.periods == 0) continue;
      for (int t = p.first_period; t < T_; ++t) load[t] += p.power_kw;
    }
    const std::size_t base = static_cast<std::size_t>(kGenesPerPeriod) * T_;
    for (std::size_t n = 0; n < plans_.size(); ++n) {
      const auto& p = plans_[n];
      if (p.periods == 0) continue;
      if (p.truncated) {
        for (int t = p.first_period; t < T_; ++t) s.ev_on[n][t] = 1.0;
        continue;
      }
      const int slots = T_ - p.first_period - p.periods + 1;
      const int pref = std::min(slots - 1, static_cast<int>(g[base + n] * slots));
      int chosen = -1;
      for (int k = 0; k < 2 * slots && chosen < 0; ++k) {
        const int off = pref + ((k % 2) ? (k + 1) / 2 : -(k / 2));
        if (off < 0 || off >= slots) continue;
        bool fits = true;
        for (int t = p.first_period + off; t < p.first_period + off + p.periods; ++t) {
          fits = fits && load[t] + p.power_kw <= cap;
        }
        if (fits) chosen = off;
      }
      if (chosen < 0) return false;
      for (int t = p.first_period + chosen; t < p.first_period + chosen + p.periods; ++t) {
        load[t] += p.power_kw;
        s.ev_on[n][t] = 1.0;
      }
    }
    return true;
  }

  const ScenarioData& d_;
  const CiesConfig& c_;
  int T_;
  std::vector<double> hch_cap_;
  Storage hsd_, esd_;
  double a_ = 1.0, b_ = 0.0;
  std::vector<double> e_;
  std::vector<Interval> target_;  // allowed indoor temperature at the end of each period
  std::vector<EvPlan> plans_;
};

inline std::mt19937_64 particle_stream(std::uint64_t seed, std::uint64_t iteration, std::uint64_t particle,
                                       std::uint32_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(iteration), static_cast<std::uint32_t>(particle), purpose};
  return std::mt19937_64(seq);
}

inline constexpr double kDecodeFailure = 1e9;
inline constexpr double kAdequacyWeight = 1e5;  // yuan per unit of missing adequacy

struct Evaluation {
  double fitness = std::numeric_limits<double>::infinity();
  double cost = 0.0;
  double penalty = 0.0;
  bool accepted = false;  // decoded, sampled adequacy >= alpha and exact reserve >= minimum
};

}  // namespace hia_detail

/// Runs the swarm and returns the cheapest schedule that passed both the
/// sampled check and the exact reserve audit. Throws SearchFailure if none did.
inline HiaResult hia_solve(const ScenarioData& d, double alpha, const PsoParams& params, int jobs = 1) {
  using namespace hia_detail;
  params.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto& c = d.cfg;
  const int T = c.periods;
  const Decoder decoder(d);
  const int dim = decoder.dimension();
  const int pop = params.population;

  std::vector<LatticeSampler> samplers;
  std::vector<double> need(T);
  for (int t = 0; t < T; ++t) {
    samplers.emplace_back(d.renewables[t].joint);
    need[t] = min_reserve(d.renewables[t].joint, alpha);
  }

  auto evaluate = [&](const std::vector<double>& x, std::mt19937_64& rng, ScheduleSolution* keep) {
    Evaluation ev;
    auto s = decoder.decode(x);
    if (!s) {
      ev.fitness = kDecodeFailure;
      ev.penalty = kDecodeFailure;
      return ev;
    }
    ev.cost = evaluate_objective(*s, c, d.renewables).total;
    bool exact_ok = true;
    double deficit = 0.0;
    for (int t = 0; t < T; ++t) {
      const double r = s->r_grid[t] + s->r_esd[t];
      const double threshold = d.renewables[t].expected - r;
      int hits = 0;
      for (int i = 0; i < params.mc_samples; ++i) hits += samplers[t](rng) >= threshold - 1e-6;
      deficit += std::max(0.0, alpha - static_cast<double>(hits) / params.mc_samples);
      exact_ok = exact_ok && r >= need[t] - 1e-9;
    }
    ev.penalty = kAdequacyWeight * deficit;
    ev.fitness = ev.cost + ev.penalty;
    ev.accepted = deficit == 0.0 && exact_ok;
    if (keep && ev.accepted) *keep = std::move(*s);
    return ev;
  };

  std::vector<std::vector<double>> pos(pop, std::vector<double>(dim)), vel(pop, std::vector<double>(dim, 0.0));
  for (int p = 0; p < pop; ++p) {
    auto rng = particle_stream(params.seed, 0, p, 0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : pos[p]) v = u(rng);
  }
  auto pbest = pos;
  std::vector<double> pbest_fit(pop, std::numeric_limits<double>::infinity());
  std::vector<double> gbest;
  double gbest_fit = std::numeric_limits<double>::infinity();
  double best_penalty = std::numeric_limits<double>::infinity();
  std::optional<ScheduleSolution> best;
  double best_cost = std::numeric_limits<double>::infinity();
  constexpr double kVmax = 0.25;

  std::vector<Evaluation> evals(pop);
  std::vector<ScheduleSolution> kept(pop);
  jobs = std::max(1, jobs);
  long evaluations = 0;
  for (int it = 0; it < params.iterations; ++it) {
    auto work = [&](int w) {
      for (int p = w; p < pop; p += jobs) {
        auto rng = particle_stream(params.seed, it + 1, p, 1);
        kept[p].periods = 0;
        evals[p] = evaluate(pos[p], rng, &kept[p]);
      }
    };
    if (jobs == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
      for (auto& th : pool) th.join();
    }
    evaluations += pop;
    for (int p = 0; p < pop; ++p) {
      const auto& ev = evals[p];
      best_penalty = std::min(best_penalty, ev.penalty);
      if (ev.accepted && ev.cost < best_cost && kept[p].periods == T) {
        best_cost = ev.cost;
        best = kept[p];
      }
      if (ev.fitness < pbest_fit[p]) {
        pbest_fit[p] = ev.fitness;
        pbest[p] = pos[p];
      }
      if (ev.fitness < gbest_fit) {
        gbest_fit = ev.fitness;
        gbest = pos[p];
      }
    }
    const double w = params.iterations > 1
                         ? params.inertia_start - (params.inertia_start - params.inertia_end) * it /
                                                      (params.iterations - 1)
                         : params.inertia_start;
    for (int p = 0; p < pop; ++p) {
      auto rng = particle_stream(params.seed, it + 1, p, 2);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (int k = 0; k < dim; ++k) {
        double v = w * vel[p][k] + params.cognitive * u(rng) * (pbest[p][k] - pos[p][k]) +
                   params.social * u(rng) * (gbest[k] - pos[p][k]);
        v = std::clamp(v, -kVmax, kVmax);
        vel[p][k] = v;
        pos[p][k] = std::clamp(pos[p][k] + v, 0.0, 1.0);
      }
    }
  }

  if (!best) {
    throw SearchFailure("hia: no particle passed the reserve checks; best penalty " + std::to_string(best_penalty),
                        best_penalty);
  }
  ScenarioData audited = d;
  audited.cfg.alpha = alpha;
  const auto violations = audit_feasibility(*best, audited, AuditOptions{1e-6, true});
  if (!violations.empty()) {
    throw SearchFailure("hia: best schedule fails audit at " + violations.front().constraint, best_penalty);
  }
  HiaResult r;
  r.schedule = std::move(*best);
  r.costs = evaluate_objective(r.schedule, c, d.renewables);
  r.cost = r.costs.total;
  r.evaluations = evaluations;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct MethodRun {
  double alpha = 0.0;
  double cost = 0.0;
  double seconds = 0.0;
};

struct ComparisonRow {
  double alpha = 0.0;
  double milp_cost = 0.0, milp_seconds = 0.0;
  double hia_cost = 0.0, hia_seconds = 0.0;
  double gap_percent = 0.0;  // (HIA - MILP) / MILP
  bool hia_beats_milp = false;
};

inline std::vector<ComparisonRow> compare_methods(const std::vector<MethodRun>& milp, const std::vector<MethodRun>& hia) {
  if (milp.size() != hia.size()) throw ParameterError("compare_methods: row count mismatch");
  std::vector<ComparisonRow> rows;
  for (std::size_t i = 0; i < milp.size(); ++i) {
    if (std::fabs(milp[i].alpha - hia[i].alpha) > 1e-12) throw ParameterError("compare_methods: alpha mismatch");
    ComparisonRow r;
    r.alpha = milp[i].alpha;
    r.milp_cost = milp[i].cost;
    r.milp_seconds = milp[i].seconds;
    r.hia_cost = hia[i].cost;
    r.hia_seconds = hia[i].seconds;
    r.gap_percent = milp[i].cost != 0.0 ? 100.0 * (hia[i].cost - milp[i].cost) / std::fabs(milp[i].cost) : 0.0;
    r.hia_beats_milp = hia[i].cost < milp[i].cost - 1e-6;
    rows.push_back(r);
  }
  return rows;
}

inline void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  os << "confidence_level,proposed_cost_yuan,proposed_time_s,hia_cost_yuan,hia_time_s,gap_percent,hia_beats_proposed\n";
  for (const auto& r : rows) {
    os << r.alpha << ',' << r.milp_cost << ',' << r.milp_seconds << ',' << r.hia_cost << ',' << r.hia_seconds << ','
       << r.gap_percent << ',' << (r.hia_beats_milp ? 1 : 0) << '\n';
  }
}

}  // namespace cies
