#pragma once

// Monte Carlo check of reserve adequacy and the per-scenario report.

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <random>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cies/config.hpp"
#include "cies/demand.hpp"
#include "cies/objective.hpp"
#include "cies/schedule.hpp"

namespace cies {

/// Inverse-CDF sampler over the lattice of a ProbSeq. Immutable after
/// construction, so one instance may be shared between threads.
class LatticeSampler {
 public:
  explicit LatticeSampler(const ProbSeq& s) : q_(s.step()) {
    cdf_.reserve(s.size());
    double acc = 0.0;
    for (std::size_t u = 0; u < s.size(); ++u) cdf_.push_back(acc += s[u]);
  }

  template <typename Rng>
  double operator()(Rng& rng) const {
    const double r = std::uniform_real_distribution<double>(0.0, cdf_.back())(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), r);
    const auto u = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    return static_cast<double>(u) * q_;
  }

 private:
  double q_;
  std::vector<double> cdf_;
};

enum class SamplingMode { Discrete, Continuous };

struct McOptions {
  int n_samples = 10000;
  std::uint64_t seed = 1;
  int jobs = 1;
  SamplingMode mode = SamplingMode::Discrete;
};

struct ReserveRates {
  std::vector<double> rate;  // per period
  double min_rate = 1.0;
};

namespace validate_detail {

inline constexpr int kBatch = 1000;
inline constexpr double kCompareTol = 1e-6;

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t period, std::uint64_t batch) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(period), static_cast<std::uint32_t>(batch), 0x5eedu};
  return std::mt19937_64(seq);
}

// Counts covered draws for every (period, batch) cell; cells are spread over
// workers but each owns its substream, so counts do not depend on `jobs`.
template <typename Draw>
ReserveRates run(int periods, int n_samples, int jobs, std::uint64_t seed, const std::vector<double>& threshold,
                 Draw draw) {
  const int batches = (n_samples + kBatch - 1) / kBatch;
  std::vector<long> hits(static_cast<std::size_t>(periods) * batches, 0);
  auto work = [&](int worker, int workers) {
    for (int cell = worker; cell < periods * batches; cell += workers) {
      const int t = cell / batches;
      const int b = cell % batches;
      auto rng = substream(seed, t, b);
      const int n = std::min(kBatch, n_samples - b * kBatch);
      long h = 0;
      for (int i = 0; i < n; ++i) h += draw(t, rng) >= threshold[t] - kCompareTol;
      hits[cell] = h;
    }
  };
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w, jobs);
    for (auto& th : pool) th.join();
  }
  ReserveRates out;
  out.rate.assign(periods, 0.0);
  for (int t = 0; t < periods; ++t) {
    long h = 0;
    for (int b = 0; b < batches; ++b) h += hits[static_cast<std::size_t>(t) * batches + b];
    out.rate[t] = static_cast<double>(h) / n_samples;
    out.min_rate = std::min(out.min_rate, out.rate[t]);
  }
  return out;
}

}  // namespace validate_detail

/// Fraction of draws with R_t >= E_t - X_t, X_t drawn from the per-period
/// joint sequence. `reserve` holds R_grid + R_ESD per period.
inline ReserveRates monte_carlo_reserve_check(const std::vector<double>& reserve, const std::vector<ProbSeq>& seqs,
                                              const McOptions& opt) {
  if (opt.n_samples < 1000) throw ParameterError("monte_carlo_reserve_check: need at least 1000 samples");
  if (reserve.size() != seqs.size()) throw ParameterError("monte_carlo_reserve_check: length mismatch");
  const int T = static_cast<int>(seqs.size());
  std::vector<LatticeSampler> samplers;
  std::vector<double> threshold(T);
  for (int t = 0; t < T; ++t) {
    samplers.emplace_back(seqs[t]);
    threshold[t] = expectation(seqs[t]) - reserve[t];
  }
  return validate_detail::run(T, opt.n_samples, opt.jobs, opt.seed, threshold,
                              [&](int t, std::mt19937_64& rng) { return samplers[t](rng); });
}

inline ReserveRates monte_carlo_reserve_check(const ScheduleSolution& sol, const std::vector<ProbSeq>& seqs,
                                              const McOptions& opt) {
  return monte_carlo_reserve_check(sol.total_reserve(), seqs, opt);
}

/// Same check drawing wind speed and irradiance ratio from the continuous
/// models; E_t stays the discretized expectation, so the gap to the discrete
/// mode measures the discretization error.
inline ReserveRates monte_carlo_reserve_check_continuous(const std::vector<double>& reserve, const ScenarioData& d,
                                                         const McOptions& opt) {
  if (opt.n_samples < 1000) throw ParameterError("monte_carlo_reserve_check: need at least 1000 samples");
  const auto& c = d.cfg;
  const int T = c.periods;
  std::vector<double> threshold(T);
  std::vector<WindPowerModel> wind(T, c.wind);
  std::vector<PvPowerModel> pv(T, c.pv);
  for (int t = 0; t < T; ++t) {
    threshold[t] = d.renewables[t].expected - reserve[t];
    wind[t].scale = c.wind_scale[t];
    pv[t].p_max = c.pv_p_max[t];
  }
  return validate_detail::run(T, opt.n_samples, opt.jobs, opt.seed, threshold, [&](int t, std::mt19937_64& rng) {
    double x = ContinuousWindSampler(wind[t])(rng);
    if (pv[t].p_max > 0.0) x += ContinuousPvSampler(pv[t])(rng);
    return x;
  });
}

inline std::vector<ProbSeq> joint_sequences(const ScenarioData& d) {
  std::vector<ProbSeq> out;
  for (const auto& r : d.renewables) out.push_back(r.joint);
  return out;
}

struct ValidationReport {
  double alpha = 0.0;
  ReserveRates reserve;
  double curtailment_kwh = 0.0;
  std::vector<double> satisfaction;  // percent per period
  CostBreakdown costs;
};

inline std::vector<double> satisfaction_of(const ScheduleSolution& sol, const ScenarioData& d) {
  const auto& l = d.cfg.loads;
  std::vector<CarrierLoads> base, actual;
  for (int t = 0; t < sol.periods; ++t) {
    base.push_back({l.p0[t], d.h0[t], l.q0[t]});
    actual.push_back({l.p0[t] + sol.p_tse[t] - sol.p_ie[t], d.h0[t] - sol.h_ch[t],
                      l.q0[t] + sol.q_tsq[t] - sol.q_iq[t]});
  }
  return satisfaction_series(base, actual);
}

inline ValidationReport scenario_report(const ScheduleSolution& sol, const ScenarioData& d, const McOptions& opt) {
  ValidationReport r;
  r.alpha = d.cfg.alpha;
  r.costs = evaluate_objective(sol, d.cfg, d.renewables);
  for (int t = 0; t < sol.periods; ++t) r.curtailment_kwh += sol.ps[t] * sol.dt;
  r.satisfaction = satisfaction_of(sol, d);
  r.reserve = monte_carlo_reserve_check(sol, joint_sequences(d), opt);
  return r;
}

inline nlohmann::json to_json(const CostBreakdown& b) {
  nlohmann::json j;
  const auto rows = b.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) j[CostBreakdown::kRowNames[i]] = rows[i];
  return j;
}

inline nlohmann::json to_json(const ValidationReport& r) {
  return {{"alpha", r.alpha},
          {"reserve_adequacy", r.reserve.rate},
          {"min_reserve_adequacy", r.reserve.min_rate},
          {"curtailment_kwh", r.curtailment_kwh},
          {"satisfaction_percent", r.satisfaction},
          {"costs_yuan", to_json(r.costs)}};
}

/// Table-style cost CSV: one row per cost term plus curtailment.
inline void write_costs_csv(std::ostream& os, const ValidationReport& r) {
  os << "item,value\n";
  const auto rows = r.costs.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) os << CostBreakdown::kRowNames[i] << ',' << rows[i] << '\n';
  os << "curtailment_kwh," << r.curtailment_kwh << '\n';
}

inline void write_satisfaction_csv(std::ostream& os, const ValidationReport& r) {
  os << "period,satisfaction_percent,reserve_adequacy\n";
  for (std::size_t t = 0; t < r.satisfaction.size(); ++t) {
    os << t + 1 << ',' << r.satisfaction[t] << ',' << r.reserve.rate[t] << '\n';
  }
}

}  // namespace cies
