#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cies/hia.hpp"
#include "cies/pipeline.hpp"
#include "support.hpp"

using namespace cies;

namespace {

// Two 12-hour periods, no EVs and no reserve requirement, P2G/MT off: every
// remaining decision is continuous.
CiesConfig tiny_config() {
  auto c = test::bundled_config();
  c.periods = 2;
  c.dt = 12.0;
  c.scenario = 2;
  c.alpha = 0.0;
  c.ev.n_evs = 0;
  c.building.volume = 400000.0;
  auto pick = [](std::vector<double>& v) { v = {v[3], v[18]}; };
  for (auto* v : {&c.wind_scale, &c.pv_p_max, &c.loads.p0, &c.loads.q0, &c.loads.t_out, &c.loads.price_elec,
                  &c.loads.price_gas, &c.costs.reserve_grid, &c.comfort.pmv_limit}) {
    pick(*v);
  }
  c.devices.esd.p_ch_max = c.devices.esd.p_dc_max = 10.0;
  c.devices.hsd.p_ch_max = c.devices.hsd.p_dc_max = 10.0;
  c.validate();
  return c;
}

PsoParams small_params(std::uint64_t seed = 3) {
  PsoParams p;
  p.population = 30;
  p.iterations = 150;
  p.mc_samples = 200;
  p.seed = seed;
  return p;
}

}  // namespace

TEST(ZeroSumProjection, SumsToZeroWithinBounds) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0), b(0.0, 50.0);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> raw(24), bound(24);
    for (int t = 0; t < 24; ++t) {
      bound[t] = b(rng);
      raw[t] = u(rng) * bound[t];
    }
    const auto x = hia_detail::project_zero_sum(raw, bound);
    double s = 0.0;
    for (int t = 0; t < 24; ++t) {
      ASSERT_LE(std::fabs(x[t]), bound[t] + 1e-12);
      s += x[t];
    }
    ASSERT_NEAR(s, 0.0, 1e-9);
  }
}

TEST(Decoder, RandomPositionsPassDeterministicAudit) {
  for (int scenario : {1, 2, 3}) {
    auto c = test::bundled_config();
    c.scenario = scenario;
    const auto d = prepare(c);
    const hia_detail::Decoder dec(d);
    std::mt19937_64 rng(scenario);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int decoded = 0;
    for (int i = 0; i < 100; ++i) {
      std::vector<double> g(dec.dimension());
      for (auto& x : g) x = u(rng);
      const auto s = dec.decode(g);
      if (!s) continue;
      ++decoded;
      for (const auto& v : audit_feasibility(*s, d)) {
        ASSERT_EQ(v.constraint, "reserve") << scenario << ' ' << v.constraint << " period " << v.period;
      }
    }
    EXPECT_GT(decoded, 50) << scenario;
  }
}

TEST(Hia, FixedSeedIsDeterministic) {
  const auto d = prepare(tiny_config());
  auto p = small_params();
  p.iterations = 40;
  const auto a = hia_solve(d, 0.0, p, 1);
  const auto b = hia_solve(d, 0.0, p, 1);
  const auto c = hia_solve(d, 0.0, p, 4);
  EXPECT_EQ(a.cost, b.cost);
  EXPECT_EQ(a.cost, c.cost);
  EXPECT_EQ(a.schedule.pg_el, c.schedule.pg_el);
  EXPECT_EQ(a.evaluations, 40L * 30L);
}

TEST(Hia, TinyInstanceNearMilp) {
  CIES_REQUIRE_SOLVER();
  const auto cfg = tiny_config();
  ExternalCommandBackend backend(test::solver_config());
  const auto milp = solve_milp(cfg, backend);
  ASSERT_TRUE(milp.violations.empty());
  EXPECT_EQ(milp.data.fleet.sessions.size(), 0u);
  const auto hia = hia_solve(milp.data, 0.0, small_params());
  EXPECT_GE(hia.cost, milp.costs.total - 1e-6);
  EXPECT_LE(hia.cost, milp.costs.total * 1.01) << "milp " << milp.costs.total << " hia " << hia.cost;
  EXPECT_TRUE(audit_feasibility(hia.schedule, milp.data, {1e-6, true}).empty());
}

TEST(Hia, ReturnedScheduleAuditsAtRequestedAlpha) {
  auto c = test::bundled_config();
  c.alpha = 0.9;
  const auto d = prepare(c);
  PsoParams p;
  p.population = 20;
  p.iterations = 20;
  p.mc_samples = 200;
  const auto r = hia_solve(d, 0.9, p, 2);
  EXPECT_TRUE(audit_feasibility(r.schedule, d, {1e-6, true}).empty());
  EXPECT_NEAR(r.cost, evaluate_objective(r.schedule, c, d.renewables).total, 1e-9);
}

TEST(Hia, ReportsFailureWithPenalty) {
  auto c = test::bundled_config();
  c.alpha = 1.0;
  double peak = 0.0;
  const auto d0 = prepare(c);
  for (int t = 0; t < c.periods; ++t) peak = std::max(peak, c.loads.p0[t] + d0.fleet.load[t] + d0.h0[t]);
  c.p_grid_max = peak + 1.0;
  c.devices.esd.p_dc_max = 1.0;
  const auto d = prepare(c);
  PsoParams p;
  p.population = 5;
  p.iterations = 3;
  p.mc_samples = 100;
  try {
    hia_solve(d, 1.0, p);
    FAIL() << "expected SearchFailure";
  } catch (const SearchFailure& e) {
    EXPECT_GT(e.best_penalty, 0.0);
  }
}

TEST(CompareMethods, GapAndFlags) {
  const std::vector<MethodRun> milp = {{0.9, 100.0, 1.0}, {0.95, 200.0, 2.0}};
  auto rows = compare_methods(milp, milp);
  for (const auto& r : rows) {
    EXPECT_DOUBLE_EQ(r.gap_percent, 0.0);
    EXPECT_FALSE(r.hia_beats_milp);
  }
  rows = compare_methods(milp, {{0.9, 110.0, 5.0}, {0.95, 190.0, 9.0}});
  EXPECT_NEAR(rows[0].gap_percent, 10.0, 1e-12);
  EXPECT_FALSE(rows[0].hia_beats_milp);
  EXPECT_NEAR(rows[1].gap_percent, -5.0, 1e-12);
  EXPECT_TRUE(rows[1].hia_beats_milp);
  EXPECT_THROW(compare_methods(milp, {{0.9, 1.0, 1.0}}), ParameterError);

  std::ostringstream os;
  write_comparison_csv(os, rows);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "confidence_level,proposed_cost_yuan,proposed_time_s,hia_cost_yuan,hia_time_s,gap_percent,hia_beats_proposed");
}

TEST(PsoParams, Validation) {
  PsoParams p;
  p.population = 1;
  EXPECT_THROW(p.validate(), ParameterError);
  p = PsoParams{};
  p.mc_samples = 50;
  EXPECT_THROW(p.validate(), ParameterError);
  p = PsoParams{};
  p.cognitive = 0.0;
  EXPECT_THROW(p.validate(), ParameterError);
}
