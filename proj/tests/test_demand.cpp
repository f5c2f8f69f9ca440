#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cies/demand.hpp"

using namespace cies;

namespace {

ComfortParams comfort_with(double limit) {
  ComfortParams cp;
  cp.pmv_limit = {limit};
  return cp;
}

LoadProfiles profiles(std::vector<double> p0, std::vector<double> q0) {
  LoadProfiles l;
  const auto n = p0.size();
  l.p0 = std::move(p0);
  l.q0 = std::move(q0);
  l.t_out.assign(n, 0.0);
  l.price_elec.assign(n, 1.0);
  l.price_gas.assign(n, 1.0);
  return l;
}

}  // namespace

TEST(ComfortBand, Examples) {
  auto band = comfort_band(0, comfort_with(0.5));
  EXPECT_NEAR(band.first, 17.91, 0.01);
  EXPECT_NEAR(band.second, 23.23, 0.01);
  band = comfort_band(0, comfort_with(0.9));
  EXPECT_NEAR(band.first, 15.79, 0.01);
  EXPECT_NEAR(band.second, 25.36, 0.01);
  for (double m : {60.0, 80.0, 120.0}) {
    ComfortParams cp;
    cp.m_met = m;
    EXPECT_NEAR(pmv_index(cp.t_skin, cp), 2.43, 1e-12);
  }
}

TEST(ComfortBand, InvertsPmv) {
  const auto cp = comfort_with(0.5);
  const auto band = comfort_band(0, cp);
  EXPECT_NEAR(pmv_index(band.first, cp), -0.5, 1e-12);
  EXPECT_NEAR(pmv_index(band.second, cp), 0.5, 1e-12);
}

TEST(ComfortBand, WidensWithLimit) {
  double lo = 1e9, hi = -1e9;
  for (double limit : {0.1, 0.3, 0.5, 0.7, 0.9, 1.2}) {
    const auto b = comfort_band_for_limit(limit, ComfortParams{});
    EXPECT_LT(b.first, lo);
    EXPECT_GT(b.second, hi);
    lo = b.first;
    hi = b.second;
  }
}

TEST(ComfortBand, DefaultSchedule) {
  const auto s = ComfortParams::default_pmv_schedule(24, 1.0);
  for (int t = 0; t < 24; ++t) {
    const int hour = t + 1;
    EXPECT_DOUBLE_EQ(s[t], (hour >= 8 && hour <= 19) ? 0.5 : 0.9) << hour;
  }
}

TEST(IndoorTemp, TableBuildingExample) {
  BuildingThermal b;
  EXPECT_NEAR(b.capacitance_kwh(), 1.007 * 1.2 * 36000.0 / 3600.0, 1e-12);
  EXPECT_NEAR(b.capacitance_kwh(), 12.084, 1e-3);
  EXPECT_NEAR(b.conductance_kw() * 30.0, 36.0, 1e-12);
  EXPECT_NEAR(indoor_temp_step(20.0, -10.0, 0.0, b, 1.0), 20.0 - 36.0 / 12.084, 1e-12);
  EXPECT_NEAR(indoor_temp_step(20.0, -10.0, 0.0, b, 1.0), 17.02, 0.01);
}

TEST(IndoorTemp, SteadyStateAndNoGradient) {
  BuildingThermal b;
  EXPECT_NEAR(indoor_temp_step(21.0, -5.0, b.conductance_kw() * 26.0, b, 1.0), 21.0, 1e-12);
  EXPECT_DOUBLE_EQ(indoor_temp_step(-3.0, -3.0, 0.0, b, 1.0), -3.0);
  EXPECT_THROW(indoor_temp_step(20.0, 0.0, 0.0, b, 0.0), DomainError);
}

TEST(IndoorTemp, ContractionTowardBalance) {
  BuildingThermal b;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> temp(-20.0, 30.0), heat(0.0, 60.0);
  for (int i = 0; i < 1000; ++i) {
    const double t_out = temp(rng), h = heat(rng), t = temp(rng);
    const double balance = t_out + h / b.conductance_kw();
    const double next = indoor_temp_step(t, t_out, h, b, 1.0);
    if (std::fabs(t - balance) > 1e-9) {
      EXPECT_LT(std::fabs(next - balance), std::fabs(t - balance));
    }
  }
}

TEST(BaselineHeat, Examples) {
  BuildingThermal b;
  EXPECT_NEAR(baseline_heat_demand(20.0, -10.0, b), 36.0, 1e-12);
  EXPECT_DOUBLE_EQ(baseline_heat_demand(5.0, 5.0, b), 0.0);
  EXPECT_DOUBLE_EQ(baseline_heat_demand(5.0, 10.0, b), 0.0);
  EXPECT_NEAR(baseline_heat_demand(22.0, -10.0, b) - baseline_heat_demand(20.0, -10.0, b), 2.4, 1e-12);
}

TEST(AggregateLoads, Examples) {
  auto l = profiles({100.0, 80.0}, {20.0, 10.0});
  auto d = FlexDecision::zeros(2);
  const std::vector<double> h0 = {36.0, 30.0};
  auto a = aggregate_flexible_loads(l, d, h0);
  EXPECT_EQ(a.p_load, l.p0);
  EXPECT_EQ(a.q_load, l.q0);
  EXPECT_EQ(a.h_load, h0);
  d.p_tse[0] = 5.0;
  d.p_ie[0] = 10.0;
  d.h_ch[0] = 6.0;
  a = aggregate_flexible_loads(l, d, h0);
  EXPECT_DOUBLE_EQ(a.p_load[0], 95.0);
  EXPECT_DOUBLE_EQ(a.h_load[0], 30.0);
  d.h_ch[1] = 31.0;
  EXPECT_THROW(aggregate_flexible_loads(l, d, h0), InfeasibleDecisionError);
}

TEST(FlexBounds, Examples) {
  auto l = profiles({100.0, 100.0, 100.0}, {20.0, 20.0, 20.0});
  FlexRatios r;
  auto d = FlexDecision::zeros(3);
  d.p_tse = {11.0, -11.0, 0.0};
  auto v = check_flex_bounds(l, d, r);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].constraint, "tse_bound");
  EXPECT_EQ(v[0].period, 1);
  EXPECT_NEAR(v[0].margin, 1.0, 1e-12);

  d = FlexDecision::zeros(3);
  d.p_tse = {5.0, -5.0, 0.0};
  EXPECT_TRUE(check_flex_bounds(l, d, r).empty());
  d.q_iq = {2.0, 0.0, 0.0};
  EXPECT_TRUE(check_flex_bounds(l, d, r).empty());
  d.q_iq = {2.1, 0.0, 0.0};
  EXPECT_EQ(check_flex_bounds(l, d, r).size(), 1u);

  d = FlexDecision::zeros(3);
  d.q_tsq = {1.0, 0.0, 0.0};
  v = check_flex_bounds(l, d, r);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].constraint, "tsq_zero_sum");
}

TEST(FlexBounds, ShiftingConservesEnergy) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> p0(24), q0(24);
    for (auto& x : p0) x = 100.0 + 400.0 * u(rng);
    for (auto& x : q0) x = 10.0 + 40.0 * u(rng);
    auto l = profiles(p0, q0);
    auto d = FlexDecision::zeros(24);
    // Pairwise opposite shifts keep the sum at zero and within bounds.
    for (int t = 0; t + 1 < 24; t += 2) {
      const double m = 0.1 * std::min(p0[t], p0[t + 1]) * u(rng);
      d.p_tse[t] = m;
      d.p_tse[t + 1] = -m;
    }
    for (int t = 0; t < 24; ++t) d.p_ie[t] = 0.1 * p0[t] * u(rng);
    ASSERT_TRUE(check_flex_bounds(l, d, FlexRatios{}).empty());
    const auto a = aggregate_flexible_loads(l, d, std::vector<double>(24, 0.0));
    double lhs = 0.0, rhs = 0.0;
    for (int t = 0; t < 24; ++t) {
      lhs += a.p_load[t];
      rhs += p0[t] - d.p_ie[t];
    }
    EXPECT_NEAR(lhs, rhs, 1e-9);
  }
}

TEST(Satisfaction, Examples) {
  const CarrierLoads base{100.0, 50.0, 20.0};
  EXPECT_DOUBLE_EQ(satisfaction_index(base, base), 100.0);
  EXPECT_NEAR(satisfaction_index(base, {90.0, 55.0, 18.0}), 90.0, 1e-12);
  EXPECT_NEAR(satisfaction_index(base, {70.0, 50.0, 20.0}), 90.0, 1e-12);
  EXPECT_NEAR(satisfaction_index({100.0, 0.0, 20.0}, {90.0, 5.0, 20.0}), 95.0, 1e-12);
}

TEST(Satisfaction, HundredOnlyWithoutDeviation) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  const CarrierLoads base{100.0, 50.0, 20.0};
  for (int i = 0; i < 500; ++i) {
    const CarrierLoads a{100.0 * (1 + u(rng)), 50.0 * (1 + u(rng)), 20.0 * (1 + u(rng))};
    const double s = satisfaction_index(base, a);
    EXPECT_LT(s, 100.0);
    EXPECT_GE(s, 0.0);
  }
}
