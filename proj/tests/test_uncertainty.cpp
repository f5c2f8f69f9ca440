#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cies/uncertainty.hpp"

using namespace cies;

namespace {

// Composite midpoint rule; deliberately simpler than the library quadrature.
template <typename F>
double midpoint(F f, double a, double b, int n = 200000) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}

ProbSeq random_seq(std::mt19937_64& rng, double q, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(len(rng));
  double s = 0.0;
  for (double& x : p) s += (x = u(rng));
  for (double& x : p) x /= s;
  return ProbSeq(q, p);
}

}  // namespace

TEST(WindDistribution, PointMassesMatchWeibullCdf) {
  const auto d = wt_distribution(WindPowerModel{});
  EXPECT_NEAR(d.mass_at_zero, 1.0 - std::exp(-std::pow(0.3, 1.8)), 1e-12);
  EXPECT_NEAR(d.mass_at_zero, 0.1082, 5e-5);
  EXPECT_NEAR(d.mass_at_max, std::exp(-std::pow(1.5, 1.8)), 1e-12);
  EXPECT_NEAR(d.mass_at_max, 0.1256, 5e-5);
}

TEST(WindDistribution, PointMassesAgreeWithSampledSpeeds) {
  std::mt19937_64 rng(11);
  std::weibull_distribution<double> speed(1.8, 10.0);
  const int n = 400000;
  int below = 0, above = 0;
  for (int i = 0; i < n; ++i) {
    const double v = speed(rng);
    below += v < 3.0;
    above += v >= 15.0;
  }
  const auto d = wt_distribution(WindPowerModel{});
  EXPECT_NEAR(static_cast<double>(below) / n, d.mass_at_zero, 0.003);
  EXPECT_NEAR(static_cast<double>(above) / n, d.mass_at_max, 0.003);
}

TEST(WindDistribution, TotalMassIsOne) {
  for (double scale : {5.0, 8.0, 10.0, 13.0}) {
    for (double shape : {1.2, 1.8, 2.5}) {
      WindPowerModel m;
      m.scale = scale;
      m.shape = shape;
      const auto d = wt_distribution(m);
      EXPECT_NEAR(d.total_mass(), 1.0, 1e-6) << scale << ' ' << shape;
      EXPECT_NEAR(d.mass_at_zero + d.mass_at_max + midpoint(d.density, 0.0, m.p_rated), 1.0, 1e-6);
    }
  }
}

TEST(WindDistribution, MassesMoveWithSpeedThresholds) {
  double prev_zero = -1.0;
  for (double v_in : {2.0, 2.5, 3.0, 3.5, 4.0}) {
    WindPowerModel m;
    m.v_in = v_in;
    const double z = wt_distribution(m).mass_at_zero;
    EXPECT_GT(z, prev_zero);
    prev_zero = z;
  }
  double prev_max = 2.0;
  for (double v_r : {12.0, 13.0, 15.0, 17.0}) {
    WindPowerModel m;
    m.v_r = v_r;
    const double x = wt_distribution(m).mass_at_max;
    EXPECT_LT(x, prev_max);
    prev_max = x;
  }
}

TEST(WindDistribution, RejectsInvalidParameters) {
  WindPowerModel m;
  m.scale = 0.0;
  EXPECT_THROW(wt_distribution(m), ParameterError);
  m = WindPowerModel{};
  m.v_in = 15.0;
  EXPECT_THROW(wt_distribution(m), ParameterError);
  m = WindPowerModel{};
  m.shape = -1.0;
  EXPECT_THROW(wt_distribution(m), ParameterError);
}

TEST(PvDensity, UniformBeta) {
  PvPowerModel m{1.0, 1.0, 360.0};
  for (double p : {0.5, 10.0, 180.0, 359.0}) EXPECT_NEAR(pv_density(p, m), 1.0 / 360.0, 1e-12);
}

TEST(PvDensity, ModeAtOneThird) {
  PvPowerModel m{3.0, 5.0, 360.0};
  double best = 0.0, arg = 0.0;
  for (int i = 1; i < 36000; ++i) {
    const double p = i * 0.01;
    const double f = pv_density(p, m);
    if (f > best) best = f, arg = p;
  }
  EXPECT_NEAR(arg / 360.0, 1.0 / 3.0, 1e-4);
}

TEST(PvDensity, Normalized) {
  for (auto [l1, l2] : {std::pair{3.0, 5.0}, {2.0, 2.0}, {1.5, 4.0}}) {
    PvPowerModel m{l1, l2, 360.0};
    EXPECT_NEAR(midpoint([&](double p) { return pv_density(p, m); }, 0.0, 360.0), 1.0, 1e-6);
  }
}

TEST(PvDensity, DomainError) {
  PvPowerModel m;
  EXPECT_THROW(pv_density(0.0, m), DomainError);
  EXPECT_THROW(pv_density(360.0, m), DomainError);
  EXPECT_THROW(pv_density(-1.0, m), DomainError);
}

TEST(Discretize, PointMassAtZero) {
  MixedPowerDistribution d;
  d.mass_at_zero = 1.0;
  d.p_max = 100.0;
  const auto s = discretize(d, 10.0);
  ASSERT_EQ(s.size(), 11u);
  EXPECT_DOUBLE_EQ(s[0], 1.0);
  for (std::size_t u = 1; u < s.size(); ++u) EXPECT_DOUBLE_EQ(s[u], 0.0);
}

TEST(Discretize, UniformDensityBins) {
  MixedPowerDistribution d;
  d.p_max = 100.0;
  d.density = [](double p) { return (p > 0.0 && p < 100.0) ? 0.01 : 0.0; };
  const auto s = discretize(d, 50.0);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_NEAR(s[0], 0.25, 1e-9);
  EXPECT_NEAR(s[1], 0.50, 1e-9);
  EXPECT_NEAR(s[2], 0.25, 1e-9);
}

TEST(Discretize, PvSequenceLength) {
  const auto s = discretize(pv_distribution(PvPowerModel{}), 5.0);
  EXPECT_EQ(s.size(), 73u);
  EXPECT_EQ(s.max_index(), 72u);
}

TEST(Discretize, RejectsBadStep) {
  const auto d = pv_distribution(PvPowerModel{});
  EXPECT_THROW(discretize(d, 0.0), ParameterError);
  EXPECT_THROW(discretize(d, 360.0), ParameterError);
}

TEST(Discretize, ExpectationWithinHalfStep) {
  for (double q : {1.0, 5.0, 10.0, 25.0}) {
    const auto pv = pv_distribution(PvPowerModel{});
    const double e_pv = midpoint([&](double p) { return p * pv.density(p); }, 0.0, 360.0);
    const auto s_pv = discretize(pv, q);
    EXPECT_NEAR(expectation(s_pv), e_pv, q / 2.0) << q;
    EXPECT_NEAR(s_pv.sum(), 1.0, 1e-9);

    const auto wt = wt_distribution(WindPowerModel{});
    const double e_wt = 600.0 * wt.mass_at_max + midpoint([&](double p) { return p * wt.density(p); }, 0.0, 600.0);
    const auto s_wt = discretize(wt, q);
    EXPECT_NEAR(expectation(s_wt), e_wt, q / 2.0) << q;
    EXPECT_NEAR(s_wt.sum(), 1.0, 1e-9);
  }
}

TEST(Convolve, IdentityAndHandExample) {
  const ProbSeq b(10.0, {0.1, 0.6, 0.3});
  const auto c = convolve(ProbSeq::degenerate(10.0), b);
  ASSERT_EQ(c.size(), b.size());
  for (std::size_t u = 0; u < b.size(); ++u) EXPECT_DOUBLE_EQ(c[u], b[u]);

  const ProbSeq h(10.0, {0.5, 0.5});
  const auto hh = convolve(h, h);
  ASSERT_EQ(hh.size(), 3u);
  EXPECT_DOUBLE_EQ(hh[0], 0.25);
  EXPECT_DOUBLE_EQ(hh[1], 0.5);
  EXPECT_DOUBLE_EQ(hh[2], 0.25);
}

TEST(Convolve, MismatchedStep) {
  EXPECT_THROW(convolve(ProbSeq(5.0, {1.0}), ProbSeq(10.0, {1.0})), ParameterError);
}

TEST(Convolve, CommutativeAssociativeLinear) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_seq(rng, 5.0, 40);
    const auto b = random_seq(rng, 5.0, 40);
    const auto c = random_seq(rng, 5.0, 40);
    const auto ab = convolve(a, b);
    const auto ba = convolve(b, a);
    ASSERT_EQ(ab.size(), a.size() + b.size() - 1);
    for (std::size_t u = 0; u < ab.size(); ++u) EXPECT_NEAR(ab[u], ba[u], 1e-12);
    const auto l = convolve(ab, c);
    const auto r = convolve(a, convolve(b, c));
    for (std::size_t u = 0; u < l.size(); ++u) EXPECT_NEAR(l[u], r[u], 1e-12);
    EXPECT_NEAR(expectation(ab), expectation(a) + expectation(b), 1e-9);
    EXPECT_NEAR(ab.sum(), 1.0, 1e-9);
  }
}

TEST(Expectation, HandValues) {
  EXPECT_DOUBLE_EQ(expectation(ProbSeq(5.0, {1.0})), 0.0);
  EXPECT_NEAR(expectation(ProbSeq(10.0, {0.2, 0.3, 0.5})), 13.0, 1e-12);
}

TEST(ProbSeq, RejectsInvalid) {
  EXPECT_THROW(ProbSeq(5.0, {0.5, 0.4}), ParameterError);
  EXPECT_THROW(ProbSeq(5.0, {1.5, -0.5}), ParameterError);
  EXPECT_THROW(ProbSeq(0.0, {1.0}), ParameterError);
  EXPECT_THROW(ProbSeq(5.0, {}), ParameterError);
}

TEST(Samplers, ContinuousMeansMatchDistributions) {
  std::mt19937_64 rng(3);
  ContinuousWindSampler ws(WindPowerModel{});
  ContinuousPvSampler ps(PvPowerModel{});
  const int n = 200000;
  double sw = 0.0, sp = 0.0;
  for (int i = 0; i < n; ++i) {
    sw += ws(rng);
    sp += ps(rng);
  }
  EXPECT_NEAR(sw / n, wt_distribution(WindPowerModel{}).expectation(), 2.0);
  EXPECT_NEAR(sp / n, 360.0 * 3.0 / 8.0, 1.0);
}
