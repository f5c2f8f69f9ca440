#pragma once

// Renewable output models and the probabilistic-sequence toolkit.
//
// A ProbSeq is a step-quantized distribution: index u carries the probability
// that the output equals u*q. Wind and PV distributions are discretized into
// ProbSeqs, combined by discrete convolution and queried for expectations and
// tail sums when converting the reserve chance constraint.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cies/errors.hpp"
#include "cies/quadrature.hpp"

namespace cies {

struct WindPowerModel {
  double scale = 10.0;   // Weibull scale (m/s)
  double shape = 1.8;    // Weibull shape
  double v_in = 3.0;     // cut-in speed (m/s)
  double v_r = 15.0;     // rated speed (m/s)
  double p_rated = 600;  // kW

  double h() const { return v_r / v_in - 1.0; }

  void validate() const {
    if (!(scale > 0.0) || !(shape > 0.0)) {
      throw ParameterError("wind model: scale and shape must be positive");
    }
    if (!(v_in > 0.0) || !(v_in < v_r)) {
      throw ParameterError("wind model: require 0 < v_in < v_r");
    }
    if (!(p_rated > 0.0)) throw ParameterError("wind model: p_rated must be positive");
  }
};

struct PvPowerModel {
  double lambda1 = 3.0;
  double lambda2 = 5.0;
  double p_max = 360.0;  // kW

  void validate() const {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
      throw ParameterError("pv model: shape factors must be positive");
    }
    if (!(p_max > 0.0)) throw ParameterError("pv model: p_max must be positive");
  }
};

/// Output distribution with point masses at 0 and p_max and a density on the
/// open interval between them.
struct MixedPowerDistribution {
  double mass_at_zero = 0.0;
  double mass_at_max = 0.0;
  std::function<double(double)> density;  // 1/kW on (0, p_max)
  double p_max = 0.0;

  double continuous_mass(double tol = 1e-10) const {
    if (!density) return 0.0;
    return quad::adaptive_simpson(density, 0.0, p_max, tol);
  }

  double total_mass() const { return mass_at_zero + mass_at_max + continuous_mass(); }

  double expectation(double tol = 1e-10) const {
    double e = p_max * mass_at_max;
    if (density) {
      e += quad::adaptive_simpson([this](double p) { return p * density(p); }, 0.0, p_max,
                                  tol);
    }
    return e;
  }
};

inline double weibull_cdf(double v, double scale, double shape) {
  if (v <= 0.0) return 0.0;
  return 1.0 - std::exp(-std::pow(v / scale, shape));
}

/// Censored Weibull wind-power distribution: below cut-in the turbine is idle,
/// above rated speed it delivers p_rated, in between power is linear in speed.
inline MixedPowerDistribution wt_distribution(const WindPowerModel& model) {
  model.validate();
  MixedPowerDistribution d;
  d.p_max = model.p_rated;
  d.mass_at_zero = weibull_cdf(model.v_in, model.scale, model.shape);
  d.mass_at_max = 1.0 - weibull_cdf(model.v_r, model.scale, model.shape);
  d.density = [m = model](double p) {
    if (p <= 0.0 || p >= m.p_rated) return 0.0;
    const double h = m.h();
    const double ratio = (1.0 + h * p / m.p_rated) * m.v_in / m.scale;
    return (m.shape * h * m.v_in / (m.scale * m.p_rated)) * std::pow(ratio, m.shape - 1.0) *
           std::exp(-std::pow(ratio, m.shape));
  };
  return d;
}

/// Beta density of PV output, scaled to [0, p_max].
inline double pv_density(double p, const PvPowerModel& model) {
  model.validate();
  if (!(p > 0.0) || !(p < model.p_max)) {
    throw DomainError("pv_density: power must lie in (0, p_max)");
  }
  const double x = p / model.p_max;
  const double log_norm = std::lgamma(model.lambda1 + model.lambda2) -
                          std::lgamma(model.lambda1) - std::lgamma(model.lambda2);
  return std::exp(log_norm + (model.lambda1 - 1.0) * std::log(x) +
                  (model.lambda2 - 1.0) * std::log1p(-x)) /
         model.p_max;
}

inline MixedPowerDistribution pv_distribution(const PvPowerModel& model) {
  model.validate();
  MixedPowerDistribution d;
  d.p_max = model.p_max;
  d.density = [m = model](double p) {
    if (p <= 0.0 || p >= m.p_max) return 0.0;
    return pv_density(p, m);
  };
  return d;
}

/// Step-quantized probability sequence; index u stands for power u*q.
class ProbSeq {
 public:
  static constexpr double kSumTolerance = 1e-9;

  ProbSeq() : q_(1.0), probs_{1.0} {}

  ProbSeq(double q, std::vector<double> probs) : q_(q), probs_(std::move(probs)) {
    if (!(q_ > 0.0)) throw ParameterError("ProbSeq: step must be positive");
    if (probs_.empty()) throw ParameterError("ProbSeq: empty sequence");
    double sum = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0)) throw ParameterError("ProbSeq: negative or NaN probability");
      sum += p;
    }
    if (std::fabs(sum - 1.0) > kSumTolerance) {
      throw ParameterError("ProbSeq: probabilities sum to " + std::to_string(sum));
    }
  }

  /// Point mass at power 0.
  static ProbSeq degenerate(double q) { return ProbSeq(q, {1.0}); }

  double step() const { return q_; }
  std::size_t size() const { return probs_.size(); }
  /// Largest index N (the sequence has N+1 entries).
  std::size_t max_index() const { return probs_.size() - 1; }
  double operator[](std::size_t u) const { return probs_[u]; }
  std::span<const double> probs() const { return probs_; }
  double power(std::size_t u) const { return static_cast<double>(u) * q_; }

  double sum() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

  /// P(output >= u*q).
  double tail(std::size_t u) const {
    double t = 0.0;
    for (std::size_t i = probs_.size(); i-- > u;) t += probs_[i];
    return t;
  }

 private:
  double q_;
  std::vector<double> probs_;
};

inline double expectation(const ProbSeq& s) {
  double e = 0.0;
  for (std::size_t u = 0; u < s.size(); ++u) e += s.power(u) * s[u];
  return e;
}

/// Bin a mixed distribution onto the lattice {0, q, ..., N q} with N = ceil(p_max/q).
/// Bin u collects the density over [uq - q/2, uq + q/2) clipped to [0, p_max];
/// the point masses go to the first and last bins.
inline ProbSeq discretize(const MixedPowerDistribution& dist, double q,
                          double tol = 1e-9) {
  if (!(q > 0.0) || !(q < dist.p_max)) {
    throw ParameterError("discretize: require 0 < q < p_max");
  }
  const auto n = static_cast<std::size_t>(std::ceil(dist.p_max / q - 1e-12));
  std::vector<double> probs(n + 1, 0.0);
  for (std::size_t u = 0; u <= n; ++u) {
    const double lo = std::max(0.0, (static_cast<double>(u) - 0.5) * q);
    const double hi = (u == n) ? dist.p_max
                               : std::min(dist.p_max, (static_cast<double>(u) + 0.5) * q);
    if (dist.density && hi > lo) {
      probs[u] = std::max(0.0, quad::adaptive_simpson(dist.density, lo, hi, tol));
    }
  }
  probs.front() += dist.mass_at_zero;
  probs.back() += dist.mass_at_max;
  // Quadrature leaves O(tol) per bin; fold the residual back in.
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (!(sum > 0.0)) throw ParameterError("discretize: distribution has no mass");
  for (double& p : probs) p /= sum;
  return ProbSeq(q, std::move(probs));
}

/// Joint sequence of two independent outputs sharing a step size.
inline ProbSeq convolve(const ProbSeq& a, const ProbSeq& b) {
  if (std::fabs(a.step() - b.step()) > 1e-12 * std::max(a.step(), b.step())) {
    throw ParameterError("convolve: step sizes differ");
  }
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == 0.0) continue;
    for (std::size_t k = 0; k < b.size(); ++k) c[j + k] += a[j] * b[k];
  }
  return ProbSeq(a.step(), std::move(c));
}

/// Draws lattice powers from a ProbSeq.
class SeqSampler {
 public:
  explicit SeqSampler(const ProbSeq& s)
      : q_(s.step()), dist_(s.probs().begin(), s.probs().end()) {}

  template <typename Rng>
  double operator()(Rng& rng) {
    return static_cast<double>(dist_(rng)) * q_;
  }

 private:
  double q_;
  std::discrete_distribution<std::size_t> dist_;
};

/// Draws continuous wind or PV output by sampling the underlying resource.
class ContinuousWindSampler {
 public:
  explicit ContinuousWindSampler(const WindPowerModel& m) : m_(m), speed_(m.shape, m.scale) {
    m.validate();
  }

  template <typename Rng>
  double operator()(Rng& rng) {
    const double v = speed_(rng);
    if (v < m_.v_in) return 0.0;
    if (v >= m_.v_r) return m_.p_rated;
    return m_.p_rated * (v / m_.v_in - 1.0) / m_.h();
  }

 private:
  WindPowerModel m_;
  std::weibull_distribution<double> speed_;
};

class ContinuousPvSampler {
 public:
  explicit ContinuousPvSampler(const PvPowerModel& m)
      : p_max_(m.p_max), x_(m.lambda1, 1.0), y_(m.lambda2, 1.0) {
    m.validate();
  }

  template <typename Rng>
  double operator()(Rng& rng) {
    const double x = x_(rng);
    const double y = y_(rng);
    return p_max_ * x / (x + y);
  }

 private:
  double p_max_;
  std::gamma_distribution<double> x_;
  std::gamma_distribution<double> y_;
};

}  // namespace cies
