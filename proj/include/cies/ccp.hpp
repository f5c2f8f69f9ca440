#pragma once

// Deterministic conversion of the spinning-reserve chance constraint
//   P{ R_t >= E_t - X_t } >= alpha,  X_t ~ joint renewable sequence c_t
// into indicator rows, and linear encodings of the -gamma*min{x, 0}
// compensation terms.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cies/errors.hpp"
#include "cies/model_ir.hpp"
#include "cies/uncertainty.hpp"

namespace cies {

/// Tail sums are compared against alpha with this slack so that alpha = 1 is
/// attainable despite rounding in the sequence.
inline constexpr double kTailTolerance = 1e-12;

/// Largest lattice index u with P(X >= u*q) >= alpha (0 when alpha exceeds the total mass).
inline std::size_t reserve_index(const ProbSeq& c, double alpha) {
  double tail = 0.0;
  for (std::size_t u = c.size(); u-- > 0;) {
    tail += c[u];
    if (tail >= alpha - kTailTolerance) return u;
  }
  return 0;
}

/// Smallest nonnegative reserve R with P(R >= E - X) >= alpha.
inline double min_reserve(const ProbSeq& c, double alpha) {
  if (alpha <= 0.0) return 0.0;
  return std::max(0.0, expectation(c) - c.power(reserve_index(c, alpha)));
}

/// Exact probability that reserve R covers the shortfall E - X.
inline double reserve_adequacy(const ProbSeq& c, double reserve, double tol = 1e-9) {
  const double e = expectation(c);
  double p = 0.0;
  for (std::size_t u = 0; u < c.size(); ++u) {
    if (reserve + tol >= e - c.power(u)) p += c[u];
  }
  return p;
}

struct ReserveContext {
  ProbSeq joint;          // c_t
  double expected = 0.0;  // E_t
  double reserve_max = 0.0;
  double alpha = 0.9;
};

struct ChanceRowSet {
  std::vector<int> indicators;  // Z_{t,0..N}
  double big_m = 0.0;
  std::size_t rows = 0;
  bool infeasible_by_construction = false;
};

/// Per-period big-M. It must dominate both |R + u q - E| extremes over
/// R in [0, R_max] and u in [0, N] so that every row is slack when the
/// indicator points the other way.
inline double chance_big_m(double expected, double reserve_max, std::size_t n, double q) {
  const double top = reserve_max + static_cast<double>(n) * q - expected;
  return std::max(expected + reserve_max, top) + q;
}

/// Adds, for period tag `t`, the indicator rows
///   (R + u q - E)/M <= Z_u <= 1 + (R + u q - E)/M   for u = 0..N
/// and the coverage row sum_u c(u) Z_u >= alpha, with R the given expression.
inline ChanceRowSet build_chance_rows(ModelIR& m, const std::string& tag, const ReserveContext& ctx,
                                      const LinExpr& reserve) {
  if (!std::isfinite(ctx.reserve_max)) throw ParameterError("build_chance_rows: R_max must be finite");
  if (ctx.alpha < 0.0 || ctx.alpha > 1.0) throw ParameterError("build_chance_rows: alpha outside [0, 1]");
  const auto& c = ctx.joint;
  const double q = c.step();
  ChanceRowSet set;
  set.big_m = chance_big_m(ctx.expected, ctx.reserve_max, c.max_index(), q);
  set.infeasible_by_construction = ctx.alpha > c.sum() + kTailTolerance;
  const double big_m = set.big_m;
  LinExpr coverage;
  for (std::size_t u = 0; u < c.size(); ++u) {
    const int z = m.add_binary("z_" + tag + "_" + std::to_string(u));
    set.indicators.push_back(z);
    const double shift = c.power(u) - ctx.expected;
    // R + shift - M z <= 0
    LinExpr lower = reserve;
    lower.add(z, -big_m);
    m.add_constraint("zlo_" + tag + "_" + std::to_string(u), lower, Sense::Le, -shift);
    // M z - R <= M + shift
    LinExpr upper;
    upper.add(z, big_m).add(reserve, -1.0);
    m.add_constraint("zup_" + tag + "_" + std::to_string(u), upper, Sense::Le, big_m + shift);
    coverage.add(z, c[u]);
  }
  m.add_constraint("cover_" + tag, coverage, Sense::Ge, ctx.alpha);
  set.rows = 2 * c.size() + 1;
  return set;
}

/// Epigraph of -gamma*min{x, 0}: s >= 0, s >= -x, objective += gamma*s.
/// Returns the id of s.
inline int shift_cost_rows(ModelIR& m, const std::string& name, int x, double gamma, double dt = 1.0) {
  if (gamma < 0.0) throw ParameterError("shift_cost_rows: negative gamma");
  const int s = m.add_var(name, 0.0, kInf);
  LinExpr row;
  row.add(s, 1.0).add(x, 1.0);
  m.add_constraint(name + "_epi", row, Sense::Ge, 0.0);
  m.objective().add(s, gamma * dt);
  return s;
}

struct Sos2MinEncoding {
  int w1 = -1, w2 = -1, w3 = -1;
  std::vector<int> selectors;
  LinExpr g;  // equals min{x, 0}
};

/// Convex-combination encoding of g = min{x, 0} over breakpoints {-L, 0, U}.
/// The corrected form uses two segment selectors with adjacency
/// w1 <= z1, w2 <= z1 + z2, w3 <= z2. With `literal` the three-selector
/// variant w_i <= z_i is built instead, which only admits x in {-L, 0, U}.
inline Sos2MinEncoding build_sos2_min_rows(ModelIR& m, const std::string& name, int x, double lower_mag,
                                           double upper_mag, bool literal = false) {
  if (lower_mag < 0.0 || upper_mag < 0.0) throw ParameterError("build_sos2_min_rows: negative breakpoints");
  Sos2MinEncoding enc;
  enc.w1 = m.add_var(name + "_w1", 0.0, 1.0);
  enc.w2 = m.add_var(name + "_w2", 0.0, 1.0);
  enc.w3 = m.add_var(name + "_w3", 0.0, 1.0);
  const int n_sel = literal ? 3 : 2;
  LinExpr sel_sum;
  for (int i = 0; i < n_sel; ++i) {
    enc.selectors.push_back(m.add_binary(name + "_z" + std::to_string(i + 1)));
    sel_sum.add(enc.selectors.back(), 1.0);
  }
  m.add_constraint(name + "_zsum", sel_sum, Sense::Eq, 1.0);
  LinExpr w_sum;
  w_sum.add(enc.w1, 1.0).add(enc.w2, 1.0).add(enc.w3, 1.0);
  m.add_constraint(name + "_wsum", w_sum, Sense::Eq, 1.0);
  LinExpr link;
  link.add(x, 1.0).add(enc.w1, lower_mag).add(enc.w3, -upper_mag);
  m.add_constraint(name + "_x", link, Sense::Eq, 0.0);
  auto le = [&](const std::string& tag, int w, std::initializer_list<int> zs) {
    LinExpr row;
    row.add(w, 1.0);
    for (int z : zs) row.add(z, -1.0);
    m.add_constraint(name + tag, row, Sense::Le, 0.0);
  };
  const auto& z = enc.selectors;
  if (literal) {
    le("_adj1", enc.w1, {z[0]});
    le("_adj2", enc.w2, {z[1]});
    le("_adj3", enc.w3, {z[2]});
  } else {
    le("_adj1", enc.w1, {z[0]});
    le("_adj2", enc.w2, {z[0], z[1]});
    le("_adj3", enc.w3, {z[1]});
  }
  enc.g.add(enc.w1, -lower_mag);
  return enc;
}

}  // namespace cies
