#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cies/errors.hpp"

namespace cies {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };
enum class Sense { Le, Eq, Ge };

struct Term {
  int var;
  double coef;
};

/// Sparse linear expression. Repeated variables are allowed and summed on use.
struct LinExpr {
  std::vector<Term> terms;
  double constant = 0.0;

  LinExpr& add(int var, double coef) {
    terms.push_back({var, coef});
    return *this;
  }
  LinExpr& add(double c) {
    constant += c;
    return *this;
  }
  LinExpr& add(const LinExpr& other, double scale = 1.0) {
    for (const auto& t : other.terms) terms.push_back({t.var, t.coef * scale});
    constant += other.constant * scale;
    return *this;
  }

  /// Merges duplicate variables and drops exact zeros; keeps first-seen order.
  LinExpr compacted() const {
    LinExpr out;
    out.constant = constant;
    std::unordered_map<int, std::size_t> pos;
    for (const auto& t : terms) {
      auto [it, inserted] = pos.try_emplace(t.var, out.terms.size());
      if (inserted) {
        out.terms.push_back(t);
      } else {
        out.terms[it->second].coef += t.coef;
      }
    }
    std::erase_if(out.terms, [](const Term& t) { return t.coef == 0.0; });
    return out;
  }

  template <typename Values>
  double evaluate(const Values& x) const {
    double v = constant;
    for (const auto& t : terms) v += t.coef * x[t.var];
    return v;
  }
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  VarKind kind = VarKind::Continuous;
};

struct Constraint {
  std::string name;
  LinExpr expr;  // constant folded into rhs on export
  Sense sense = Sense::Le;
  double rhs = 0.0;
};

/// Solver-agnostic MILP (always minimization).
class ModelIR {
 public:
  int add_var(std::string name, double lower, double upper, VarKind kind = VarKind::Continuous) {
    if (lower > upper) throw ParameterError("variable " + name + ": lower bound above upper bound");
    if (kind == VarKind::Binary) {
      lower = std::max(lower, 0.0);
      upper = std::min(upper, 1.0);
    }
    auto [it, inserted] = index_.try_emplace(name, static_cast<int>(vars_.size()));
    if (!inserted) throw ParameterError("duplicate variable name " + name);
    vars_.push_back({std::move(name), lower, upper, kind});
    return it->second;
  }

  int add_binary(std::string name) { return add_var(std::move(name), 0.0, 1.0, VarKind::Binary); }

  void add_constraint(std::string name, LinExpr expr, Sense sense, double rhs) {
    rows_.push_back({std::move(name), std::move(expr), sense, rhs});
  }

  /// Fixes a variable to a value by collapsing its bounds.
  void fix(int var, double value) {
    vars_[var].lower = value;
    vars_[var].upper = value;
  }

  LinExpr& objective() { return objective_; }
  const LinExpr& objective() const { return objective_; }

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const Variable& var(int id) const { return vars_.at(id); }

  int find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
  }

  std::size_t count(VarKind kind) const {
    std::size_t n = 0;
    for (const auto& v : vars_) n += (v.kind == kind);
    return n;
  }

  /// Checks the structural invariants; throws ParameterError on failure.
  void validate() const {
    auto check = [&](const LinExpr& e, const std::string& where) {
      for (const auto& t : e.terms) {
        if (t.var < 0 || t.var >= static_cast<int>(vars_.size())) {
          throw ParameterError(where + " references unknown variable");
        }
      }
    };
    for (const auto& r : rows_) check(r.expr, "constraint " + r.name);
    check(objective_, "objective");
  }

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  LinExpr objective_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace cies
