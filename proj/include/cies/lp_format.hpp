#pragma once

// LP text export (Minimize / Subject To / Bounds / Binary / End) and the
// name/value solution format read back from external solvers.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cies/errors.hpp"
#include "cies/model_ir.hpp"

namespace cies {

namespace lp {

inline std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline bool valid_name(std::string_view name) {
  if (name.empty() || name.size() > 255) return false;
  const char c0 = name.front();
  if (!(std::isalpha(static_cast<unsigned char>(c0)) || c0 == '_')) return false;
  // "e12"-style names read as exponents in some parsers.
  if ((c0 == 'e' || c0 == 'E') && name.size() > 1 &&
      std::isdigit(static_cast<unsigned char>(name[1]))) {
    return false;
  }
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' ||
          c == ']')) {
      return false;
    }
  }
  return true;
}

inline void write_terms(std::ostringstream& os, const ModelIR& m, const LinExpr& e,
                        const std::string& where) {
  constexpr int kTermsPerLine = 8;
  int on_line = 0;
  bool first = true;
  for (const auto& t : e.terms) {
    if (!std::isfinite(t.coef)) throw ExportError("non-finite coefficient in " + where);
    if (on_line == kTermsPerLine) {
      os << "\n   ";
      on_line = 0;
    }
    const double mag = std::fabs(t.coef);
    os << (t.coef < 0.0 ? (first ? "-" : " -") : (first ? "" : " +"));
    os << (first && t.coef < 0.0 ? "" : " ");
    if (mag != 1.0) os << number(mag) << ' ';
    os << m.var(t.var).name;
    first = false;
    ++on_line;
  }
}

inline const char* sense_text(Sense s) {
  switch (s) {
    case Sense::Le: return "<=";
    case Sense::Ge: return ">=";
    case Sense::Eq: return "=";
  }
  return "=";
}

inline std::string bound_text(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  return number(v);
}

}  // namespace lp

/// Renders the model as LP text. Variables keep their model order; numbers
/// carry 12 significant digits.
inline std::string export_lp(const ModelIR& m) {
  m.validate();
  std::unordered_set<std::string> row_names;
  for (const auto& v : m.variables()) {
    if (!lp::valid_name(v.name)) throw ExportError("invalid variable name '" + v.name + "'");
    if (std::isnan(v.lower) || std::isnan(v.upper)) throw ExportError("NaN bound on " + v.name);
  }
  std::ostringstream os;
  os << "\\ cies scheduling model\n";
  os << "Minimize\n obj:";
  const LinExpr obj = m.objective().compacted();
  if (!std::isfinite(obj.constant)) throw ExportError("non-finite objective constant");
  if (obj.terms.empty() && !m.variables().empty()) {
    os << " 0 " << m.var(0).name;
  } else {
    os << ' ';
    lp::write_terms(os, m, obj, "objective");
  }
  if (obj.constant != 0.0) os << (obj.constant < 0 ? " - " : " + ") << lp::number(std::fabs(obj.constant));
  os << "\nSubject To\n";
  // Variables outside every row and the objective still get a bounds line so
  // that readers which learn names from the text report them.
  std::vector<char> used(m.variables().size(), 0);
  for (const auto& t : obj.terms) used[t.var] = 1;
  for (const auto& r : m.constraints()) {
    if (!lp::valid_name(r.name)) throw ExportError("invalid constraint name '" + r.name + "'");
    if (!row_names.insert(r.name).second) throw ExportError("duplicate constraint name " + r.name);
    const LinExpr e = r.expr.compacted();
    for (const auto& t : e.terms) used[t.var] = 1;
    const double rhs = r.rhs - e.constant;
    if (!std::isfinite(rhs)) throw ExportError("non-finite right-hand side in " + r.name);
    os << ' ' << r.name << ": ";
    if (e.terms.empty()) {
      os << "0 " << m.var(0).name;
    } else {
      lp::write_terms(os, m, e, r.name);
    }
    os << ' ' << lp::sense_text(r.sense) << ' ' << lp::number(rhs) << '\n';
  }
  os << "Bounds\n";
  for (std::size_t i = 0; i < m.variables().size(); ++i) {
    const auto& v = m.variables()[i];
    if (v.lower == v.upper) {
      os << ' ' << v.name << " = " << lp::number(v.lower) << '\n';
    } else if (v.kind == VarKind::Binary) {
      if (!used[i]) os << " 0 <= " << v.name << " <= 1\n";
    } else if (v.lower == -kInf && v.upper == kInf) {
      os << ' ' << v.name << " free\n";
    } else if (v.lower == 0.0 && v.upper == kInf) {
      if (!used[i]) os << " 0 <= " << v.name << " <= +inf\n";
    } else {
      os << ' ' << lp::bound_text(v.lower) << " <= " << v.name << " <= " << lp::bound_text(v.upper)
         << '\n';
    }
  }
  bool header = false;
  for (const auto& v : m.variables()) {
    if (v.kind != VarKind::Binary) continue;
    if (!header) {
      os << "Binary\n";
      header = true;
    }
    os << ' ' << v.name << '\n';
  }
  os << "End\n";
  return os.str();
}

struct SolutionParseOptions {
  bool partial_output = false;     // backend may omit variables (treated as 0)
  double integrality_tol = 1e-5;
  double feasibility_tol = 1e-6;
};

/// Raw values bound to model variables, in model order.
struct SolutionValues {
  std::vector<double> values;
  std::optional<double> reported_objective;  // from a "# objective <v>" comment
  std::string status;                        // from a "# status <s>" comment
  std::vector<std::string> warnings;
};

namespace lp {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
  if (s == "-inf" || s == "-infinity") return -kInf;
  double v = 0.0;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace lp

/// Reads `name value` lines. `#` starts a comment; the comments
/// `# objective <v>` and `# status <s>` are captured as metadata.
inline SolutionValues parse_solution(std::string_view text, const ModelIR& m,
                                     const SolutionParseOptions& opt = {}) {
  SolutionValues out;
  const std::size_t n = m.variables().size();
  out.values.assign(n, 0.0);
  std::vector<char> seen(n, 0);
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    line = lp::trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto body = lp::trim(line.substr(1));
      if (body.starts_with("objective")) {
        out.reported_objective = lp::parse_double(body.substr(9));
      } else if (body.starts_with("status")) {
        out.status = std::string(lp::trim(body.substr(6)));
      }
      continue;
    }
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = lp::trim(line.substr(0, hash));
    const auto sp = line.find_first_of(" \t");
    if (sp == std::string_view::npos) {
      throw ParseError("solution line " + std::to_string(line_no) + ": expected 'name value'");
    }
    const std::string name(line.substr(0, sp));
    const auto value = lp::parse_double(line.substr(sp + 1));
    if (!value || !std::isfinite(*value)) {
      throw ParseError("solution line " + std::to_string(line_no) + ": malformed value");
    }
    const int id = m.find(name);
    if (id < 0) {
      throw ParseError("solution line " + std::to_string(line_no) + ": unknown variable " + name);
    }
    if (seen[id]) {
      throw ParseError("solution line " + std::to_string(line_no) + ": duplicate value for " + name);
    }
    seen[id] = 1;
    const auto& var = m.var(id);
    double v = *value;
    if (v < var.lower - opt.feasibility_tol || v > var.upper + opt.feasibility_tol) {
      throw ParseError("variable " + name + " = " + lp::number(v) + " violates its bounds");
    }
    if (var.kind == VarKind::Binary) {
      const double r = std::round(v);
      if (std::fabs(v - r) > opt.integrality_tol) {
        throw ParseError("binary variable " + name + " has fractional value " + lp::number(v));
      }
      v = r;
    }
    out.values[id] = v;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    const auto& var = m.var(static_cast<int>(i));
    if (!opt.partial_output) throw ParseError("solution has no value for variable " + var.name);
    const double v = std::clamp(0.0, var.lower, var.upper);
    out.values[i] = v;
    out.warnings.push_back("variable " + var.name + " missing from solution; using " + lp::number(v));
  }
  return out;
}

}  // namespace cies
