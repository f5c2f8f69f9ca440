#pragma once

#include <string>
#include <vector>

namespace cies {

/// One failed constraint. `period` is 1-based, 0 when the constraint spans
/// the horizon. `margin` is the amount by which the constraint is violated.
struct Violation {
  std::string constraint;
  int period = 0;
  double margin = 0.0;
  std::string detail;
};

using ViolationList = std::vector<Violation>;

inline void append(ViolationList& into, const ViolationList& from) {
  into.insert(into.end(), from.begin(), from.end());
}

}  // namespace cies
