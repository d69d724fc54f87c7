#pragma once

// Cross-check battery behind `qgb verify`: the secular solver against closed
// forms and the independent finite-element oracle, the oracle's second-order
// convergence, and the two-particle hardcore identities on the interval and
// the equilateral 3-star.  Every check reduces to one number compared against
// a budget pinned here; the battery is deterministic.

#include <iosfwd>
#include <string>
#include <vector>

namespace qgb {

struct VerifyCheck {
  std::string check;   // battery item, e.g. "oracle_kirchhoff_star"
  std::string metric;  // what `value` measures, e.g. "max_rel_error"
  double value = 0.0;
  double budget = 0.0;  // pass iff value <= budget
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
};

VerifyReport run_verification();

// CSV table check,metric,value,budget,status with a '#' metadata header.
void write_verify_csv(std::ostream& os, const VerifyReport& r);

}  // namespace qgb
