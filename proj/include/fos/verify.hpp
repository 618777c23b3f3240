#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fos/config.hpp"

namespace fos {

// One certified inequality: pass iff slack >= 0.  lhs/rhs are the two sides
// of the worst instance encountered; slack is in the same normalized units
// the tolerance is stated in.
struct CheckLine {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
  std::string note;
};

std::vector<CheckLine> run_verification(const RunConfig& cfg);

// plain-text report, one line per inequality; returns true iff all pass
bool write_verification_report(std::ostream& os, const std::vector<CheckLine>& lines);

}  // namespace fos
