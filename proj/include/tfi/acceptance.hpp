#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tfi {

enum class AcceptanceLevel { Fast, Full };

struct CriterionResult {
  int id;
  std::string title;
  bool passed;
  std::string detail;
  double seconds;
};

// Fast runs the cheap criteria only. Each result line is written to log as it finishes.
std::vector<CriterionResult> run_acceptance(AcceptanceLevel level, std::ostream& log);

}  // namespace tfi
