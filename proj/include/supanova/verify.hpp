#pragma once

#include <string>
#include <vector>

namespace supanova::verify {

struct CheckResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// The full property-check battery: Moebius closed forms vs recursion,
// inversion round-trips, the product rule, coefficient oracles, consistency
// characterization, overlapping-fragment and clique-expansion equivalences,
// layered coefficient recovery, adaptive-loop integrity, convergence
// behavior, the cost model, and the fragmentation heuristic. Each check is
// self-contained (fixtures are embedded) and pins its tolerances.
std::vector<CheckResult> run_acceptance();

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace supanova::verify
