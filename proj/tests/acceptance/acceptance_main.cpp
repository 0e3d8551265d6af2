#include <cstdio>

#include "supanova/verify.hpp"

int main() {
  auto results = supanova::verify::run_acceptance();
  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%s] %-4s %-55s (%.2fs) %s\n", r.passed ? "PASS" : "FAIL", r.id.c_str(),
                r.name.c_str(), r.seconds, r.detail.c_str());
    if (!r.passed) ++failures;
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failures);
  return failures == 0 ? 0 : 1;
}
