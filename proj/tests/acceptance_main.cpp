// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit 0 iff all pass.
#include <algorithm>
#include <cstdio>

#include "ksgeo/verification.hpp"

int main() {
  const ksgeo::VerificationReport report = ksgeo::run_verification(false, 42);
  for (const auto& c : report.criteria)
    std::printf("%s  %2d  %-28s %s\n", c.passed ? "PASS" : "FAIL", c.id,
                c.name.c_str(), c.details.c_str());
  std::printf("%s: %zu/%zu criteria passed\n",
              report.all_passed ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              static_cast<std::size_t>(
                  std::count_if(report.criteria.begin(), report.criteria.end(),
                                [](const ksgeo::CriterionResult& c) {
                                  return c.passed;
                                })),
              report.criteria.size());
  return report.all_passed ? 0 : 1;
}
