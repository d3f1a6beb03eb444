// Acceptance run: one PASS/FAIL line per criterion, failing checks listed
// underneath. Exit status is nonzero if any criterion fails.

#include <cstdio>
#include <string>

#include "twomode/sweep.hpp"
#include "twomode/validation.hpp"

int main() {
  using namespace twomode;
  const int jobs = resolve_jobs(std::nullopt);
  bool all = true;
  for (int k = 1; k <= 8; ++k) {
    const std::string group = "AC" + std::to_string(k);
    bool passed = true;
    std::string failures;
    try {
      for (const CheckResult& c : run_check_group(group, ValidationLevel::Full, jobs)) {
        if (!c.passed) {
          passed = false;
          failures += "    " + c.id + ": measured " + std::to_string(c.measured) + " " + c.comparison + " " +
                      std::to_string(c.tolerance) + " failed " + c.detail + "\n";
        }
      }
    } catch (const std::exception& e) {
      passed = false;
      failures += std::string("    error: ") + e.what() + "\n";
    }
    std::printf("AC-%d %s\n%s", k, passed ? "PASS" : "FAIL", failures.c_str());
    std::fflush(stdout);
    all = all && passed;
  }
  return all ? 0 : 1;
}
