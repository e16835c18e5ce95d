// Acceptance gate: runs every oracle suite at full scale and prints one
// verdict line per suite. Exit status 0 iff all pass, including the per-suite
// wall-clock budgets.

#include <cstdint>
#include <cstdio>
#include <cstdlib>

#include "oclone/suites.hpp"

int main(int argc, char** argv) {
  uint64_t seed = 42;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  std::printf("acceptance gate, seed %llu\n", static_cast<unsigned long long>(seed));
  std::fflush(stdout);
  bool all_ok = true;
  for (const oclone::SuiteReport& r : oclone::run_all_suites(seed)) {
    std::printf("%s\n", oclone::format_report(r).c_str());
    std::fflush(stdout);
    all_ok = all_ok && r.ok();
  }
  std::printf(all_ok ? "all suites passed\n" : "ACCEPTANCE FAILED\n");
  return all_ok ? 0 : 1;
}
