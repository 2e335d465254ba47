#include <cstdio>
#include <cstdlib>
#include <algorithm>
#include <string>

#include "lcs/reproduce.hpp"

// One line per criterion: status, wall time against the limit, and the first problem if any.
// Optional arguments restrict the run to the listed criterion numbers.
int main(int argc, char** argv) {
  std::vector<int> only;
  bool verbose = false;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "-v")
      verbose = true;
    else
      only.push_back(std::atoi(argv[i]));
  }
  int failed = 0;
  for (const auto& c : lcs::all_criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const lcs::CheckResult r = lcs::run_timed(c);
    const bool ok = r.status == lcs::Status::pass;
    failed += !ok;
    std::printf("criterion %2d %-45s %-4s %7.2fs / %.0fs", c.id, r.title.c_str(), ok ? "PASS" : "FAIL", r.seconds,
                c.limit_seconds);
    if (r.status == lcs::Status::inconclusive) std::printf(" (inconclusive)");
    if (!r.problems.empty()) std::printf("  %s", r.problems.front().c_str());
    std::printf("\n");
    if (verbose) std::printf("    %s\n", r.details.dump().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
