// Acceptance gate: one PASS/FAIL line per criterion. Tolerances and seeds are pinned in the suites.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "catbranch/suites.hpp"

using namespace catbranch;

int main(int argc, char** argv) {
  int only = 0;
  SuiteOptions opt;
  opt.seed = 1;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc)
      only = std::atoi(argv[++i]);
    else if (!std::strcmp(argv[i], "--jobs") && i + 1 < argc)
      opt.jobs = static_cast<unsigned>(std::atoi(argv[++i]));
    else {
      std::fprintf(stderr, "usage: acceptance [--only N] [--jobs J]\n");
      return 2;
    }
  }
  bool all_pass = true;
  for (int id = 1; id <= kCriteria; ++id) {
    if (only && id != only) continue;
    try {
      CriterionResult r = run_criterion(id, opt);
      for (const auto& rep : r.reports) {
        std::printf("  %-4s %-36s stat=%-12.6g %s; %s", rep.pass ? "ok" : "FAIL", rep.name.c_str(), rep.statistic,
                    rep.test.c_str(), rep.target.c_str());
        if (rep.p_value >= 0.0)
          std::printf("; p=%.4g", rep.p_value);
        else
          std::printf("; accept=[%.6g, %.6g]", rep.ci_lo, rep.ci_hi);
        std::printf("; %s\n", rep.criterion.c_str());
      }
      for (const auto& n : r.notes) std::printf("  note %s\n", n.c_str());
      std::printf("%s criterion %d (%s) [%.1fs]\n", r.pass() ? "PASS" : "FAIL", id, r.title.c_str(), r.seconds);
      all_pass = all_pass && r.pass();
    } catch (const std::exception& e) {
      std::printf("FAIL criterion %d: exception: %s\n", id, e.what());
      all_pass = false;
    }
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
