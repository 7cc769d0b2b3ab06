// Acceptance suite: one line per criterion. With no arguments every check runs;
// otherwise the arguments name the checks to run.
#include <cstdio>
#include <string>
#include <vector>

#include "sphcsf/verify.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> selection;
  for (int i = 1; i < argc; ++i) selection.emplace_back(argv[i]);
  if (selection.empty()) selection.emplace_back("all");
  int failed = 0;
  try {
    for (const auto& r : sphcsf::run_suite(selection)) {
      std::printf("[%s] C%02d %-24s measured=%-12.5g tol=%-8.3g %6.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                  r.measured, r.tolerance, r.seconds, r.detail.c_str());
      std::fflush(stdout);
      if (!r.pass) ++failed;
    }
  } catch (const sphcsf::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
