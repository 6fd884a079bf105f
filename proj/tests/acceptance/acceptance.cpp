// Acceptance run: one line per criterion, nonzero exit if any criterion fails.

#include <cstdio>

#include "blockspec/parallel.hpp"
#include "blockspec/verify.hpp"

int main() {
  blockspec::VerifyOptions opts;
  opts.threads = blockspec::resolve_threads();
  const auto results = blockspec::verify_all(opts);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("criterion %2d %-26s %s  (%.1fs) %s\n", r.id, r.name.c_str(), r.pass ? "PASS" : "FAIL", r.seconds,
                r.detail.c_str());
    if (!r.pass) ++failed;
  }
  std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
