// Runs every acceptance criterion and prints one line per criterion.
// Usage: acceptance [seed]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "robustpay/checks.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 0;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  const auto results = robustpay::checks::run_acceptance(seed);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("[%s] criterion %d: %s; %s\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.detail.c_str());
    if (!r.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed (seed %llu)\n", static_cast<int>(results.size()) - failed, results.size(),
              static_cast<unsigned long long>(seed));
  return failed == 0 ? 0 : 1;
}
