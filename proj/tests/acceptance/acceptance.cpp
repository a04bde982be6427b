#include <iostream>

#include "nagata/verify.hpp"

// One line per criterion; sub-checks are indented under failures.
int main(int argc, char** argv) {
  std::string filter = argc > 1 ? argv[1] : "";
  auto results = nagata::run_acceptance(filter, NAGATA_DATA_DIR);
  int failed = 0;
  for (auto& r : results) {
    std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << r.info.id << " (" << r.info.key << "): " << r.info.title
              << " [" << r.millis << " ms]\n";
    if (r.passed) continue;
    ++failed;
    for (auto& l : r.checks)
      if (!l.passed) std::cout << "    failed: " << l.name << (l.detail.empty() ? "" : " (" + l.detail + ")") << "\n";
  }
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
