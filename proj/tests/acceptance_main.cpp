#include <cstring>
#include <iostream>

#include "tfi/acceptance.hpp"

int main(int argc, char** argv) {
  auto level = tfi::AcceptanceLevel::Full;
  if (argc > 1 && std::strcmp(argv[1], "--fast") == 0) level = tfi::AcceptanceLevel::Fast;
  auto results = tfi::run_acceptance(level, std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
