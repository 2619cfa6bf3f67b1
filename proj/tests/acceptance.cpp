// Runs the acceptance criteria and prints one verdict line per criterion.
// Usage: acceptance [id ...]; no ids runs all eight.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "acm/checks.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (const auto& c : acm::checks::catalogue()) ids.push_back(c.id);
  int failed = 0;
  for (int id : ids) {
    const auto r = acm::checks::run_check(id);
    std::cout << acm::checks::format_result(r) << std::endl;
    if (!r.passed()) ++failed;
  }
  std::cout << (ids.size() - failed) << "/" << ids.size() << " criteria passed" << std::endl;
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
