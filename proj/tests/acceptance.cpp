// One line per acceptance criterion; exits nonzero if any fails.
#include <iostream>
#include <string>
#include <vector>

#include "recon/validation.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& res : recon::validation::run_suite(only)) {
    std::cout << recon::validation::format_result(res) << std::endl;
    if (!res.passed) ++failed;
  }
  std::cout << failed << " criteria failed" << std::endl;
  return failed == 0 ? 0 : 1;
}
