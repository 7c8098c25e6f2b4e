// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Optional arguments: criterion numbers to restrict the run.
#include <cstdlib>
#include <iostream>
#include <string>

#include "idqa/verify/acceptance.hpp"

int main(int argc, char** argv) {
  idqa::verify::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) opts.only.push_back(std::stoi(argv[i]));
  opts.on_result = [](const idqa::verify::CriterionResult& r) {
    std::cout << idqa::verify::format_result(r) << std::endl;
  };
  const auto results = idqa::verify::run_acceptance(opts);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
