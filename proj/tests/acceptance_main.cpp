#include <cstdio>
#include <cstdlib>
#include <string>

#include "fracms/acceptance.hpp"

// Usage: fracms_acceptance [--budget-scale X] [id ...]
int main(int argc, char** argv) {
  fracms::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--budget-scale" && i + 1 < argc) {
      options.budget_scale = std::atof(argv[++i]);
    } else {
      options.only.push_back(std::atoi(arg.c_str()));
    }
  }
  options.on_result = [](const fracms::CriterionResult& r) {
    std::printf("%s\n", fracms::format_result_line(r).c_str());
    std::fflush(stdout);
  };
  const auto results = fracms::run_acceptance(options);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
  return failed == 0 ? 0 : 1;
}
