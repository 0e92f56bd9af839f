#include <cstdlib>
#include <iostream>
#include <string>

#include "jorbit/verify.hpp"

int main(int argc, char** argv) {
  jorbit::VerifyOptions opts;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--seed")
      opts.seed = std::strtoull(argv[i + 1], nullptr, 10);
    else if (flag == "--trials")
      opts.trials = std::atoi(argv[i + 1]);
    else if (flag == "--algebra")
      opts.algebraFilter = argv[i + 1];
    else {
      std::cerr << "usage: jorbit_acceptance [--seed N] [--trials N] "
                   "[--algebra NAME]\n";
      return 2;
    }
  }

  std::vector<jorbit::CheckResult> results;
  try {
    results = jorbit::runAcceptance(opts);
  } catch (const std::exception& e) {
    std::cerr << "acceptance suite aborted: " << e.what() << "\n";
    return 1;
  }
  std::cout << jorbit::acceptanceReportText(results, opts);
  for (const auto& r : results)
    if (!r.passed) return 1;
  return 0;
}
