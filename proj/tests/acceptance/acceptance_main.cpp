// Runs the acceptance criteria and prints one PASS/FAIL line per criterion
// after the individual checks. Exit status is nonzero when any check fails.
#include <cstdlib>
#include <iostream>
#include <string>

#include "mixroute_cli/suite.hpp"

int main(int argc, char** argv) {
  mixroute::cli::SuiteOptions opts;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      opts.criteria.push_back(std::atoi(argv[++i]));
    } else if (arg == "--filter" && i + 1 < argc) {
      opts.filter = argv[++i];
    } else {
      std::cerr << "usage: mixroute_acceptance [--criterion N]... [--filter TEXT]\n";
      return 2;
    }
  }
  const auto checks = mixroute::cli::run_suite(opts);
  return mixroute::cli::print_suite(std::cout, checks, opts) == 0 ? 0 : 1;
}
