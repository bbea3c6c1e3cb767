#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mixroute_cli/commands.hpp"
#include "mixroute_cli/suite.hpp"

namespace {

void add_solver_flags(CLI::App& cmd, mixroute::SolverOptions& opts) {
  cmd.add_option("--seed", opts.random_seed, "Seed for multistart fallbacks")->capture_default_str();
  cmd.add_option("--grid-steps", opts.grid_steps, "Grid resolution per dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--vi-tol", opts.vi_tol, "Equilibrium residual tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace mixroute::cli;
  CLI::App app{"Two-class affine routing games: equilibria, optima and bounds"};
  app.require_subcommand(1);

  mixroute::SolverOptions opts;

  auto* analyze = app.add_subcommand("analyze", "Analyze a JSON instance");
  std::string input;
  std::optional<std::string> json_path;
  analyze->add_option("input", input, "Instance file")->required();
  analyze->add_option("--json", json_path, "Also write the report as JSON");
  add_solver_flags(*analyze, opts);

  auto* sweep = app.add_subcommand("sweep", "Sweep a fixture parameter, CSV output");
  std::string sweep_fixture;
  double start = 1.0, end = 4.0, step = 0.1;
  std::optional<std::string> csv_path;
  sweep->add_option("fixture", sweep_fixture, "example1 | example2 | example3 | mu-coupled")
      ->required();
  sweep->add_option("--start", start, "First parameter value")->capture_default_str();
  sweep->add_option("--end", end, "Last parameter value")->capture_default_str();
  sweep->add_option("--step", step, "Parameter increment")->capture_default_str();
  sweep->add_option("-o,--output", csv_path, "CSV file (default stdout)");
  add_solver_flags(*sweep, opts);

  auto* verify = app.add_subcommand("verify", "Run the built-in acceptance suite");
  SuiteOptions suite;
  verify->add_option("--filter", suite.filter, "Only checks whose tag contains this text");
  verify->add_option("--perturb", suite.perturb,
                     "Scale expected values by (1 + fraction); harness self-test");
  verify->add_option("--criterion", suite.criteria, "Restrict to these criteria (1-9)")
      ->check(CLI::Range(1, kCriterionCount));
  add_solver_flags(*verify, opts);

  auto* fixture = app.add_subcommand("fixture", "Write a built-in instance as JSON");
  std::string fixture_name;
  std::optional<double> param;
  std::optional<std::string> fixture_out;
  fixture->add_option("name", fixture_name,
                      "example1 | example2 | example3 | pigou-footnote | mu-coupled")
      ->required();
  fixture->add_option("--param", param, "zeta, k or mu depending on the fixture");
  fixture->add_option("-o,--output", fixture_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (*analyze) return cmd_analyze(input, json_path, opts, std::cout, std::cerr);
  if (*sweep) return cmd_sweep(sweep_fixture, start, end, step, csv_path, opts, std::cout, std::cerr);
  if (*verify) {
    suite.solver = opts;
    return cmd_verify(suite, std::cout);
  }
  return cmd_fixture(fixture_name, param, fixture_out, std::cout, std::cerr);
}
