#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mixroute/analysis.hpp"
#include "mixroute/errors.hpp"

namespace mixroute::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitValidation = 2,
  kExitNonConvergence = 3,
};

/// Exit code for a library error escaping a command.
int exit_code_for(const Error& error);

/// The bound a sweep reports: pairwise when it applies, else the split
/// bound, else none (both columns +inf).
BoundReport headline_bound(const Instance& instance);

struct SweepRow {
  double param = 0.0;
  double poa_measured = 0.0;
  double poa_bound = 0.0;
  double bicriteria_measured = 0.0;
  double bicriteria_bound = 0.0;
};

/// Parameter values start, start + step, ..., end (inclusive, within step/1e6).
/// Throws kValidationError for start > end or step <= 0.
std::vector<double> parameter_grid(double start, double end, double step);

SweepRow sweep_point(const Instance& instance, double param, const SolverOptions& opts);

std::vector<SweepRow> run_sweep(const std::string& fixture, double start, double end,
                                double step, const SolverOptions& opts);

inline constexpr const char* kSweepHeader =
    "param,poa_measured,poa_bound,bicriteria_measured,bicriteria_bound";

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

int cmd_analyze(const std::string& input_path, const std::optional<std::string>& json_path,
                const SolverOptions& opts, std::ostream& out, std::ostream& err);

int cmd_sweep(const std::string& fixture, double start, double end, double step,
              const std::optional<std::string>& csv_path, const SolverOptions& opts,
              std::ostream& out, std::ostream& err);

int cmd_fixture(const std::string& name, std::optional<double> param,
                const std::optional<std::string>& output_path, std::ostream& out,
                std::ostream& err);

}  // namespace mixroute::cli
