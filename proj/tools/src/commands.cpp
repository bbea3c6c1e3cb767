#include "mixroute_cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "mixroute/errors.hpp"
#include "mixroute/fixtures.hpp"
#include "mixroute/instance_io.hpp"

namespace mixroute::cli {

int exit_code_for(const Error& error) {
  switch (error.code()) {
    case ErrorCode::kBracketFailure:
    case ErrorCode::kNonMonotoneScaling:
    case ErrorCode::kSupportBudgetExceeded:
      return kExitNonConvergence;
    default:
      return kExitValidation;
  }
}

BoundReport headline_bound(const Instance& instance) {
  const CostMatrix& cost = instance.cost;
  if (classify(cost) != SeparabilityClass::kNonseparable) {
    try {
      return bounds_pairwise(cost);
    } catch (const Error& e) {
      BoundReport none;
      none.kind = BoundKind::kPairwise;
      none.reason = e.what();
      return none;
    }
  }
  try {
    const MatrixSplit split =
        instance.split
            ? validate_split(cost.coefficients(), instance.split->q, instance.split->p)
            : default_split(cost.coefficients());
    return bounds_nonseparable(split);
  } catch (const Error& e) {
    BoundReport none;
    none.kind = BoundKind::kSplit;
    none.reason = e.what();
    return none;
  }
}

std::vector<double> parameter_grid(double start, double end, double step) {
  if (!(step > 0.0) || !(start <= end) || !std::isfinite(start) || !std::isfinite(end)) {
    throw Error(ErrorCode::kValidationError, "sweep range needs start <= end and step > 0");
  }
  // Integer stepping keeps the grid free of accumulated rounding.
  const auto count = static_cast<long>(std::floor((end - start) / step + 1e-6));
  std::vector<double> out;
  for (long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

SweepRow sweep_point(const Instance& instance, double param, const SolverOptions& opts) {
  SweepRow row;
  row.param = param;
  const PriceOfAnarchy poa = price_of_anarchy(instance.network, instance.cost, opts);
  row.poa_measured = poa.value;
  row.bicriteria_measured =
      empirical_bicriteria(instance.network, instance.cost, poa.worst.social_cost, opts).scale;
  const BoundReport bound = headline_bound(instance);
  row.poa_bound = bound.applicable ? bound.poa_bound : kUnbounded;
  row.bicriteria_bound = bound.applicable ? bound.bicriteria_bound : kUnbounded;
  return row;
}

std::vector<SweepRow> run_sweep(const std::string& fixture, double start, double end,
                                double step, const SolverOptions& opts) {
  if (fixture_parameter_name(fixture).empty()) {
    // also rejects unknown names with kUnknownFixture
    make_fixture(fixture);
    throw Error(ErrorCode::kValidationError, "fixture '" + fixture + "' has no parameter");
  }
  std::vector<SweepRow> rows;
  for (double p : parameter_grid(start, end, step))
    rows.push_back(sweep_point(make_fixture(fixture, p), p, opts));
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepHeader << "\n";
  for (const SweepRow& r : rows) {
    os << format_number(r.param) << "," << format_number(r.poa_measured) << ","
       << format_number(r.poa_bound) << "," << format_number(r.bicriteria_measured) << ","
       << format_number(r.bicriteria_bound) << "\n";
  }
}

namespace {

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path);
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

}  // namespace

int cmd_analyze(const std::string& input_path, const std::optional<std::string>& json_path,
                const SolverOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const Instance instance = load_instance(input_path);
    const AnalysisReport report = analyze(instance, opts);
    out << render_text(report);
    if (json_path && !write_file(*json_path, render_json(report), err)) return kExitValidation;
    if (!report.converged()) {
      err << "error: equilibrium solver did not reach vi-tol " << format_number(opts.vi_tol)
          << "\n";
      return kExitNonConvergence;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int cmd_sweep(const std::string& fixture, double start, double end, double step,
              const std::optional<std::string>& csv_path, const SolverOptions& opts,
              std::ostream& out, std::ostream& err) {
  try {
    const auto rows = run_sweep(fixture, start, end, step, opts);
    if (csv_path) {
      std::ofstream f(*csv_path);
      if (!f) {
        err << "error: cannot write " << *csv_path << "\n";
        return kExitValidation;
      }
      write_sweep_csv(f, rows);
    } else {
      write_sweep_csv(out, rows);
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int cmd_fixture(const std::string& name, std::optional<double> param,
                const std::optional<std::string>& output_path, std::ostream& out,
                std::ostream& err) {
  try {
    const std::string text = write_instance(make_fixture(name, param));
    if (output_path) return write_file(*output_path, text, err) ? kExitOk : kExitValidation;
    out << text;
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace mixroute::cli
