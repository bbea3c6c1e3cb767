#include "mixroute/analysis.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mixroute/errors.hpp"

namespace mixroute {

namespace {

using json = nlohmann::ordered_json;

bool within_bound(double measured, double bound) {
  return std::isinf(bound) || measured <= bound + kBoundSlack;
}

json number_json(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

json optional_json(const std::optional<double>& v) {
  return v ? number_json(*v) : json("n/a");
}

json flow_json(const FlowVector& z) {
  json links = json::array();
  for (std::size_t i = 1; i <= z.link_count(); ++i) {
    const int id = static_cast<int>(i);
    links.push_back({{"link", id}, {"regular", z.regular(id)}, {"smart", z.smart(id)}});
  }
  return links;
}

json paths_json(const std::vector<PathFlow>& paths) {
  json out = json::array();
  for (const PathFlow& p : paths) {
    out.push_back({{"od", p.od_index},
                   {"class", to_string(p.cls)},
                   {"links", p.path.links},
                   {"mass", p.mass},
                   {"cost", p.cost}});
  }
  return out;
}

json equilibrium_json(const EquilibriumResult& eq) {
  return {{"social_cost", eq.social_cost},
          {"vi_residual", eq.vi_residual},
          {"converged", eq.converged},
          {"exhaustive", eq.exhaustive},
          {"method", eq.method},
          {"iterations", eq.iterations},
          {"patterns_explored", eq.patterns_explored},
          {"flow", flow_json(eq.flow)},
          {"paths", paths_json(eq.path_flows)}};
}

std::string path_label(const Path& p) {
  std::string s;
  for (std::size_t i = 0; i < p.links.size(); ++i) {
    if (i) s += "-";
    s += std::to_string(p.links[i]);
  }
  return s;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

AnalysisReport analyze(const Instance& instance, const SolverOptions& opts) {
  AnalysisReport r;
  r.name = instance.name;
  r.options = opts;
  const Network& net = instance.network;
  const CostMatrix& cost = instance.cost;

  r.separability = classify(cost);
  r.elementwise_monotone = is_elementwise_monotone(cost);
  r.monotone_operator = is_monotone_operator(cost);
  if (r.separability != SeparabilityClass::kNonseparable) {
    try {
      r.k = degree_of_asymmetry(cost);
    } catch (const Error& e) {
      r.notes.push_back(std::string("asymmetry: ") + e.what());
    }
  }

  r.worst = worst_equilibrium(net, cost, opts);
  r.found = solve_equilibrium(net, cost, opts);
  r.optimum = social_optimum(net, cost, opts);
  if (r.optimum.cost > 1e-15) {
    r.poa = r.worst.social_cost / r.optimum.cost;
  } else {
    r.notes.push_back("poa: ZeroOptimalCost: optimal cost is zero");
  }
  try {
    r.bicriteria = empirical_bicriteria(net, cost, r.worst.social_cost, opts);
  } catch (const Error& e) {
    r.notes.push_back(std::string("bicriteria: ") + e.what());
  }

  // beta at the worst equilibrium gives a bound for this instance itself.
  try {
    if (r.separability == SeparabilityClass::kNonseparable) {
      r.beta = beta_grid_oracle(cost, r.worst.flow, opts.grid_steps);
    } else {
      try {
        r.beta = beta_closed_form(cost, r.worst.flow);
      } catch (const Error&) {
        r.beta = beta_grid_oracle(cost, r.worst.flow, opts.grid_steps);
      }
    }
  } catch (const Error& e) {
    r.notes.push_back(std::string("beta: ") + e.what());
  }

  auto add_bound = [&](const BoundReport& rep) {
    BoundCheck check{rep, false, false};
    if (rep.applicable) {
      check.poa_satisfied = !r.poa || within_bound(*r.poa, rep.poa_bound);
      check.bicriteria_satisfied =
          !r.bicriteria || within_bound(r.bicriteria->scale, rep.bicriteria_bound);
    }
    r.bounds.push_back(check);
  };

  if (r.beta) {
    BoundReport rep;
    rep.kind = BoundKind::kBeta;
    rep.k = r.k.value_or(0.0);
    rep.poa_bound = poa_bound_from_beta(r.beta->value);
    rep.bicriteria_bound = bicriteria_bound_from_beta(r.beta->value);
    rep.applicable = true;
    if (r.beta->unbounded) rep.reason = "beta is unbounded at the worst equilibrium";
    add_bound(rep);
  }
  if (r.separability != SeparabilityClass::kNonseparable) {
    try {
      add_bound(bounds_pairwise(cost));
    } catch (const Error& e) {
      BoundReport rep;
      rep.kind = BoundKind::kPairwise;
      rep.reason = e.what();
      add_bound(rep);
    }
  } else {
    BoundReport rep;
    rep.kind = BoundKind::kSplit;
    try {
      const MatrixSplit split = instance.split
                                    ? validate_split(cost.coefficients(), instance.split->q,
                                                     instance.split->p)
                                    : default_split(cost.coefficients());
      rep = bounds_nonseparable(split);
      if (!instance.split) rep.reason = "default diagonal-dominance split";
    } catch (const Error& e) {
      rep.reason = e.what();
    }
    add_bound(rep);
  }

  auto expect = [&](const char* what, const std::optional<double>& expected,
                    std::optional<double> measured) {
    if (!expected) return;
    ExpectationCheck c{what, measured.value_or(std::nan("")), *expected, false};
    c.pass = measured && std::abs(*measured - *expected) <= kExpectationTol;
    r.expectations.push_back(c);
  };
  expect("c_eq", instance.expected.c_eq, r.worst.social_cost);
  expect("c_opt", instance.expected.c_opt, r.optimum.cost);
  expect("poa", instance.expected.poa, r.poa);
  expect("bicriteria", instance.expected.bicriteria,
         r.bicriteria ? std::optional<double>(r.bicriteria->scale) : std::nullopt);
  return r;
}

std::string render_text(const AnalysisReport& r) {
  std::ostringstream os;
  auto num = [](double v) { return format_number(v); };
  os << "instance        " << r.name << "\n";
  os << "cost structure  " << to_string(r.separability)
     << (r.elementwise_monotone ? ", elementwise monotone" : ", not elementwise monotone")
     << (r.monotone_operator ? ", monotone operator" : ", not a monotone operator") << "\n";
  os << "asymmetry k     " << (r.k ? num(*r.k) : "n/a") << "\n";
  os << "worst eq cost   " << num(r.worst.social_cost) << "  (residual "
     << num(r.worst.vi_residual) << ", " << r.worst.method
     << (r.worst.exhaustive ? ", exhaustive" : ", non-exhaustive") << ")\n";
  os << "found eq cost   " << num(r.found.social_cost) << "  (residual "
     << num(r.found.vi_residual) << ", " << r.found.method << ")\n";
  os << "optimal cost    " << num(r.optimum.cost) << "  (" << to_string(r.optimum.certificate)
     << ", gap " << num(r.optimum.gap_estimate) << ")\n";
  os << "price of anarchy " << (r.poa ? num(*r.poa) : "n/a") << "\n";
  os << "bicriteria      " << (r.bicriteria ? num(r.bicriteria->scale) : "n/a") << "\n";
  if (r.beta) {
    os << "beta at eq      " << num(r.beta->value) << "  (proof ratio "
       << num(r.beta->proof_ratio) << ", " << r.beta->method << ")\n";
  }
  for (const BoundCheck& b : r.bounds) {
    os << "bound " << to_string(b.report.kind) << "  ";
    if (!b.report.applicable) {
      os << "not applicable: " << b.report.reason << "\n";
      continue;
    }
    os << "poa <= " << num(b.report.poa_bound) << " [" << (b.poa_satisfied ? "ok" : "VIOLATED")
       << "], bicriteria <= " << num(b.report.bicriteria_bound) << " ["
       << (b.bicriteria_satisfied ? "ok" : "VIOLATED") << "]";
    if (b.report.kind == BoundKind::kSplit) os << ", eta^2 " << num(b.report.eta_squared);
    if (!b.report.reason.empty()) os << "  (" << b.report.reason << ")";
    os << "\n";
  }
  os << "worst equilibrium support\n";
  for (const PathFlow& p : r.worst.support()) {
    os << "  od " << p.od_index << " " << to_string(p.cls) << " path " << path_label(p.path)
       << "  mass " << num(p.mass) << "  cost " << num(p.cost) << "\n";
  }
  for (const ExpectationCheck& c : r.expectations) {
    os << "expect " << c.quantity << "  measured " << num(c.measured) << "  expected "
       << num(c.expected) << "  " << (c.pass ? "PASS" : "FAIL") << "\n";
  }
  for (const std::string& n : r.notes) os << "note: " << n << "\n";
  os << "options         seed " << r.options.random_seed << ", grid-steps "
     << r.options.grid_steps << ", vi-tol " << num(r.options.vi_tol) << "\n";
  return os.str();
}

std::string render_json(const AnalysisReport& r) {
  json doc;
  doc["instance"] = r.name;
  doc["separability"] = to_string(r.separability);
  doc["elementwise_monotone"] = r.elementwise_monotone;
  doc["monotone_operator"] = r.monotone_operator;
  doc["k"] = optional_json(r.k);
  doc["worst_equilibrium"] = equilibrium_json(r.worst);
  doc["found_equilibrium"] = equilibrium_json(r.found);
  doc["optimum"] = {{"cost", r.optimum.cost},
                    {"certificate", to_string(r.optimum.certificate)},
                    {"gap_estimate", number_json(r.optimum.gap_estimate)},
                    {"flow", flow_json(r.optimum.flow)},
                    {"paths", paths_json(r.optimum.path_flows)}};
  doc["poa"] = optional_json(r.poa);
  if (r.bicriteria) {
    doc["bicriteria"] = {{"scale", r.bicriteria->scale},
                         {"scaled_cost", r.bicriteria->scaled_cost},
                         {"target_cost", r.bicriteria->target_cost},
                         {"iterations", r.bicriteria->iterations}};
  } else {
    doc["bicriteria"] = "n/a";
  }
  if (r.beta) {
    json terms = json::array();
    for (double t : r.beta->per_link_terms) terms.push_back(number_json(t));
    doc["beta"] = {{"value", number_json(r.beta->value)},
                   {"proof_ratio", number_json(r.beta->proof_ratio)},
                   {"unbounded", r.beta->unbounded},
                   {"method", r.beta->method},
                   {"terms", terms}};
  } else {
    doc["beta"] = "n/a";
  }
  json bounds = json::array();
  for (const BoundCheck& b : r.bounds) {
    json jb = {{"kind", to_string(b.report.kind)}, {"applicable", b.report.applicable}};
    if (b.report.applicable) {
      jb["k"] = b.report.k;
      jb["poa_bound"] = number_json(b.report.poa_bound);
      jb["bicriteria_bound"] = number_json(b.report.bicriteria_bound);
      if (b.report.kind == BoundKind::kSplit) jb["eta_squared"] = b.report.eta_squared;
      jb["poa_satisfied"] = b.poa_satisfied;
      jb["bicriteria_satisfied"] = b.bicriteria_satisfied;
    } else {
      jb["poa_bound"] = "n/a";
      jb["bicriteria_bound"] = "n/a";
    }
    jb["reason"] = b.report.reason;
    bounds.push_back(jb);
  }
  doc["bounds"] = bounds;
  json exp = json::array();
  for (const ExpectationCheck& c : r.expectations) {
    exp.push_back({{"quantity", c.quantity},
                   {"measured", number_json(c.measured)},
                   {"expected", c.expected},
                   {"pass", c.pass}});
  }
  doc["expectations"] = exp;
  doc["notes"] = r.notes;
  doc["options"] = {{"seed", r.options.random_seed},
                    {"grid_steps", r.options.grid_steps},
                    {"vi_tol", r.options.vi_tol}};
  return doc.dump(2) + "\n";
}

}  // namespace mixroute
