#include "mixroute_cli/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "mixroute/analysis.hpp"
#include "mixroute/bounds.hpp"
#include "mixroute/errors.hpp"
#include "mixroute/fixtures.hpp"
#include "mixroute_cli/commands.hpp"

namespace mixroute::cli {

namespace {

constexpr double kTol = 1e-6;

std::string fmt(double v) { return format_number(v); }

class Suite {
 public:
  explicit Suite(const SuiteOptions& opts) : opts_(opts) {}

  bool wants(int criterion, const std::string& tag) const {
    if (!opts_.criteria.empty() &&
        std::find(opts_.criteria.begin(), opts_.criteria.end(), criterion) == opts_.criteria.end())
      return false;
    return opts_.filter.empty() || tag.find(opts_.filter) != std::string::npos;
  }

  void near(int c, const std::string& tag, const std::string& label, double measured,
            double expected, double tol = kTol) {
    expected *= 1.0 + opts_.perturb;
    add({c, tag, label, Comparison::kNear, measured, expected, tol,
         std::abs(measured - expected) <= tol, ""});
  }

  void at_most(int c, const std::string& tag, const std::string& label, double measured,
               double bound, double tol = kTol) {
    add({c, tag, label, Comparison::kAtMost, measured, bound, tol,
         std::isinf(bound) ? bound > 0 : measured <= bound + tol, ""});
  }

  void holds(int c, const std::string& tag, const std::string& label, bool ok,
             const std::string& detail = "") {
    add({c, tag, label, Comparison::kHolds, ok ? 1.0 : 0.0, 1.0, 0.0, ok, detail});
  }

  // Runs `body`; a library error turns into one failing check.
  void guarded(int c, const std::string& tag, const std::string& label,
               const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      holds(c, tag, label + " raised", false, e.what());
    }
  }

  const SolverOptions& solver() const { return opts_.solver; }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  void add(Check c) { checks_.push_back(std::move(c)); }

  SuiteOptions opts_;
  std::vector<Check> checks_;
};

void criterion1(Suite& s) {
  if (!s.wants(1, "example1")) return;
  for (double zeta : {1.0, 2.0, 5.0, 10.0, 100.0}) {
    const std::string at = "zeta=" + fmt(zeta);
    s.guarded(1, "example1", at, [&] {
      const Instance inst = example1(zeta);
      const PriceOfAnarchy pa = price_of_anarchy(inst.network, inst.cost, s.solver());
      const BicriteriaResult bic =
          empirical_bicriteria(inst.network, inst.cost, pa.worst.social_cost, s.solver());
      s.near(1, "example1", at + " c_eq", pa.worst.social_cost, 1.0 / (4.0 * zeta) + 0.25);
      s.near(1, "example1", at + " c_opt", pa.optimum.cost, 1.0 / (2.0 * zeta));
      s.near(1, "example1", at + " poa", pa.value, (zeta + 1.0) / 2.0);
      s.near(1, "example1", at + " bicriteria", bic.scale, (zeta + 1.0) / 2.0);
      s.holds(1, "example1", at + " optimum certificate exhaustive",
              pa.optimum.certificate != Certificate::kMultistartLocal,
              to_string(pa.optimum.certificate));
    });
  }
}

void criterion2(Suite& s) {
  if (!s.wants(2, "example2")) return;
  for (double k : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    const std::string at = "k=" + fmt(k);
    s.guarded(2, "example2", at, [&] {
      const Instance inst = example2(k);
      const PriceOfAnarchy pa = price_of_anarchy(inst.network, inst.cost, s.solver());
      const BicriteriaResult bic =
          empirical_bicriteria(inst.network, inst.cost, pa.worst.social_cost, s.solver());
      s.near(2, "example2", at + " worst c_eq", pa.worst.social_cost, 2.0 * k);
      s.near(2, "example2", at + " c_opt", pa.optimum.cost, 2.0);
      s.near(2, "example2", at + " poa", pa.value, k);
      s.near(2, "example2", at + " bicriteria", bic.scale, std::sqrt(k));
      auto found = [&](double target) {
        return std::any_of(pa.worst.candidates.begin(), pa.worst.candidates.end(),
                           [&](const EquilibriumCandidate& c) {
                             return std::abs(c.social_cost - target) <= kTol;
                           });
      };
      s.holds(2, "example2", at + " equilibrium with cost 2k enumerated", found(2.0 * k),
              std::to_string(pa.worst.candidates.size()) + " candidates");
      s.holds(2, "example2", at + " equilibrium with cost 2 enumerated", found(2.0),
              std::to_string(pa.worst.candidates.size()) + " candidates");
    });
  }
}

void criterion3(Suite& s) {
  if (!s.wants(3, "example3")) return;
  for (double k : {1.0, 2.0, 4.0}) {
    const std::string at = "k=" + fmt(k);
    s.guarded(3, "example3", at, [&] {
      const double r = std::sqrt(k);
      const Instance inst = example3(k);
      const PriceOfAnarchy pa = price_of_anarchy(inst.network, inst.cost, s.solver());
      const BicriteriaResult bic =
          empirical_bicriteria(inst.network, inst.cost, pa.worst.social_cost, s.solver());
      s.near(3, "example3", at + " c_eq", pa.worst.social_cost, (k + 2.0 * r - 1.0) / (2.0 * k));
      s.near(3, "example3", at + " c_opt", pa.optimum.cost, (5.0 * r - 2.0) / (4.0 * k));
      s.near(3, "example3", at + " poa", pa.value, (2.0 * k + 4.0 * r - 2.0) / (5.0 * r - 2.0));
      s.near(3, "example3", at + " bicriteria", bic.scale,
             std::sqrt((2.0 * (k - 3.0) * r + 1.0) / k + 8.0) + 1.0 / r - 2.0);
      if (k == 1.0) s.near(3, "example3", at + " poa equals 4/3", pa.value, 4.0 / 3.0, 1e-9);
    });
  }
}

Instance random_parallel(std::mt19937_64& rng, int links, double k_lo, double k_hi) {
  std::uniform_real_distribution<double> kd(k_lo, k_hi), ad(0.1, 5.0), bd(0.0, 2.0),
      dd(0.1, 2.0);
  std::bernoulli_distribution flip(0.5);
  Instance inst;
  inst.name = "random";
  std::vector<LinkCostParams> costs;
  for (int i = 0; i < links; ++i) {
    LinkCostParams p;
    p.asymmetry = kd(rng);
    p.congestion = ad(rng);
    p.free_flow_time = bd(rng);
    p.orientation = flip(rng) ? Orientation::kSmartHeavy : Orientation::kRegularHeavy;
    costs.push_back(p);
  }
  const double dr = dd(rng), ds = dd(rng);
  inst.network = parallel_network(static_cast<std::size_t>(links), dr, ds);
  inst.cost = assemble_matrix(costs);
  inst.link_costs = costs;
  return inst;
}

void criterion4(Suite& s) {
  const std::string tag = "random-pairwise";
  if (!s.wants(4, tag)) return;
  std::mt19937_64 rng(s.solver().random_seed * 7919 + 4);
  std::uniform_int_distribution<int> links(2, 3);
  double poa_slack = -kUnbounded, bic_slack = -kUnbounded;
  int poa_worst = -1, bic_worst = -1, errors = 0;
  std::string first_error;
  for (int i = 0; i < 200; ++i) {
    const Instance inst = random_parallel(rng, links(rng), 1.0, 3.9);
    try {
      const PriceOfAnarchy pa = price_of_anarchy(inst.network, inst.cost, s.solver());
      const BicriteriaResult bic =
          empirical_bicriteria(inst.network, inst.cost, pa.worst.social_cost, s.solver());
      const BoundReport bound = bounds_pairwise(inst.cost);
      if (pa.value - bound.poa_bound > poa_slack) {
        poa_slack = pa.value - bound.poa_bound;
        poa_worst = i;
      }
      if (bic.scale - bound.bicriteria_bound > bic_slack) {
        bic_slack = bic.scale - bound.bicriteria_bound;
        bic_worst = i;
      }
      if (pa.optimum.certificate == Certificate::kMultistartLocal || !pa.worst.exhaustive) {
        ++errors;
        if (first_error.empty()) first_error = "instance " + std::to_string(i) + " not exhaustive";
      }
    } catch (const std::exception& e) {
      ++errors;
      if (first_error.empty()) first_error = "instance " + std::to_string(i) + ": " + e.what();
    }
  }
  s.at_most(4, tag, "max(poa - 4/(4-k)) over 200 instances (worst #" +
                        std::to_string(poa_worst) + ")",
            poa_slack, 0.0);
  s.at_most(4, tag, "max(bicriteria - (1+k/4)) over 200 instances (worst #" +
                        std::to_string(bic_worst) + ")",
            bic_slack, 0.0);
  s.holds(4, tag, "all 200 instances solved exhaustively", errors == 0, first_error);
}

void criterion5(Suite& s) {
  const std::string tag = "beta";
  if (!s.wants(5, tag)) return;
  std::mt19937_64 rng(s.solver().random_seed * 7919 + 5);
  std::uniform_int_distribution<int> links(1, 3);
  std::uniform_real_distribution<double> vd(0.0, 2.0);
  double agreement = 0.0, sup_exact = -kUnbounded, sup_proof = -kUnbounded;
  std::string failure;
  for (int i = 0; i < 100; ++i) {
    const Instance inst = random_parallel(rng, links(rng), 1.0, 4.0);
    FlowVector v(inst.network.link_count());
    for (Eigen::Index j = 0; j < v.values().size(); ++j) v.values()(j) = vd(rng);
    try {
      const BetaValue closed = beta_closed_form(inst.cost, v);
      const BetaValue oracle = beta_grid_oracle(inst.cost, v, s.solver().grid_steps);
      const double resolution = oracle.error_bar / closed.denominator + 1e-12;
      agreement = std::max(agreement, std::abs(closed.value - oracle.value) / (2.0 * resolution));
      const double k = degree_of_asymmetry(inst.cost);
      sup_exact = std::max(sup_exact, closed.value - k / 4.0);
      sup_proof = std::max(sup_proof, closed.proof_ratio - k / 4.0);
    } catch (const std::exception& e) {
      if (failure.empty()) failure = "pair " + std::to_string(i) + ": " + e.what();
    }
  }
  s.at_most(5, tag, "max |closed - oracle| / (2 x grid resolution) over 100 pairs", agreement,
            1.0, 0.0);
  s.at_most(5, tag, "max(beta - k/4) over 100 pairs", sup_exact, 0.0, 1e-9);
  s.at_most(5, tag, "max(beta proof ratio - k/4) over 100 pairs", sup_proof, 0.0, 1e-9);
  s.holds(5, tag, "all pairs evaluated", failure.empty(), failure);

  s.guarded(5, tag, "single link k=2", [&] {
    const std::vector<LinkCostParams> one = {{0.0, 1.0, 2.0, Orientation::kRegularHeavy}};
    const CostMatrix cost = assemble_matrix(one);
    FlowVector v(1);
    v.regular(1) = 1.0;
    s.near(5, tag, "single link k=2, v=(1,0): beta", beta_closed_form(cost, v).value, 0.5);
    s.near(5, tag, "single link k=2, v=(1,0): oracle beta",
           beta_grid_oracle(cost, v, s.solver().grid_steps).value, 0.5);
  });
}

void criterion6(Suite& s) {
  const std::string tag = "pigou-footnote";
  if (!s.wants(6, tag)) return;
  s.guarded(6, tag, "footnote matrix", [&] {
    const Instance inst = pigou_footnote();
    FlowVector u(1), v(1);
    u.regular(1) = 1.0;
    v.smart(1) = 2.0;
    s.near(6, tag, "<c(u)-c(v), u-v> for u=(1,0), v=(0,2)", monotonicity_gap(inst.cost, u, v),
           -1.0, 0.0);
    s.holds(6, tag, "is_monotone_operator is false", !is_monotone_operator(inst.cost));
    const auto w = monotonicity_witness(inst.cost);
    const bool ok = w && (w->first.values().array() >= 0.0).all() &&
                    (w->second.values().array() >= 0.0).all() &&
                    monotonicity_gap(inst.cost, w->first, w->second) < 0.0;
    s.holds(6, tag, "witness is nonnegative with negative gap", ok,
            w ? "gap " + fmt(monotonicity_gap(inst.cost, w->first, w->second)) : "no witness");
  });
}

// Largest generalized Rayleigh quotient d'P'S^-1 P d / d'S d by random
// sampling, refined by power iteration on S^-1 P'S^-1 P. Uses Eigen's LDLT
// only, independent of the library's Jacobi routine.
double rayleigh_eta(const Matrix& p, std::mt19937_64& rng) {
  const Matrix s = 0.5 * (p + p.transpose());
  const Eigen::LDLT<Matrix> ldlt(s);
  const Matrix k = p.transpose() * ldlt.solve(p);
  std::normal_distribution<double> nd;
  auto quotient = [&](const Vector& d) { return d.dot(k * d) / d.dot(s * d); };
  Vector best = Vector::Zero(p.rows());
  double best_q = -1.0;
  for (int i = 0; i < 100000; ++i) {
    Vector d(p.rows());
    for (Eigen::Index j = 0; j < d.size(); ++j) d(j) = nd(rng);
    const double q = quotient(d);
    if (q > best_q) {
      best_q = q;
      best = d;
    }
  }
  Vector d = best;
  for (int it = 0; it < 2000; ++it) {
    d = ldlt.solve(k * d);
    d.normalize();
    best_q = std::max(best_q, quotient(d));
  }
  return best_q;
}

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> nd;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = nd(rng);
  return m;
}

void criterion7(Suite& s) {
  std::mt19937_64 rng(s.solver().random_seed * 7919 + 7);
  if (s.wants(7, "eta")) {
    double sym_dev = 0.0, oracle_dev = 0.0;
    for (int i = 0; i < 50; ++i) {
      const Eigen::Index n = 2 + 2 * (i % 2);
      const Matrix l = random_matrix(rng, n);
      const Matrix p = l * l.transpose() + 0.1 * Matrix::Identity(n, n);
      sym_dev = std::max(sym_dev, std::abs(eta_squared(p) - 1.0));
    }
    for (int i = 0; i < 50; ++i) {
      const Eigen::Index n = 2 + 2 * (i % 2);
      const Matrix l = random_matrix(rng, n);
      const Matrix g = random_matrix(rng, n);
      const Matrix p = l * l.transpose() + 0.1 * Matrix::Identity(n, n) + (g - g.transpose());
      oracle_dev = std::max(oracle_dev, std::abs(eta_squared(p) - rayleigh_eta(p, rng)));
    }
    s.at_most(7, "eta", "max |eta^2 - 1| over 50 symmetric PD P", sym_dev, 0.0, 1e-9);
    s.at_most(7, "eta", "max |eta^2 - Rayleigh oracle| over 50 nonsymmetric P", oracle_dev, 0.0,
              1e-6);
  }

  if (s.wants(7, "split")) {
    const Matrix a = mu_coupled(0.2).cost.coefficients();
    const MatrixSplit good = default_split(a);
    auto rejects = [&](const std::string& what, ErrorCode expected, const Matrix& q,
                       const Matrix& p, const Matrix& whole) {
      std::string got = "accepted";
      bool ok = false;
      try {
        validate_split(whole, q, p);
      } catch (const Error& e) {
        got = std::string(to_string(e.code()));
        ok = e.code() == expected;
      }
      s.holds(7, "split", "validate_split rejects " + what + " with " +
                              std::string(to_string(expected)),
              ok, got);
    };
    Matrix q_mismatch = good.q;
    q_mismatch(0, 0) += 0.5;
    rejects("Q + P != A", ErrorCode::kSplitMismatch, q_mismatch, good.p, a);
    Matrix q_off = good.q;
    q_off(0, 2) = 0.1;
    rejects("off-block Q", ErrorCode::kQNotBlockDiagonal, q_off, a - q_off, a);
    Matrix q_neg = good.q;
    q_neg(1, 1) = -0.1;
    rejects("nonpositive Q block", ErrorCode::kQNonPositiveBlock, q_neg, a - q_neg, a);
    const Matrix blocks = example2(2.0).cost.coefficients();
    rejects("Q = A, P = 0", ErrorCode::kPNotPositiveDefinite, blocks,
            Matrix::Zero(blocks.rows(), blocks.cols()), blocks);
  }

  if (s.wants(7, "mu-coupled")) {
    s.guarded(7, "mu-coupled", "mu=0.2", [&] {
      const Instance inst = mu_coupled(0.2);
      s.holds(7, "mu-coupled", "mu=0.2 fixture carries a split", inst.split.has_value());
      const MatrixSplit split =
          validate_split(inst.cost.coefficients(), inst.split->q, inst.split->p);
      const BoundReport bound = bounds_nonseparable(split);
      const PriceOfAnarchy pa = price_of_anarchy(inst.network, inst.cost, s.solver());
      s.at_most(7, "mu-coupled", "mu=0.2 poa <= 4/(4-k_Q) + eta^2", pa.value, bound.poa_bound);
    });
  }
}

void criterion8(Suite& s) {
  const std::vector<std::pair<std::string, double>> fixtures = {
      {"example1", 1.0}, {"example1", 2.0},  {"example2", 1.5},       {"example2", 2.0},
      {"example3", 1.0}, {"example3", 4.0},  {"pigou-footnote", 0.0}, {"mu-coupled", 0.2}};
  for (const auto& [name, param] : fixtures) {
    if (!s.wants(8, name)) continue;
    const bool has_param = !fixture_parameter_name(name).empty();
    const std::string at =
        name + (has_param ? " " + fixture_parameter_name(name) + "=" + fmt(param) : "");
    s.guarded(8, name, at, [&] {
      const Instance inst = make_fixture(name, has_param ? std::optional(param) : std::nullopt);
      const AnalysisReport first = analyze(inst, s.solver());
      for (const auto* eq : {&first.worst, &first.found}) {
        const std::string which = eq == &first.worst ? " worst" : " found";
        s.at_most(8, name, at + which + " vi_residual", eq->vi_residual, 1e-8, 0.0);
        const double again =
            vi_residual(inst.cost, inst.network, eq->flow, s.solver().feasibility_tol);
        s.at_most(8, name, at + which + " re-verified vi_residual", again, 1e-8, 0.0);
        s.near(8, name, at + which + " re-verification is idempotent", again, eq->vi_residual,
               1e-12);
      }
      const AnalysisReport second = analyze(inst, s.solver());
      s.holds(8, name, at + " two runs give byte-identical reports",
              render_json(first) == render_json(second));
    });
  }
}

void criterion9(Suite& s) {
  for (const std::string name : {"example2", "example3"}) {
    if (!s.wants(9, name)) continue;
    s.guarded(9, name, "sweep " + name, [&] {
      const auto rows = run_sweep(name, 1.0, 4.0, 0.1, s.solver());
      double poa_slack = -kUnbounded, bic_slack = -kUnbounded;
      for (const SweepRow& r : rows) {
        if (r.param >= 4.0 - 1e-9) continue;
        poa_slack = std::max(poa_slack, r.poa_measured - r.poa_bound);
        bic_slack = std::max(bic_slack, r.bicriteria_measured - r.bicriteria_bound);
      }
      s.holds(9, name, "sweep " + name + " has 31 rows", rows.size() == 31,
              std::to_string(rows.size()) + " rows");
      s.at_most(9, name, "sweep " + name + " max(poa - bound) for k < 4", poa_slack, 0.0);
      s.at_most(9, name, "sweep " + name + " max(bicriteria - bound) for k < 4", bic_slack, 0.0);
      std::ostringstream csv;
      write_sweep_csv(csv, rows);
      s.holds(9, name, "sweep " + name + " CSV header",
              csv.str().rfind(std::string(kSweepHeader) + "\n", 0) == 0);
      if (name != "example2") return;
      for (const SweepRow& r : rows) {
        if (std::abs(r.param - 2.0) < 1e-9) {
          s.near(9, name, "sweep example2 k=2 poa tight", r.poa_measured, r.poa_bound);
        }
        if (std::abs(r.param - 4.0) < 1e-9) {
          s.near(9, name, "sweep example2 k=4 bicriteria tight", r.bicriteria_measured,
                 r.bicriteria_bound);
          s.holds(9, name, "sweep example2 k=4 poa bound is inf", std::isinf(r.poa_bound));
        }
      }
    });
  }
}

}  // namespace

std::vector<Check> run_suite(const SuiteOptions& opts) {
  Suite s(opts);
  criterion1(s);
  criterion2(s);
  criterion3(s);
  criterion4(s);
  criterion5(s);
  criterion6(s);
  criterion7(s);
  criterion8(s);
  criterion9(s);
  return s.take();
}

std::string format_check(const Check& c) {
  std::ostringstream os;
  os << (c.pass ? "PASS" : "FAIL") << " [c" << c.criterion << "] " << c.label;
  switch (c.comparison) {
    case Comparison::kNear:
      os << "  measured " << fmt(c.measured) << "  expected " << fmt(c.expected) << "  tol "
         << fmt(c.tol);
      break;
    case Comparison::kAtMost:
      os << "  measured " << fmt(c.measured) << "  bound " << fmt(c.expected) << "  tol "
         << fmt(c.tol);
      break;
    case Comparison::kHolds:
      break;
  }
  if (!c.detail.empty()) os << "  (" << c.detail << ")";
  return os.str();
}

int print_suite(std::ostream& os, const std::vector<Check>& checks, const SuiteOptions& opts) {
  for (const Check& c : checks) os << format_check(c) << "\n";
  int failed = 0;
  for (int crit = 1; crit <= kCriterionCount; ++crit) {
    if (!opts.criteria.empty() &&
        std::find(opts.criteria.begin(), opts.criteria.end(), crit) == opts.criteria.end())
      continue;
    int total = 0, bad = 0;
    for (const Check& c : checks) {
      if (c.criterion != crit) continue;
      ++total;
      if (!c.pass) ++bad;
    }
    failed += bad;
    os << "criterion " << crit << ": ";
    if (total == 0) {
      os << "SKIPPED (no checks match the filter)\n";
    } else if (bad == 0) {
      os << "PASS (" << total << " checks)\n";
    } else {
      os << "FAIL (" << bad << " of " << total << " checks failed)\n";
    }
  }
  os << "verify: " << checks.size() << " checks, " << failed << " failed\n";
  return failed;
}

int cmd_verify(const SuiteOptions& opts, std::ostream& out) {
  const auto checks = run_suite(opts);
  return print_suite(out, checks, opts) == 0 ? kExitOk : kExitVerifyFailed;
}

}  // namespace mixroute::cli
