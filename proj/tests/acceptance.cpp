// Acceptance suite: one criterion per section, one PASS/FAIL line each.
// Exits nonzero if any criterion fails. The CLI-facing criterion needs
// NORM_AUDIT_BIN to point at the norm_audit binary.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "normaudit/audit.hpp"
#include "normaudit/catalog.hpp"
#include "normaudit/chart_geometry.hpp"
#include "normaudit/dsl.hpp"
#include "normaudit/math.hpp"
#include "normaudit/singularity.hpp"
#include "support/ast_gen.hpp"

using namespace normaudit;

namespace {

struct Checker {
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void within(double value, double expected, double tol, const std::string& what) {
    if (!(std::abs(value - expected) <= tol)) {
      std::ostringstream os;
      os << what << ": got " << value << ", expected " << expected << " +- " << tol;
      failures.push_back(os.str());
    }
  }
};

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const char* bin = std::getenv("NORM_AUDIT_BIN");
  if (!bin) return {};
  const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {};
  RunResult result;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe))
    result.output.append(buf.data(), n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string drop_timestamp_line(const std::string& body) {
  std::istringstream in(body);
  std::string out, line;
  while (std::getline(in, line)) {
    if (line.find("\"timestamp\"") != std::string::npos) continue;
    out += line;
    out += '\n';
  }
  return out;
}

double naive_logsumexp(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += std::exp(x);
  return std::log(s);
}

// --- criteria ---------------------------------------------------------------

void criterion_temperature(Checker& c) {
  c.within(temperature_pct_change(1, 11, TempUnit::C), 10.0, 1e-12, "Celsius pct");
  c.within(temperature_pct_change(1, 11, TempUnit::F), 18.0 / 33.8, 1e-12, "Fahrenheit pct");
  c.within(temperature_pct_change(1, 11, TempUnit::K), 10.0 / 274.15, 1e-12, "Kelvin pct");
  c.require(std::round(100.0 * temperature_pct_change(1, 11, TempUnit::F)) == 53.0,
            "Fahrenheit pct rounds to 53%");
  c.require(std::round(1000.0 * temperature_pct_change(1, 11, TempUnit::K)) / 10.0 == 3.6,
            "Kelvin pct rounds to 3.6%");
}

void criterion_binary_matrix(Checker& c) {
  const auto start = std::chrono::steady_clock::now();
  const auto& e = catalog_entry("binary");
  c.require(e.counterfactuals.size() == 6, "six binary counterfactuals");
  c.require(e.audit_points.size() == 5, "five base points");
  for (const auto& cf : e.counterfactuals) {
    for (std::size_t i = 0; i < e.audit_points.size(); ++i) {
      const auto verdict =
          invariance_audit(cf.q, e.family, e.audit_points[i], e.context, 1000, 1e-9, 7);
      const bool expected_invariant = cf.normalization_free;
      c.require((verdict.status == AuditStatus::invariant) == expected_invariant,
                cf.q.name + " point " + std::to_string(i) + " classification");
      if (!expected_invariant) {
        const auto again =
            invariance_audit(cf.q, e.family, e.audit_points[i], e.context, 1000, 1e-9, 7);
        c.require(verdict.witness.has_value() && again.witness.has_value() &&
                      verdict.witness->element.params == again.witness->element.params &&
                      verdict.witness->value_at_transformed == again.witness->value_at_transformed,
                  cf.q.name + " point " + std::to_string(i) + " witness reproducibility");
      }
    }
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.require(elapsed < 2.0,
            "binary matrix runtime under 2 s (took " + std::to_string(elapsed) + ")");
}

void criterion_logit(Checker& c) {
  const auto& e = catalog_entry("logit");

  const LogitDemandModel fixture{{0, 1, 2}, 2.0, 1.0, 0.0};
  const std::vector<double> dp{0, 1, 3};
  const double dcs = logit_delta_cs(fixture, dp);
  c.within(dcs, 0.381120, 5e-7, "Delta CS six-digit fixture value");
  const double oracle =
      (1.0 / 2.0) * (naive_logsumexp(std::vector{0.0, 1.0, 3.0}) -
                     naive_logsumexp(std::vector{0.0, 1.0, 2.0}));
  c.within(dcs, oracle, 1e-12, "Delta CS against the independent logsumexp route");

  for (const auto& theta : e.audit_points) {
    const auto verdict =
        invariance_audit(e.find("delta_cs").q, e.family, theta, e.context, 1000, 1e-9, 19);
    c.require(verdict.status == AuditStatus::invariant, "Delta CS invariant at tol 1e-9");
    c.require(verdict.max_rel_deviation <= 1e-9, "Delta CS max deviation within 1e-9");
  }
  c.require(invariance_audit(e.find("cs_level").q, e.family, e.base_point, e.context, 1000, 1e-9,
                             19)
                    .status == AuditStatus::non_invariant,
            "CS level non-invariant");
  c.require(invariance_audit(e.find("pct_cs").q, e.family, e.base_point, e.context, 1000, 1e-9,
                             19)
                    .status == AuditStatus::non_invariant,
            "Delta CS / CS non-invariant");

  const std::vector<std::vector<double>> fixtures = {
      {0, 1, 2}, {0, 1, 3}, {-30, 0, 30}, {29.5, -29.5, 1.25}, {0.5}};
  for (const auto& xs : fixtures)
    c.within(logsumexp(xs), naive_logsumexp(xs), 1e-12, "naive vs max-shifted logsumexp");
}

void criterion_network(Checker& c) {
  const auto& e = catalog_entry("network");
  for (const auto& cf : e.counterfactuals) {
    for (const auto& theta : e.audit_points) {
      const auto verdict = invariance_audit(cf.q, e.family, theta, e.context, 1000, 1e-9, 23);
      c.require((verdict.status == AuditStatus::invariant) == cf.normalization_free,
                "network " + cf.q.name + " classification");
    }
  }

  // two-quantile normalization on every audit point: quantile conditions,
  // idempotence, collapse over 500 sampled elements
  NetworkModel proto;
  proto.cov_grid = {0.0, 1.0};
  proto.w = {{0.3, -0.2}, {-0.2, 0.5}};
  proto.unit_cov = {0, 1, 0, 1};
  proto.fixed_effects = {0.1, 0.2, -0.3, 0.4};
  proto.errdist = DistHandle::logistic(0, 1);
  proto.alpha_q = 0.25;
  for (const auto& theta : e.audit_points) {
    const NetworkModel normalized = two_quantile_normalize(proto.with_point(theta), 0.25);
    c.require(std::abs(normalized.errdist.quantile(0.25)) <= 1e-10,
              "alpha-quantile pinned to zero");
    c.require(std::abs(normalized.errdist.quantile(0.75) - normalized.errdist.quantile(0.25) -
                       1.0) <= 1e-10,
              "interquantile range pinned to one");
  }
  const auto report =
      normalization_check(e.normalization, e.family, e.audit_points, 500, 1e-9, 29,
                          e.orbit_invariant);
  c.require(report.collapse.pass, "two-quantile within-class collapse over 500 elements");
  c.require(report.idempotence.pass, "two-quantile idempotence");
  c.require(report.separation.pass, "two-quantile separation");

  const auto subtract_first = [](const ParamPoint& p) {
    ParamPoint out;
    const double a1 = p.coord("A_1");
    for (const auto& [name, v] : p.coords()) out.set_coord(name, v - a1);
    return out;
  };
  const auto verdict =
      check_assumption_preservation(subtract_first, "cross-sectional-sampling", 31, 10000);
  c.require(verdict.status == PreservationStatus::violated, "reference-unit subtraction flagged");
  for (int i = 1; i < verdict.n_units; ++i) {
    for (int j = i + 1; j < verdict.n_units; ++j) {
      c.require(verdict.corr[i][j] >= 0.45 && verdict.corr[i][j] <= 0.55,
                "corr(A^_" + std::to_string(i + 1) + ", A^_" + std::to_string(j + 1) +
                    ") inside [0.45, 0.55]");
    }
  }
}

void criterion_group_axioms(Checker& c) {
  const auto binary = check_group_axioms(binary_affine_family(), 123, 500, 1e-10);
  c.require(binary.pass, "binary family axioms at 1e-10");
  const auto network = check_group_axioms(network_affine_family(), 123, 500, 1e-10);
  c.require(network.pass, "network family axioms at 1e-10");
}

void criterion_chart_geometry(Checker& c) {
  for (int dim : {2, 5, 10}) {
    const auto report = strong_equivalence_check(100000, dim, 321);
    c.require(report.violations == 0,
              "strong equivalence violations in D=" + std::to_string(dim));
  }

  const std::vector<double> grid{1.0, 10.0, 1000.0, 1000000.0};
  const auto within = convergence_experiment(ConvergenceScenario::within_sign, grid);
  c.require(within.back().chart.value() == 1000000.0, "within-sign chart distance at M=1e6");
  c.require(within.back().great_circle <= 5e-7, "within-sign angle bound at M=1e6");
  for (std::size_t i = 1; i < within.size(); ++i)
    c.require(within[i].great_circle < within[i - 1].great_circle,
              "within-sign angles strictly decreasing");

  const auto cross = convergence_experiment(ConvergenceScenario::cross_sign, grid);
  c.require(!cross[2].chart.has_value(), "cross-sign rows disconnected");
  c.require(cross[2].great_circle <= 2e-3, "cross-sign angle bound at M=1e3");
  for (std::size_t i = 1; i < cross.size(); ++i)
    c.require(cross[i].great_circle < cross[i - 1].great_circle,
              "cross-sign angles strictly decreasing");
}

void criterion_singularity(Checker& c) {
  const auto sys = log_scaling_system();
  for (int k = 0; k <= 10; ++k) {
    const double candidate = -5.0 + k;
    const auto report = fixed_point_extension_test(sys, candidate, {"scaling", {2.0}});
    c.within(report.inconsistency, 0.6931471805599453, 1e-15,
             "fixed-point inconsistency at candidate " + std::to_string(candidate));
  }

  const OutcomeAtomDist y0{0.5, DistHandle::quantile_grid({{0.01, 1.0}, {0.99, 1.0}})};
  const OutcomeAtomDist y1{0.0, DistHandle::quantile_grid({{0.01, 2.0}, {0.99, 2.0}})};
  for (double a : {std::exp(1.0), std::exp(2.0)}) {
    const auto report = ate_scale_sensitivity(y0, y1, 0.0, a, 100000, 47);
    c.require(std::abs(report.shift - report.expected_shift) <= 3.0 * report.shift_se,
              "ATE shift within 3 SE at a = " + std::to_string(a));
  }

  c.require(equivariance_residual(sys, 10000, 5) <= 1e-12, "log equivariance residual");
  auto log1p_sys = sys;
  log1p_sys.m = [](double y) { return std::log1p(y); };
  c.require(equivariance_residual_at(log1p_sys, {"scaling", {2.0}}, 1.0) >= 0.2,
            "log1p equivariance residual at (y=1, a=2)");
}

void criterion_wlog(Checker& c) {
  for (const auto& id : catalog_ids()) {
    const auto& e = catalog_entry(id);
    for (const auto& cf : e.counterfactuals) {
      for (const auto& theta : e.audit_points) {
        const auto report = wlog_equivalence_audit(cf.q, e.family, e.normalization, theta,
                                                   e.context, 500, 1e-9, 37);
        c.require(report.verdicts_agree, id + "/" + cf.q.name + " verdict agreement");
        if (report.from_theta.status == AuditStatus::invariant)
          c.require(report.values_agree, id + "/" + cf.q.name + " value agreement at 1e-9");
      }
    }
  }
}

void criterion_dsl(Checker& c) {
  Rng rng(31337);
  for (int k = 0; k < 1000; ++k) {
    const auto ast = normaudit::testing::random_ast(rng, 1 + static_cast<int>(rng.next_u64() % 6));
    const std::string printed = dsl::print_expr(*ast);
    const auto reparsed = dsl::parse_expr(printed);
    if (!dsl::expr_equal(*ast, *reparsed)) {
      c.require(false, "fixpoint failure on: " + printed);
      break;
    }
  }

  const BinaryChoiceModel m{{0.2, 0.3}, DistHandle::logistic(0, 1)};
  const std::map<std::string, double> bindings{{"b1", 0.2},      {"b2", 0.3},
                                               {"x2", 1.0},      {"x2p", 2.0},
                                               {"eps_loc", 0.0}, {"eps_scale", 1.0}};
  c.within(dsl::eval_expr(*dsl::parse_expr(
               "logistic_pdf((b1 + b2*x2 - eps_loc) / eps_scale) / eps_scale * b2"),
                          bindings),
           binary_marginal_effect(m, std::vector{1.0, 1.0}, 2), 1e-12,
           "DSL marginal effect matches the builtin");
  c.within(dsl::eval_expr(*dsl::parse_expr("logistic_cdf((b1 + b2*x2 - eps_loc) / eps_scale)"),
                          bindings),
           binary_choice_prob(m, std::vector{1.0, 1.0}), 1e-12,
           "DSL choice probability matches the builtin");
  c.within(dsl::eval_expr(*dsl::parse_expr("(b2*(x2p - x2)) / (b1 + b2*x2)"), bindings),
           binary_pct_welfare(m, std::vector{1.0, 1.0}, std::vector{1.0, 2.0}), 1e-12,
           "DSL percentage welfare matches the builtin");

  try {
    dsl::parse_expr("1 + * 2");
    c.require(false, "syntax error raised");
  } catch (const SyntaxError& err) {
    c.require(err.offset() == 4, "syntax error carries the byte offset");
  }
}

void criterion_cli(Checker& c) {
  if (!std::getenv("NORM_AUDIT_BIN")) {
    c.require(false, "NORM_AUDIT_BIN not set; cannot drive the CLI");
    return;
  }

  const std::string args = "audit --model binary --counterfactual all --samples 400 --seed 11";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  c.require(a.exit_code == 0 && b.exit_code == 0, "determinism runs exit 0");
  c.require(!a.output.empty() &&
                drop_timestamp_line(a.output) == drop_timestamp_line(b.output),
            "byte-identical report bodies, timestamp aside");

  for (const auto& id : catalog_ids()) {
    const auto& e = catalog_entry(id);
    for (const auto& cf : e.counterfactuals) {
      const auto result = run_cli("audit --model " + id + " --counterfactual " + cf.q.name +
                                  " --samples 300 --seed 3");
      c.require(result.exit_code == 0, id + "/" + cf.q.name + " exits 0");
    }
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Checker&)>>> criteria = {
      {"1 temperature golden numbers", criterion_temperature},
      {"2 binary choice audit matrix", criterion_binary_matrix},
      {"3 logit demand surplus", criterion_logit},
      {"4 network normalization and preservation", criterion_network},
      {"5 group axioms", criterion_group_axioms},
      {"6 chart geometry", criterion_chart_geometry},
      {"7 singularity probe", criterion_singularity},
      {"8 WLOG audit equivalence", criterion_wlog},
      {"9 expression DSL", criterion_dsl},
      {"10 CLI determinism and manifest", criterion_cli},
  };

  int failed = 0;
  for (const auto& [title, fn] : criteria) {
    Checker checker;
    try {
      fn(checker);
    } catch (const std::exception& e) {
      checker.failures.push_back(std::string("exception: ") + e.what());
    }
    if (checker.failures.empty()) {
      std::cout << "PASS criterion " << title << '\n';
    } else {
      ++failed;
      std::cout << "FAIL criterion " << title << '\n';
      for (const auto& f : checker.failures) std::cout << "       - " << f << '\n';
    }
  }
  return failed == 0 ? 0 : 1;
}
