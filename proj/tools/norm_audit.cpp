// norm_audit: command-line runner for the invariance audits, the chart-geometry
// experiments and the boundary-singularity probes. Emits JSON or CSV reports.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "normaudit/audit.hpp"
#include "normaudit/catalog.hpp"
#include "normaudit/chart_geometry.hpp"
#include "normaudit/dsl.hpp"
#include "normaudit/singularity.hpp"
#include "normaudit/version.hpp"

using nlohmann::json;
using namespace normaudit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;  // a check ran but disagreed with its expectation
constexpr int kExitUsage = 2;       // bad flags, unknown model, unreadable spec

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("NORM_AUDIT_SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

void emit(const std::string& body, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << body;
    if (body.empty() || body.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + out_path + "'");
  out << body;
  if (body.empty() || body.back() != '\n') out << '\n';
}

json envelope(const json& config, json checks, int exit_status) {
  // canonical report order: checks sorted by name
  std::sort(checks.begin(), checks.end(),
            [](const json& a, const json& b) { return a.at("name") < b.at("name"); });
  return json{{"schema_version", 1},
              {"tool", "norm_audit"},
              {"version", kVersion},
              {"timestamp", iso_timestamp()},
              {"config", config},
              {"checks", std::move(checks)},
              {"exit_status", exit_status}};
}

json witness_json(const Witness& w) {
  return json{{"element", w.element.params},
              {"value_at_theta", w.value_at_theta},
              {"value_at_transformed", w.value_at_transformed},
              {"rel_deviation", w.rel_deviation}};
}

json verdict_json(const AuditVerdict& v) {
  json out{{"status", to_string(v.status)},
           {"max_rel_deviation", v.max_rel_deviation},
           {"n_sampled", v.n_sampled},
           {"tol", v.tol},
           {"seed", v.seed},
           {"low_confidence", v.low_confidence}};
  if (v.witness) out["witness"] = witness_json(*v.witness);
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Flat one-row-per-check rendering of an audit report.
std::string checks_csv(const json& checks) {
  std::string csv = "name,kind,ok,status,expected,max_rel_deviation\n";
  for (const auto& check : checks) {
    csv += check.at("name").get<std::string>();
    csv += ',';
    csv += check.at("kind").get<std::string>();
    csv += ',';
    csv += check.at("ok").get<bool>() ? "true" : "false";
    csv += ',';
    csv += check.contains("status") ? check.at("status").get<std::string>() : "";
    csv += ',';
    csv += check.contains("expected") ? check.at("expected").get<std::string>() : "";
    csv += ',';
    csv += check.contains("max_rel_deviation")
               ? format_double(check.at("max_rel_deviation").get<double>())
               : "";
    csv += '\n';
  }
  return csv;
}

// ----- audit subcommand -------------------------------------------------------

struct AuditOptions {
  std::string model;
  std::string spec_path;
  std::string counterfactual = "all";
  int samples = 1000;
  double tol = 1e-9;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
};

int run_audit_catalog(const AuditOptions& opt, const json& config) {
  const CatalogEntry& entry = catalog_entry(opt.model);
  const std::uint64_t seed = resolve_seed(opt.seed);

  std::vector<const CatalogCounterfactual*> selected;
  if (opt.counterfactual == "all") {
    for (const auto& cf : entry.counterfactuals) selected.push_back(&cf);
  } else {
    selected.push_back(&entry.find(opt.counterfactual));
  }

  json checks = json::array();
  bool all_ok = true;
  for (const auto* cf : selected) {
    const AuditVerdict verdict = invariance_audit(cf->q, entry.family, entry.base_point,
                                                  entry.context, opt.samples, opt.tol, seed);
    const std::string expected = cf->normalization_free ? "invariant" : "non_invariant";
    const bool ok = to_string(verdict.status) == expected;
    all_ok = all_ok && ok;
    json check{{"name", opt.model + "/" + cf->q.name + "/invariance"},
               {"kind", "invariance_audit"},
               {"expected", expected},
               {"ok", ok}};
    check.update(verdict_json(verdict));
    checks.push_back(std::move(check));

    const WlogReport wlog = wlog_equivalence_audit(cf->q, entry.family, entry.normalization,
                                                   entry.base_point, entry.context, opt.samples,
                                                   opt.tol, seed);
    all_ok = all_ok && wlog.pass;
    checks.push_back(json{{"name", opt.model + "/" + cf->q.name + "/wlog"},
                          {"kind", "wlog_equivalence_audit"},
                          {"ok", wlog.pass},
                          {"verdicts_agree", wlog.verdicts_agree},
                          {"values_agree", wlog.values_agree},
                          {"value_at_theta", wlog.value_at_theta},
                          {"value_at_section", wlog.value_at_section},
                          {"status_from_theta", to_string(wlog.from_theta.status)},
                          {"status_from_section", to_string(wlog.from_section.status)}});
  }

  const NormCheckReport nm = normalization_check(entry.normalization, entry.family,
                                                 entry.audit_points, opt.samples, opt.tol, seed,
                                                 entry.orbit_invariant);
  all_ok = all_ok && nm.pass;
  // points whose distribution families differ sit at infinite section distance
  const json min_gap = std::isfinite(nm.separation.min_gap) ? json(nm.separation.min_gap)
                                                            : json("infinite");
  checks.push_back(json{{"name", opt.model + "/normalization/" + entry.normalization.name},
                        {"kind", "normalization_check"},
                        {"ok", nm.pass},
                        {"collapse_residual", nm.collapse.max_residual},
                        {"idempotence_residual", nm.idempotence.max_residual},
                        {"separation_min_gap", min_gap},
                        {"separation_pairs", nm.separation.pairs_checked}});

  const int status = all_ok ? kExitOk : kExitUnexpected;
  if (opt.format == "csv") {
    json sorted = std::move(checks);
    std::sort(sorted.begin(), sorted.end(),
              [](const json& a, const json& b) { return a.at("name") < b.at("name"); });
    emit(checks_csv(sorted), opt.out);
  } else {
    emit(envelope(config, std::move(checks), status).dump(2), opt.out);
  }
  return status;
}

int run_audit_spec(const AuditOptions& opt, const json& config) {
  const dsl::ModelSpec spec = dsl::load_model_spec(opt.spec_path);
  const std::uint64_t seed = resolve_seed(opt.seed);

  json checks = json::array();
  for (const Counterfactual& q : spec.make_counterfactuals()) {
    if (opt.counterfactual != "all" && q.name != opt.counterfactual) continue;
    const AuditVerdict verdict = invariance_audit(q, spec.family, spec.point,
                                                  spec.default_context, opt.samples, opt.tol,
                                                  seed);
    json check{{"name", spec.name + "/" + q.name + "/invariance"},
               {"kind", "invariance_audit"},
               {"ok", true}};  // user files carry no expected classification
    check.update(verdict_json(verdict));
    checks.push_back(std::move(check));
  }
  if (opt.counterfactual != "all" && checks.empty())
    throw UnknownNameError("spec declares no counterfactual named '" + opt.counterfactual + "'");

  if (opt.format == "csv") {
    json sorted = std::move(checks);
    std::sort(sorted.begin(), sorted.end(),
              [](const json& a, const json& b) { return a.at("name") < b.at("name"); });
    emit(checks_csv(sorted), opt.out);
  } else {
    emit(envelope(config, std::move(checks), kExitOk).dump(2), opt.out);
  }
  return kExitOk;
}

// ----- geometry subcommand ------------------------------------------------------

struct GeometryOptions {
  std::string scenario;
  std::vector<double> m_grid = {1.0, 10.0, 1000.0, 1000000.0};
  int dim = 5;
  int samples = 100000;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;  // default depends on the scenario
};

int run_geometry(const GeometryOptions& opt, const json& config) {
  if (opt.scenario == "strong_equiv") {
    const auto report = strong_equivalence_check(opt.samples, opt.dim, resolve_seed(opt.seed));
    json checks = json::array();
    checks.push_back(json{{"name", "geometry/strong_equiv"},
                          {"kind", "strong_equivalence_check"},
                          {"ok", report.pass},
                          {"n_pairs", report.n_pairs},
                          {"dim", report.dim},
                          {"violations", report.violations},
                          {"max_lower_violation", report.max_lower_violation},
                          {"max_upper_violation", report.max_upper_violation}});
    const int status = report.pass ? kExitOk : kExitUnexpected;
    emit(envelope(config, std::move(checks), status).dump(2), opt.out);
    return status;
  }

  const ConvergenceScenario scenario = opt.scenario == "within_sign"
                                           ? ConvergenceScenario::within_sign
                                           : ConvergenceScenario::cross_sign;
  const auto rows = convergence_experiment(scenario, opt.m_grid);

  if (opt.format == "json") {
    json checks = json::array();
    for (const auto& row : rows) {
      json r{{"name", "geometry/" + opt.scenario + "/M=" + format_double(row.M)},
             {"kind", "convergence_experiment"},
             {"ok", true},
             {"M", row.M},
             {"great_circle", row.great_circle}};
      if (row.chart) r["chart"] = *row.chart;
      else r["chart"] = "disconnected";
      checks.push_back(std::move(r));
    }
    emit(envelope(config, std::move(checks), kExitOk).dump(2), opt.out);
    return kExitOk;
  }

  std::string csv = "M,chart,great_circle\n";
  for (const auto& row : rows) {
    csv += format_double(row.M);
    csv += ',';
    csv += row.chart ? format_double(*row.chart) : "disconnected";
    csv += ',';
    csv += format_double(row.great_circle);
    csv += '\n';
  }
  emit(csv, opt.out);
  return kExitOk;
}

// ----- singularity subcommand -----------------------------------------------------

struct SingularityOptions {
  std::string demo;
  double p_zero = 0.5;
  double scale = 2.0;
  int draws = 100000;
  double candidate = 0.0;
  std::string extension = "log1p";
  double tol = 1e-3;           // tail tolerance of the limit test
  double divergence = 1e12;
  std::optional<std::uint64_t> seed;
  std::string out;
};

OutcomeAtomDist atom_dist(double p_zero, double value) {
  return OutcomeAtomDist{p_zero, DistHandle::quantile_grid({{0.01, value}, {0.99, value}})};
}

int run_singularity(const SingularityOptions& opt, const json& config) {
  const std::uint64_t seed = resolve_seed(opt.seed);
  json checks = json::array();
  int status = kExitOk;

  if (opt.demo == "fixed_point") {
    const auto sys = log_scaling_system();
    const auto report =
        fixed_point_extension_test(sys, opt.candidate, {"scaling", {opt.scale}});
    checks.push_back(json{{"name", "singularity/fixed_point"},
                          {"kind", "fixed_point_extension_test"},
                          {"ok", true},
                          {"scale", opt.scale},
                          {"candidate_value", report.candidate_value},
                          {"rho", report.rho_value},
                          {"inconsistency", report.inconsistency}});
  } else if (opt.demo == "ate_scale") {
    const auto report = ate_scale_sensitivity(atom_dist(opt.p_zero, 1.0), atom_dist(0.0, 2.0),
                                              opt.candidate, opt.scale, opt.draws, seed);
    const bool ok = std::abs(report.shift - report.expected_shift) <= 3.0 * report.shift_se ||
                    report.shift == report.expected_shift;
    if (!ok) status = kExitUnexpected;
    checks.push_back(json{{"name", "singularity/ate_scale"},
                          {"kind", "ate_scale_sensitivity"},
                          {"ok", ok},
                          {"p_zero", opt.p_zero},
                          {"scale", opt.scale},
                          {"draws", report.n_draws},
                          {"ate_at_1", report.ate_at_1},
                          {"ate_at_a", report.ate_at_a},
                          {"shift", report.shift},
                          {"shift_se", report.shift_se},
                          {"expected_shift", report.expected_shift}});
  } else if (opt.demo == "limit_test") {
    // log-ATE along two atom-shrinking sequences whose unit scales differ
    const auto qbar = [](const ParamPoint& p) {
      const double mass = p.coord("p_zero");
      return std::log(p.coord("y1")) -
             (mass * std::log(p.coord("atom_loc")) + (1.0 - mass) * std::log(p.coord("y_pos")));
    };
    const auto seq = [p_zero = opt.p_zero](double unit_scale) {
      return [p_zero, unit_scale](int k) {
        ParamPoint p;
        p.set_coord("p_zero", p_zero);
        p.set_coord("atom_loc", unit_scale * std::pow(2.0, -k));
        p.set_coord("y_pos", 1.0);
        p.set_coord("y1", 2.0);
        return p;
      };
    };
    const auto report =
        non_unique_limit_test(qbar, seq(1.0), seq(opt.scale), 40, opt.tol, opt.divergence);
    json check{{"name", "singularity/limit_test"},
               {"kind", "non_unique_limit_test"},
               {"ok", true},
               {"verdict", report.verdict == LimitVerdict::singular ? "singular"
                                                                    : "extendable_candidate"},
               {"tail1", report.tail1},
               {"tail2", report.tail2},
               {"tail_tol", report.tail_tol},
               {"divergence_threshold", report.divergence_threshold}};
    if (report.common_value) check["common_value"] = *report.common_value;
    checks.push_back(std::move(check));
  } else if (opt.demo == "trilemma") {
    ExtensionCandidate candidate;
    if (opt.extension == "log1p") candidate = ExtensionCandidate::log1p;
    else if (opt.extension == "arcsinh") candidate = ExtensionCandidate::arcsinh;
    else if (opt.extension == "log_patch" || opt.extension == "log-with-patch")
      candidate = ExtensionCandidate::log_patch;
    else throw UnknownNameError("unknown extension '" + opt.extension + "'");

    const auto report = trilemma_check(candidate, opt.candidate, 2000, seed);
    if (!report.at_least_one_fails) status = kExitUnexpected;  // would contradict the trilemma
    const auto leg = [](const TrilemmaReport::Check& c) {
      return json{{"pass", c.pass}, {"statistic", c.statistic}, {"detail", c.detail}};
    };
    checks.push_back(json{{"name", "singularity/trilemma/" + to_string(candidate)},
                          {"kind", "trilemma_check"},
                          {"ok", report.at_least_one_fails},
                          {"extension", to_string(candidate)},
                          {"fidelity", leg(report.fidelity)},
                          {"invariance", leg(report.invariance)},
                          {"regularity", leg(report.regularity)}});
  } else {
    throw UnknownNameError("unknown demo '" + opt.demo + "'");
  }

  emit(envelope(config, std::move(checks), status).dump(2), opt.out);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"normalization invariance auditor"};
  app.require_subcommand(1);

  AuditOptions audit_opt;
  CLI::App* audit = app.add_subcommand("audit", "run invariance / normalization audits");
  audit->add_option("--model", audit_opt.model, "catalog model id");
  audit->add_option("--spec", audit_opt.spec_path, "model spec file");
  audit->add_option("--counterfactual", audit_opt.counterfactual,
                    "counterfactual name or 'all'");
  audit->add_option("--samples", audit_opt.samples, "group elements per audit")
      ->check(CLI::PositiveNumber);
  audit->add_option("--tol", audit_opt.tol, "invariance tolerance")
      ->check(CLI::PositiveNumber);
  audit->add_option("--seed", audit_opt.seed, "RNG seed (fallback: NORM_AUDIT_SEED)");
  audit->add_option("--out", audit_opt.out, "output path (default stdout)");
  audit->add_option("--format", audit_opt.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));

  GeometryOptions geo_opt;
  CLI::App* geometry = app.add_subcommand("geometry", "chart vs sphere experiments");
  geometry->add_option("--scenario", geo_opt.scenario, "within_sign | cross_sign | strong_equiv")
      ->required();
  geometry->add_option("--M-grid", geo_opt.m_grid, "comma-separated M values")->delimiter(',');
  geometry->add_option("--dim", geo_opt.dim, "sphere dimension for strong_equiv");
  geometry->add_option("--samples", geo_opt.samples, "pairs for strong_equiv");
  geometry->add_option("--seed", geo_opt.seed, "RNG seed (fallback: NORM_AUDIT_SEED)");
  geometry->add_option("--out", geo_opt.out, "output path (default stdout)");
  geometry->add_option("--format", geo_opt.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  SingularityOptions sing_opt;
  CLI::App* singularity = app.add_subcommand("singularity", "boundary singularity probes");
  singularity
      ->add_option("--demo", sing_opt.demo, "fixed_point | ate_scale | limit_test | trilemma")
      ->required();
  singularity->add_option("--p-zero", sing_opt.p_zero, "P(Y0 = 0)");
  singularity->add_option("--scale", sing_opt.scale, "outcome rescaling factor a");
  singularity->add_option("--draws", sing_opt.draws, "Monte Carlo draws");
  singularity->add_option("--candidate", sing_opt.candidate, "extension value at the boundary");
  singularity->add_option("--extension", sing_opt.extension, "log1p | arcsinh | log_patch");
  singularity->add_option("--tol", sing_opt.tol, "limit-test tail tolerance");
  singularity->add_option("--div-threshold", sing_opt.divergence, "limit-test divergence cutoff");
  singularity->add_option("--seed", sing_opt.seed, "RNG seed (fallback: NORM_AUDIT_SEED)");
  singularity->add_option("--out", sing_opt.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (audit->parsed()) {
      if (audit_opt.model.empty() == audit_opt.spec_path.empty())
        throw UnknownNameError("pass exactly one of --model or --spec");
      json config{{"subcommand", "audit"},
                  {"model", audit_opt.model},
                  {"spec", audit_opt.spec_path},
                  {"counterfactual", audit_opt.counterfactual},
                  {"samples", audit_opt.samples},
                  {"tol", audit_opt.tol},
                  {"seed", resolve_seed(audit_opt.seed)},
                  {"format", audit_opt.format}};
      return audit_opt.model.empty() ? run_audit_spec(audit_opt, config)
                                     : run_audit_catalog(audit_opt, config);
    }
    if (geometry->parsed()) {
      if (geo_opt.format.empty())
        geo_opt.format = geo_opt.scenario == "strong_equiv" ? "json" : "csv";
      if (geo_opt.scenario != "within_sign" && geo_opt.scenario != "cross_sign" &&
          geo_opt.scenario != "strong_equiv")
        throw UnknownNameError("unknown scenario '" + geo_opt.scenario + "'");
      json config{{"subcommand", "geometry"},
                  {"scenario", geo_opt.scenario},
                  {"M_grid", geo_opt.m_grid},
                  {"dim", geo_opt.dim},
                  {"samples", geo_opt.samples},
                  {"seed", resolve_seed(geo_opt.seed)},
                  {"format", geo_opt.format}};
      return run_geometry(geo_opt, config);
    }
    json config{{"subcommand", "singularity"},
                {"demo", sing_opt.demo},
                {"p_zero", sing_opt.p_zero},
                {"scale", sing_opt.scale},
                {"draws", sing_opt.draws},
                {"candidate", sing_opt.candidate},
                {"extension", sing_opt.extension},
                {"tol", sing_opt.tol},
                {"div_threshold", sing_opt.divergence},
                {"seed", resolve_seed(sing_opt.seed)}};
    return run_singularity(sing_opt, config);
  } catch (const Error& e) {
    std::cerr << "norm_audit: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "norm_audit: unexpected error: " << e.what() << '\n';
    return kExitUsage;
  }
}
