#include "normaudit/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace normaudit {

namespace {

double eval_or_rethrow(const Counterfactual& q, const ParamPoint& point, const Context& ctx,
                       const GroupElement& element, int sample_index) {
  double v;
  try {
    v = q.eval(point, ctx);
  } catch (const Error& e) {
    throw EvalFailedError("counterfactual '" + q.name + "' undefined at sample " +
                              std::to_string(sample_index) + ": " + e.what(),
                          element);
  }
  if (!std::isfinite(v)) {
    throw EvalFailedError("counterfactual '" + q.name + "' non-finite at sample " +
                              std::to_string(sample_index),
                          element);
  }
  return v;
}

void require_schema(const Counterfactual& q, const Context& ctx) {
  for (const auto& name : q.context_schema) {
    if (!ctx.contains(name))
      throw UnknownNameError("context is missing '" + name + "' required by counterfactual '" +
                             q.name + "'");
  }
}

}  // namespace

double Context::scalar(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw UnknownNameError("no context value named '" + name + "'");
  if (const double* v = std::get_if<double>(&it->second)) return *v;
  throw UnknownNameError("context value '" + name + "' is a vector, not a scalar");
}

const std::vector<double>& Context::vec(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw UnknownNameError("no context value named '" + name + "'");
  if (const auto* v = std::get_if<std::vector<double>>(&it->second)) return *v;
  throw UnknownNameError("context value '" + name + "' is a scalar, not a vector");
}

std::string to_string(AuditStatus s) {
  return s == AuditStatus::invariant ? "invariant" : "non_invariant";
}

AuditVerdict invariance_audit(const Counterfactual& q, const TransformFamily& family,
                              const ParamPoint& theta, const Context& ctx,
                              int n, double tol, std::uint64_t seed) {
  require_schema(q, ctx);
  if (n < 1) throw ConstraintViolatedError("invariance_audit requires n >= 1");

  AuditVerdict verdict;
  verdict.n_sampled = n;
  verdict.tol = tol;
  verdict.seed = seed;

  const double base = eval_or_rethrow(q, theta, ctx, family.identity_element(), -1);
  const double denom = 1.0 + std::abs(base);

  const auto elements = sample_group(family, seed, n);
  Witness worst;
  for (int i = 0; i < n; ++i) {
    const ParamPoint moved = apply(family, elements[i], theta);
    const double v = eval_or_rethrow(q, moved, ctx, elements[i], i);
    const double dev = std::abs(v - base) / denom;
    if (dev > verdict.max_rel_deviation) {
      verdict.max_rel_deviation = dev;
      worst = Witness{elements[i], base, v, dev};
    }
  }

  if (verdict.max_rel_deviation > tol) {
    verdict.status = AuditStatus::non_invariant;
    verdict.witness = worst;
    verdict.low_confidence = verdict.max_rel_deviation <= 100.0 * tol;
  }
  return verdict;
}

NormCheckReport normalization_check(const Normalization& nm, const TransformFamily& family,
                                    const std::vector<ParamPoint>& thetas, int n, double tol,
                                    std::uint64_t seed,
                                    const std::function<double(const ParamPoint&)>& orbit_invariant) {
  if (thetas.empty()) throw ConstraintViolatedError("normalization_check requires points");

  NormCheckReport report;
  const auto elements = sample_group(family, seed, n);

  for (const auto& theta : thetas) {
    const ParamPoint fixed = nm.section(theta);
    const double scale = 1.0 + fixed.max_abs_coord();

    for (const auto& g : elements) {
      const double d = param_distance(nm.section(apply(family, g, theta)), fixed) / scale;
      report.collapse.max_residual = std::max(report.collapse.max_residual, d);
    }
    const double d_idem = param_distance(nm.section(fixed), fixed) / scale;
    report.idempotence.max_residual = std::max(report.idempotence.max_residual, d_idem);
  }
  report.collapse.pass = report.collapse.max_residual <= tol;
  report.idempotence.pass = report.idempotence.max_residual <= tol;

  report.separation.min_gap = std::numeric_limits<double>::infinity();
  report.separation.pass = true;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    for (std::size_t j = i + 1; j < thetas.size(); ++j) {
      if (orbit_invariant) {
        const double gap = std::abs(orbit_invariant(thetas[i]) - orbit_invariant(thetas[j]));
        if (gap <= 100.0 * tol) continue;  // cannot certify distinct orbits
      }
      const double d = param_distance(nm.section(thetas[i]), nm.section(thetas[j]));
      report.separation.min_gap = std::min(report.separation.min_gap, d);
      ++report.separation.pairs_checked;
      if (!(d > tol)) report.separation.pass = false;
    }
  }
  if (report.separation.pairs_checked == 0) report.separation.min_gap = 0.0;

  report.pass = report.collapse.pass && report.idempotence.pass && report.separation.pass;
  return report;
}

std::optional<WitnessPair> identification_witness(const Counterfactual& q,
                                                  const TransformFamily& family,
                                                  const ParamPoint& theta, const Context& ctx,
                                                  int n, double tol, std::uint64_t seed) {
  const AuditVerdict verdict = invariance_audit(q, family, theta, ctx, n, tol, seed);
  if (verdict.status == AuditStatus::invariant) return std::nullopt;

  WitnessPair pair;
  pair.theta = theta;
  pair.element = verdict.witness->element;
  pair.transformed = apply(family, pair.element, theta);
  pair.q_at_theta = verdict.witness->value_at_theta;
  pair.q_at_transformed = verdict.witness->value_at_transformed;
  pair.statement = "any valid identified set must contain both " +
                   std::to_string(pair.q_at_theta) + " and " +
                   std::to_string(pair.q_at_transformed);
  return pair;
}

WlogReport wlog_equivalence_audit(const Counterfactual& q, const TransformFamily& family,
                                  const Normalization& nm, const ParamPoint& theta,
                                  const Context& ctx, int n, double tol, std::uint64_t seed) {
  WlogReport report;
  const ParamPoint rep = nm.section(theta);
  report.from_theta = invariance_audit(q, family, theta, ctx, n, tol, seed);
  report.from_section = invariance_audit(q, family, rep, ctx, n, tol, seed);
  report.verdicts_agree = report.from_theta.status == report.from_section.status;
  report.value_at_theta = q.eval(theta, ctx);
  report.value_at_section = q.eval(rep, ctx);

  if (report.from_theta.status == AuditStatus::invariant &&
      report.from_section.status == AuditStatus::invariant) {
    const double gap = std::abs(report.value_at_theta - report.value_at_section) /
                       (1.0 + std::abs(report.value_at_theta));
    report.values_agree = gap <= tol;
    report.pass = report.verdicts_agree && report.values_agree;
  } else {
    report.values_agree = false;
    report.pass = report.verdicts_agree;
  }
  return report;
}

}  // namespace normaudit
