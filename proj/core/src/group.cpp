#include "normaudit/group.hpp"

#include <algorithm>
#include <cmath>

#include "normaudit/errors.hpp"
#include "normaudit/rng.hpp"

namespace normaudit {

namespace {

void require_same_family(const TransformFamily& family, const GroupElement& g) {
  if (g.family_id != family.family_id)
    throw ConstraintViolatedError("element of family '" + g.family_id +
                                  "' used with family '" + family.family_id + "'");
}

void require_constraint(const TransformFamily& family, std::span<const double> params) {
  if (!family.constraint_ok(params))
    throw ConstraintViolatedError("parameters outside the domain of family '" +
                                  family.family_id + "'");
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

bool TransformFamily::constraint_ok(std::span<const double> params) const {
  if (params.size() != kinds.size()) return false;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!std::isfinite(params[i])) return false;
    if (kinds[i] == ParamKind::scale && params[i] < kMinScale) return false;
  }
  return true;
}

ParamPoint apply(const TransformFamily& family, const GroupElement& g, const ParamPoint& theta) {
  require_same_family(family, g);
  require_constraint(family, g.params);
  ParamPoint out = family.action(g.params, theta);
  for (const auto& [name, v] : out.coords()) {
    if (!std::isfinite(v))
      throw NonFiniteError("action produced a non-finite value for '" + name + "'");
  }
  return out;
}

GroupElement compose(const TransformFamily& family, const GroupElement& g1, const GroupElement& g2) {
  require_same_family(family, g1);
  require_same_family(family, g2);
  require_constraint(family, g1.params);
  require_constraint(family, g2.params);
  GroupElement out{family.family_id, family.compose_law(g1.params, g2.params)};
  require_constraint(family, out.params);
  return out;
}

GroupElement invert(const TransformFamily& family, const GroupElement& g) {
  require_same_family(family, g);
  require_constraint(family, g.params);
  GroupElement out{family.family_id, family.inverse_law(g.params)};
  require_constraint(family, out.params);
  return out;
}

std::vector<GroupElement> sample_group(const TransformFamily& family, std::uint64_t seed, int n) {
  if (n < 1) throw ConstraintViolatedError("sample_group requires n >= 1");
  Rng rng(seed);
  std::vector<GroupElement> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<double> params(family.kinds.size());
    for (std::size_t k = 0; k < family.kinds.size(); ++k) {
      params[k] = family.kinds[k] == ParamKind::location
                      ? rng.uniform(-3.0, 3.0)
                      : std::exp(rng.uniform(-2.0, 2.0));
    }
    out.push_back(GroupElement{family.family_id, std::move(params)});
  }
  return out;
}

AxiomReport check_group_axioms(const TransformFamily& family, std::uint64_t seed, int n, double tol) {
  AxiomReport report;
  report.n_trials = n;
  report.tol = tol;

  // Three elements per trial plus one to move the probe point around its orbit.
  const auto elems = sample_group(family, seed, 4 * n);
  const GroupElement id = family.identity_element();

  for (int t = 0; t < n; ++t) {
    const GroupElement& g1 = elems[4 * t];
    const GroupElement& g2 = elems[4 * t + 1];
    const GroupElement& g3 = elems[4 * t + 2];
    const ParamPoint theta = apply(family, elems[4 * t + 3], family.probe_point);

    const double coord_scale = 1.0 + theta.max_abs_coord();
    report.identity_residual = std::max(
        report.identity_residual, param_distance(apply(family, id, theta), theta) / coord_scale);

    const auto left = compose(family, compose(family, g1, g2), g3);
    const auto right = compose(family, g1, compose(family, g2, g3));
    double param_scale = 1.0;
    for (double p : left.params) param_scale = std::max(param_scale, 1.0 + std::abs(p));
    report.associativity_residual = std::max(
        report.associativity_residual, max_abs_diff(left.params, right.params) / param_scale);

    const auto round_trip = compose(family, g1, invert(family, g1));
    report.inverse_residual =
        std::max(report.inverse_residual, max_abs_diff(round_trip.params, id.params));

    const ParamPoint via_composite = apply(family, compose(family, g1, g2), theta);
    const ParamPoint via_nested = apply(family, g1, apply(family, g2, theta));
    const double nested_scale = 1.0 + std::max(via_composite.max_abs_coord(), via_nested.max_abs_coord());
    report.action_residual = std::max(
        report.action_residual, param_distance(via_composite, via_nested) / nested_scale);
  }

  report.pass = report.identity_residual <= tol && report.associativity_residual <= tol &&
                report.inverse_residual <= tol && report.action_residual <= tol;
  return report;
}

PreservationVerdict check_assumption_preservation(
    const std::function<ParamPoint(const ParamPoint&)>& transform,
    const std::string& tag, std::uint64_t seed, int reps) {
  std::string prefix;
  if (tag == "cross-sectional-sampling") {
    prefix = "A_";
  } else if (tag == "iid-errors") {
    prefix = "U_";
  } else {
    throw UnsupportedTagError("unsupported assumption tag '" + tag + "'");
  }
  if (reps < 100) throw ConstraintViolatedError("preservation check requires reps >= 100");

  constexpr int n_units = 10;
  Rng rng(seed);

  // Transformed unit values, reps x n_units.
  std::vector<std::vector<double>> draws(n_units, std::vector<double>(reps));
  for (int r = 0; r < reps; ++r) {
    ParamPoint point;
    for (int i = 0; i < n_units; ++i)
      point.set_coord(prefix + std::to_string(i + 1), rng.normal());
    const ParamPoint transformed = transform(point);
    for (int i = 0; i < n_units; ++i)
      draws[i][r] = transformed.coord(prefix + std::to_string(i + 1));
  }

  std::vector<double> mean(n_units, 0.0), var(n_units, 0.0);
  for (int i = 0; i < n_units; ++i) {
    for (double v : draws[i]) mean[i] += v;
    mean[i] /= reps;
    for (double v : draws[i]) var[i] += (v - mean[i]) * (v - mean[i]);
    var[i] /= reps;
  }

  PreservationVerdict verdict;
  verdict.threshold = 4.0 / std::sqrt(static_cast<double>(reps));
  verdict.n_units = n_units;
  verdict.reps = reps;
  verdict.corr.assign(n_units, std::vector<double>(n_units, 0.0));

  constexpr double degenerate_var = 1e-12;
  for (int i = 0; i < n_units; ++i) {
    verdict.corr[i][i] = 1.0;
    for (int j = i + 1; j < n_units; ++j) {
      double cov = 0.0;
      for (int r = 0; r < reps; ++r) cov += (draws[i][r] - mean[i]) * (draws[j][r] - mean[j]);
      cov /= reps;
      // Degenerate (constant) units carry no correlation information; skip them.
      const double c = (var[i] < degenerate_var || var[j] < degenerate_var)
                           ? 0.0
                           : cov / std::sqrt(var[i] * var[j]);
      verdict.corr[i][j] = verdict.corr[j][i] = c;
      verdict.max_abs_corr = std::max(verdict.max_abs_corr, std::abs(c));
    }
  }
  verdict.status = verdict.max_abs_corr > verdict.threshold ? PreservationStatus::violated
                                                            : PreservationStatus::consistent;
  return verdict;
}

}  // namespace normaudit
