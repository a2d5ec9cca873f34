#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "normaudit/param_point.hpp"

namespace normaudit {

// Scale parameters live on an open half-line; bound them away from zero so
// inverses stay representable.
inline constexpr double kMinScale = 1e-12;

enum class ParamKind { location, scale };

// One transformation within a family.
struct GroupElement {
  std::string family_id;
  std::vector<double> params;
};

// A parameterized group action on ParamPoints: the action rule itself plus the
// composition/inverse laws on the parameter tuple. `kinds` drives both the
// constraint (scale components >= kMinScale, everything finite) and the default
// sampling law. `probe_point` is a canonical point of the family's domain used
// by the axiom checker to exercise the action.
struct TransformFamily {
  std::string family_id;
  std::vector<ParamKind> kinds;
  std::function<ParamPoint(std::span<const double>, const ParamPoint&)> action;
  std::function<std::vector<double>(std::span<const double>, std::span<const double>)> compose_law;
  std::function<std::vector<double>(std::span<const double>)> inverse_law;
  std::vector<double> identity;
  std::set<std::string> preserves;
  ParamPoint probe_point;

  int param_dim() const { return static_cast<int>(kinds.size()); }
  bool constraint_ok(std::span<const double> params) const;
  GroupElement identity_element() const { return {family_id, identity}; }
};

// theta transformed by g. Throws ConstraintViolatedError when g lies outside
// the family's domain or belongs to another family, UnknownNameError when the
// action reads a missing coordinate, NonFiniteError when the action produced a
// NaN / infinity.
ParamPoint apply(const TransformFamily& family, const GroupElement& g, const ParamPoint& theta);

// Composition: apply g2 first, then g1 (function-composition order).
GroupElement compose(const TransformFamily& family, const GroupElement& g1, const GroupElement& g2);

GroupElement invert(const TransformFamily& family, const GroupElement& g);

// n elements drawn from the default law: location components uniform on
// [-3, 3], log of scale components uniform on [-2, 2]. Deterministic per seed.
std::vector<GroupElement> sample_group(const TransformFamily& family, std::uint64_t seed, int n);

struct AxiomReport {
  double identity_residual = 0.0;       // apply(id, theta) vs theta
  double associativity_residual = 0.0;  // (g1 g2) g3 vs g1 (g2 g3), on params
  double inverse_residual = 0.0;        // g * g^-1 vs identity, on params
  double action_residual = 0.0;         // apply(g1 g2, theta) vs apply(g1, apply(g2, theta))
  int n_trials = 0;
  double tol = 0.0;
  bool pass = false;
};

// Residuals over n sampled triples, acting on randomized orbit translates of
// the family's probe point. Failures are reported, never thrown.
AxiomReport check_group_axioms(const TransformFamily& family, std::uint64_t seed, int n, double tol);

enum class PreservationStatus { consistent, violated };

struct PreservationVerdict {
  PreservationStatus status = PreservationStatus::consistent;
  double threshold = 0.0;    // 4 / sqrt(reps)
  double max_abs_corr = 0.0;
  std::vector<std::vector<double>> corr;  // unit-by-unit, estimated across reps
  int n_units = 0;
  int reps = 0;
};

// Monte Carlo check that a transform of unit-level unknowns preserves a
// maintained sampling assumption. Supported tags: "cross-sectional-sampling"
// (units named A_1..A_10) and "iid-errors" (units named U_1..U_10). Simulates
// `reps` independent iid standard-normal configurations, applies the transform,
// and flags any pairwise correlation of the transformed units beyond
// 4/sqrt(reps).
PreservationVerdict check_assumption_preservation(
    const std::function<ParamPoint(const ParamPoint&)>& transform,
    const std::string& tag, std::uint64_t seed, int reps);

}  // namespace normaudit
