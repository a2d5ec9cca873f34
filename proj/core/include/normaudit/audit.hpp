#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "normaudit/group.hpp"
#include "normaudit/param_point.hpp"

namespace normaudit {

// Evaluation inputs that are not unknowns: covariate vectors, policy pairs,
// fixed profiles. Never touched by group actions.
class Context {
public:
  using Value = std::variant<double, std::vector<double>>;

  void set(std::string name, double v) { values_[std::move(name)] = v; }
  void set(std::string name, std::vector<double> v) { values_[std::move(name)] = std::move(v); }

  bool contains(const std::string& name) const { return values_.count(name) > 0; }
  double scalar(const std::string& name) const;
  const std::vector<double>& vec(const std::string& name) const;
  const std::map<std::string, Value>& values() const { return values_; }

private:
  std::map<std::string, Value> values_;
};

// A known real-valued functional of the unknowns.
struct Counterfactual {
  std::string name;
  std::function<double(const ParamPoint&, const Context&)> eval;
  std::vector<std::string> context_schema;
};

// A section of the orbit partition: maps every point to its class representative.
struct Normalization {
  std::string name;
  std::function<ParamPoint(const ParamPoint&)> section;
  std::string family_id;
};

enum class AuditStatus { invariant, non_invariant };

std::string to_string(AuditStatus s);

struct Witness {
  GroupElement element;
  double value_at_theta = 0.0;
  double value_at_transformed = 0.0;
  double rel_deviation = 0.0;
};

struct AuditVerdict {
  AuditStatus status = AuditStatus::invariant;
  double max_rel_deviation = 0.0;
  std::optional<Witness> witness;  // worst offender when non_invariant
  int n_sampled = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  // Deviation fell in (tol, 100*tol]: structurally suspicious but within the
  // band where float noise and real variation are hard to separate.
  bool low_confidence = false;
};

// Thrown when a counterfactual is undefined at a transformed point: a domain /
// boundary singularity on the orbit, not a non-invariance verdict.
class EvalFailedError : public Error {
public:
  EvalFailedError(const std::string& what, GroupElement element)
      : Error(what), element_(std::move(element)) {}
  const GroupElement& element() const { return element_; }

private:
  GroupElement element_;
};

// Evaluates q at theta and at n sampled orbit translates; invariant iff every
// relative deviation |q(g theta) - q(theta)| / (1 + |q(theta)|) stays within
// tol. Deterministic per seed.
AuditVerdict invariance_audit(const Counterfactual& q, const TransformFamily& family,
                              const ParamPoint& theta, const Context& ctx,
                              int n, double tol, std::uint64_t seed);

struct NormCheckReport {
  struct Residual {
    double max_residual = 0.0;
    bool pass = false;
  };
  struct Separation {
    double min_gap = 0.0;  // over pairs in distinct orbits
    int pairs_checked = 0;
    bool pass = false;
  };
  Residual collapse;
  Residual idempotence;
  Separation separation;
  bool pass = false;
};

// Validates a normalization against its family: (i) within-class collapse,
// (ii) idempotence, (iii) across-class separation on caller-supplied points.
// Separation compares only pairs whose orbit_invariant values differ by more
// than 100*tol; with no invariant supplied, all pairs are assumed to lie in
// distinct classes.
NormCheckReport normalization_check(const Normalization& nm, const TransformFamily& family,
                                    const std::vector<ParamPoint>& thetas, int n, double tol,
                                    std::uint64_t seed,
                                    const std::function<double(const ParamPoint&)>& orbit_invariant = {});

struct WitnessPair {
  ParamPoint theta;
  ParamPoint transformed;
  GroupElement element;
  double q_at_theta = 0.0;
  double q_at_transformed = 0.0;
  std::string statement;
};

// Constructive non-identification evidence: a pair of modeling-equivalent
// points with distinct q values, or nothing when the audit is invariant.
std::optional<WitnessPair> identification_witness(const Counterfactual& q,
                                                  const TransformFamily& family,
                                                  const ParamPoint& theta, const Context& ctx,
                                                  int n, double tol, std::uint64_t seed);

struct WlogReport {
  AuditVerdict from_theta;
  AuditVerdict from_section;
  bool verdicts_agree = false;
  double value_at_theta = 0.0;    // q(theta)
  double value_at_section = 0.0;  // q(section(theta))
  bool values_agree = false;      // only meaningful when both invariant
  bool pass = false;
};

// Runs the audit from theta and from its normalized representative; a proper
// normalization changes neither the verdict nor (when invariant) the value.
WlogReport wlog_equivalence_audit(const Counterfactual& q, const TransformFamily& family,
                                  const Normalization& nm, const ParamPoint& theta,
                                  const Context& ctx, int n, double tol, std::uint64_t seed);

}  // namespace normaudit
