#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "normaudit/audit.hpp"
#include "normaudit/dist.hpp"
#include "normaudit/group.hpp"
#include "normaudit/rng.hpp"

namespace normaudit {

// A partial map m on Y \ {p} that is equivariant under a group acting on Y:
// m(g.y) = rho(g) + m(y). The group acts on single-coordinate points named "y";
// p is a common fixed point of the action.
struct EquivariantSystem {
  std::function<double(double)> m;
  TransformFamily group;
  std::function<double(const GroupElement&)> rho;
  double fixed_point = 0.0;
  std::function<double(Rng&)> sample_y;  // draws from Y \ {p}

  double act(const GroupElement& g, double y) const;
};

// The logs-with-zeros instance: m = log, scaling group y -> a*y on [0, inf),
// rho(a) = log a, fixed point 0. Samples y log-uniformly on [e^-3, e^3].
EquivariantSystem log_scaling_system();

// Multiplicative group y -> a*y, a > 0, acting on every coordinate.
TransformFamily scaling_family();

// max |m(g.y) - rho(g) - m(y)| over n sampled (g, y) pairs. Throws
// DomainViolationError if the sampler lands on the fixed point.
double equivariance_residual(const EquivariantSystem& sys, int n, std::uint64_t seed);

// Residual of the single pair (g, y); the deterministic probe behind the
// sampled version.
double equivariance_residual_at(const EquivariantSystem& sys, const GroupElement& g, double y);

struct FixedPointReport {
  double inconsistency = 0.0;  // |rho(g)|, forced by m(p) = m(g.p) = rho(g) + m(p)
  double rho_value = 0.0;
  double candidate_value = 0.0;  // echoed; the inconsistency does not depend on it
};

// The exact contradiction any finite m(p) runs into. Throws TrivialCocycleError
// when rho(g) = 0 (test inconclusive for this element).
FixedPointReport fixed_point_extension_test(const EquivariantSystem& sys, double candidate_value,
                                            const GroupElement& g);

// Outcome law with an atom at zero and a positive part.
struct OutcomeAtomDist {
  double p_zero = 0.0;  // mass at 0, in [0, 1]
  DistHandle positive_part = DistHandle::uniform(0.5, 1.0);  // law on (0, inf), inverse-CDF sampled
};

struct AteScaleReport {
  double ate_at_1 = 0.0;
  double ate_at_a = 0.0;
  double shift = 0.0;      // ate_at_a - ate_at_1
  double shift_se = 0.0;   // Monte Carlo standard error of the shift
  double expected_shift = 0.0;  // (P(Y0=0) - P(Y1=0)) * log a
  int n_draws = 0;
};

// Monte Carlo ATE of the patched log (m(0) := extension value) under outcome
// rescaling by a. The same uniform draw drives the atom indicator of both arms,
// so equal atom masses cancel exactly.
AteScaleReport ate_scale_sensitivity(const OutcomeAtomDist& y0, const OutcomeAtomDist& y1,
                                     double extension_value_at_zero, double scale_a,
                                     int n_draws, std::uint64_t seed);

enum class LimitVerdict { singular, extendable_candidate };

struct LimitTestReport {
  LimitVerdict verdict = LimitVerdict::extendable_candidate;
  double tail1 = 0.0;
  double tail2 = 0.0;
  std::optional<double> common_value;  // set when extendable
  double tail_tol = 0.0;
  double divergence_threshold = 0.0;
};

// Evaluates qbar along two sequences approaching the same boundary class.
// Singular when the tails disagree beyond tail_tol or either diverges beyond
// divergence_threshold; otherwise reports the common tail value. EvalFailed
// mid-sequence carries the failing index.
LimitTestReport non_unique_limit_test(const std::function<double(const ParamPoint&)>& qbar,
                                      const std::function<ParamPoint(int)>& seq1,
                                      const std::function<ParamPoint(int)>& seq2, int horizon,
                                      double tail_tol = 1e-3,
                                      double divergence_threshold = 1e12);

enum class ExtensionCandidate { log1p, arcsinh, log_patch };

std::string to_string(ExtensionCandidate c);

struct TrilemmaReport {
  struct Check {
    bool pass = false;
    double statistic = 0.0;  // residual / deviation backing the verdict
    std::string detail;
  };
  ExtensionCandidate candidate = ExtensionCandidate::log1p;
  Check fidelity;    // sup |m_ext - log| over sampled y > 0
  Check invariance;  // audit of the induced difference functional under scaling
  Check regularity;  // limit test at the boundary class
  bool at_least_one_fails = false;
};

// Runs the three checks no boundary extension can pass simultaneously:
// fidelity to log on (0, inf), scale invariance of the induced ATE-style
// difference, and finite continuity at the boundary.
TrilemmaReport trilemma_check(ExtensionCandidate candidate, double patch_value, int n_samples,
                              std::uint64_t seed);

}  // namespace normaudit
