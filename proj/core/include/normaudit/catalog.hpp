#pragma once

#include <span>
#include <string>
#include <vector>

#include "normaudit/audit.hpp"
#include "normaudit/dist.hpp"
#include "normaudit/group.hpp"
#include "normaudit/param_point.hpp"

namespace normaudit {

// ---------------------------------------------------------------------------
// Binary response: Y = 1{x'beta >= eps}
// ---------------------------------------------------------------------------

struct BinaryChoiceModel {
  std::vector<double> beta;  // beta[0] is the intercept; length >= 2
  DistHandle errdist = DistHandle::logistic(0, 1);  // law of eps

  // Point with coordinates b1..bd and distribution "eps".
  ParamPoint to_point() const;
  static BinaryChoiceModel from_point(const ParamPoint& p);
};

// Two-parameter family (a, b>0): b1 -> a + b*b1, every other coordinate
// scaled by b, every distribution mapped to the law of a + b*X.
TransformFamily binary_affine_family();

double binary_choice_prob(const BinaryChoiceModel& m, std::span<const double> x);

// f_eps(x'beta) * beta_j; j is the 1-based coefficient label, j >= 2.
double binary_marginal_effect(const BinaryChoiceModel& m, std::span<const double> x, int j);

// (x''beta - x'beta) / (x'beta); throws ZeroDenominatorError at the boundary.
double binary_pct_welfare(const BinaryChoiceModel& m, std::span<const double> x,
                          std::span<const double> x_prime);

// ---------------------------------------------------------------------------
// Logit demand: mean utilities delta_0..delta_J (outside option included),
// price coefficient alpha, scale mu, and the unknown surplus constant C.
// ---------------------------------------------------------------------------

struct LogitDemandModel {
  std::vector<double> delta;
  double alpha = 1.0;  // > 0
  double mu = 1.0;     // > 0
  double cs_const = 0.0;
};

// (a, b>0): every mean utility -> a + b*delta_j, alpha -> b*alpha, mu -> b*mu.
// C absorbs the location shift in money units: C -> C + a/(b*alpha). The
// surplus formula then shifts by 2a/(b*alpha) in total, exhibiting the
// level's normalization dependence mechanically. Acts on coordinates named
// delta_*, deltap_* (policy profile), alpha, mu, cs_const.
TransformFamily logit_affine_family();

// (mu/alpha) * logsumexp(delta/mu) + C, max-shifted.
double logit_cs_level(const LogitDemandModel& m);

// (mu/alpha) * [logsumexp(delta'/mu) - logsumexp(delta/mu)]; C cancels.
double logit_delta_cs(const LogitDemandModel& m, std::span<const double> delta_prime);

double logit_pct_cs(const LogitDemandModel& m, std::span<const double> delta_prime);

// ---------------------------------------------------------------------------
// Dyadic network formation: D_ij = 1{w(x_i,x_j) + A_i + A_j >= U_ij}
// ---------------------------------------------------------------------------

struct NetworkModel {
  std::vector<double> cov_grid;        // distinct covariate values
  std::vector<std::vector<double>> w;  // homophily values, symmetric over grid indices
  std::vector<int> unit_cov;           // grid index of each unit's covariate
  std::vector<double> fixed_effects;   // A_i
  DistHandle errdist = DistHandle::logistic(0, 1);  // F of U_ij
  double alpha_q = 0.25;               // quantile level in (0, 0.5)
  int ref_cov = 0;                     // reference grid index carrying w(xbar,xbar)=0

  // Point with coordinates w_i_j (grid indices, i<=j), A_1..A_n, dist "U".
  ParamPoint to_point() const;
  // Same structure as *this with coordinate values taken from p.
  NetworkModel with_point(const ParamPoint& p) const;

  double w_at(int gi, int gj) const;
};

// Three-parameter family (a, b, c>0): A_i -> c*A_i + a, w -> c*w + b,
// U -> law of c*U + 2a + b.
TransformFamily network_affine_family();

// Parametric-homophily variant: with w(x,x) pinned to zero by functional form
// the b-freedom disappears, leaving (a, c>0) with U -> c*U + 2a. A nonlinear
// coupling phi(A_i, A_j) in place of A_i + A_j would shrink the family further
// (affine maps no longer pass through phi) and is not modeled here.
TransformFamily network_parametric_family();

double network_link_prob(const NetworkModel& m, int i, int j);

// Units ordered by ascending fixed effect, ties kept in index order.
std::vector<int> fixed_effect_ranking(const NetworkModel& m);

// Packs a ranking into one real (sum of order[k] * (n+1)^k), so orderings can
// ride through the real-valued audit machinery.
double ranking_code(const std::vector<int>& order);

// The orbit representative: F^-1(alpha_q) = 0, F^-1(1-alpha_q) - F^-1(alpha_q) = 1,
// and w(xbar,xbar) = 0 at the reference covariate.
NetworkModel two_quantile_normalize(const NetworkModel& m, double alpha_q);

// ---------------------------------------------------------------------------
// Temperature: the unit conversion intuition.
// ---------------------------------------------------------------------------

enum class TempUnit { C, F, K };

// Percentage change of a temperature move expressed in the chosen unit
// (F = 1.8*C + 32, K = C + 273.15).
double temperature_pct_change(double t_from_celsius, double t_to_celsius, TempUnit unit);

// One-parameter zero-point family: every coordinate shifted by a. Absolute
// differences are orbit constants; percentages are not.
TransformFamily temperature_shift_family();

// ---------------------------------------------------------------------------
// Catalog registry
// ---------------------------------------------------------------------------

struct CatalogCounterfactual {
  Counterfactual q;
  bool normalization_free;  // expected audit classification
};

struct CatalogEntry {
  std::string id;
  TransformFamily family;
  ParamPoint base_point;
  std::vector<ParamPoint> audit_points;  // distinct orbits, base point first
  Context context;
  std::vector<CatalogCounterfactual> counterfactuals;
  Normalization normalization;
  std::function<double(const ParamPoint&)> orbit_invariant;

  const CatalogCounterfactual& find(const std::string& name) const;
};

std::vector<std::string> catalog_ids();
const CatalogEntry& catalog_entry(const std::string& id);  // throws UnknownNameError

}  // namespace normaudit
