#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "normaudit/errors.hpp"

namespace normaudit {

// Direction on the unit sphere S^{D-1}.
struct SpherePoint {
  std::vector<double> coords;  // ||coords|| = 1 within 1e-12
};

// Branchwise affine chart: sign of the first coefficient plus the remaining
// coordinates divided by its absolute value.
struct ChartPoint {
  int sign = 1;  // +1 or -1
  std::vector<double> rest;
};

// (sgn(beta_1), beta_2/|beta_1|, ..., beta_D/|beta_1|). Throws
// ChartSingularError on the excluded hyperplane beta_1 = 0.
ChartPoint coord_chart(std::span<const double> beta);

// beta / ||beta||. Throws ZeroVectorError at the origin.
SpherePoint sphere_chart(std::span<const double> beta);

// Angle between two unit vectors, in [0, pi]. Mathematically arccos(p.q);
// evaluated as 2*atan2(||p-q||, ||p+q||), which keeps full relative accuracy
// for nearly-parallel and nearly-antipodal pairs where the arccos form loses
// ~1e-8 absolute.
double great_circle(const SpherePoint& p, const SpherePoint& q);

// Euclidean distance on the shared branch; empty when the points live in
// different connected components of the chart.
std::optional<double> chart_distance(const ChartPoint& p, const ChartPoint& q);

struct StrongEquivReport {
  int n_pairs = 0;
  int dim = 0;
  // Worst observed slack beyond the bound (positive = violated), on each side
  // of ||p-q|| <= rho_GC <= (pi/2)||p-q||.
  double max_lower_violation = 0.0;
  double max_upper_violation = 0.0;
  int violations = 0;  // pairs breaching either bound by more than 1e-12
  bool pass = false;
};

// Samples n_pairs uniform unit-vector pairs (normalized Gaussians) and checks
// the chord / great-circle sandwich on each.
StrongEquivReport strong_equivalence_check(int n_pairs, int dim, std::uint64_t seed);

enum class ConvergenceScenario { cross_sign, within_sign };

struct ConvergenceRow {
  double M = 0.0;
  std::optional<double> chart;  // empty = Disconnected (cross-sign scenario)
  double great_circle = 0.0;
};

// The convergence-reversal table for D = 2. within_sign compares the rays
// (1, M) and (1, 2M): the chart separation is M while the angle between them
// shrinks to zero. cross_sign compares (1, M) and (-1, M): disconnected on the
// chart, angle -> 0 on the sphere. Angles are computed as atan2(|cross|, dot)
// on the raw ray vectors, which stays exact for the extreme M this experiment
// is about.
std::vector<ConvergenceRow> convergence_experiment(ConvergenceScenario scenario,
                                                   std::span<const double> m_grid);

}  // namespace normaudit
