#include "normaudit/chart_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "normaudit/rng.hpp"

namespace normaudit {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

SpherePoint random_direction(Rng& rng, int dim) {
  SpherePoint p;
  p.coords.resize(static_cast<std::size_t>(dim));
  double n = 0.0;
  do {
    for (auto& x : p.coords) x = rng.normal();
    n = norm2(p.coords);
  } while (n < 1e-8);
  for (auto& x : p.coords) x /= n;
  return p;
}

}  // namespace

ChartPoint coord_chart(std::span<const double> beta) {
  if (beta.size() < 2) throw ChartSingularError("chart needs at least two coordinates");
  const double b1 = beta[0];
  if (std::abs(b1) < 1e-300)
    throw ChartSingularError("beta_1 = 0 lies on the excluded hyperplane");
  ChartPoint p;
  p.sign = b1 > 0.0 ? 1 : -1;
  p.rest.reserve(beta.size() - 1);
  const double denom = std::abs(b1);
  for (std::size_t i = 1; i < beta.size(); ++i) p.rest.push_back(beta[i] / denom);
  return p;
}

SpherePoint sphere_chart(std::span<const double> beta) {
  const double n = norm2(beta);
  if (!(n > 0.0)) throw ZeroVectorError("cannot project the zero vector");
  SpherePoint p;
  p.coords.reserve(beta.size());
  for (double x : beta) p.coords.push_back(x / n);
  return p;
}

double great_circle(const SpherePoint& p, const SpherePoint& q) {
  if (p.coords.size() != q.coords.size())
    throw DimMismatchError("sphere points of different dimension");
  double diff = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    const double d = p.coords[i] - q.coords[i];
    const double s = p.coords[i] + q.coords[i];
    diff += d * d;
    sum += s * s;
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

std::optional<double> chart_distance(const ChartPoint& p, const ChartPoint& q) {
  if (p.rest.size() != q.rest.size())
    throw DimMismatchError("chart points of different dimension");
  if (p.sign != q.sign) return std::nullopt;
  double s = 0.0;
  for (std::size_t i = 0; i < p.rest.size(); ++i) {
    const double d = p.rest[i] - q.rest[i];
    s += d * d;
  }
  return std::sqrt(s);
}

StrongEquivReport strong_equivalence_check(int n_pairs, int dim, std::uint64_t seed) {
  if (dim < 2) throw ConstraintViolatedError("strong equivalence needs D >= 2");
  if (n_pairs < 1) throw ConstraintViolatedError("need at least one pair");

  StrongEquivReport report;
  report.n_pairs = n_pairs;
  report.dim = dim;

  constexpr double slack = 1e-12;
  Rng rng(seed);
  for (int k = 0; k < n_pairs; ++k) {
    const SpherePoint p = random_direction(rng, dim);
    const SpherePoint q = random_direction(rng, dim);
    double chord = 0.0;
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
      const double d = p.coords[i] - q.coords[i];
      chord += d * d;
    }
    chord = std::sqrt(chord);
    const double rho = great_circle(p, q);
    const double lower = chord - rho;                                // > 0 violates chord <= rho
    const double upper = rho - 0.5 * std::numbers::pi * chord;       // > 0 violates rho <= (pi/2) chord
    report.max_lower_violation = std::max(report.max_lower_violation, lower);
    report.max_upper_violation = std::max(report.max_upper_violation, upper);
    if (lower > slack || upper > slack) ++report.violations;
  }
  report.pass = report.violations == 0;
  return report;
}

std::vector<ConvergenceRow> convergence_experiment(ConvergenceScenario scenario,
                                                   std::span<const double> m_grid) {
  double prev = 0.0;
  for (double m : m_grid) {
    if (!(m > prev)) throw ConstraintViolatedError("M grid must be positive and increasing");
    prev = m;
  }

  std::vector<ConvergenceRow> rows;
  rows.reserve(m_grid.size());
  for (double m : m_grid) {
    ConvergenceRow row;
    row.M = m;
    if (scenario == ConvergenceScenario::within_sign) {
      // Rays (1, M) and (1, 2M): same branch, chart distance |2M - M| = M.
      row.chart = m;
      row.great_circle = std::atan2(m, 1.0 + 2.0 * m * m);  // |cross| = M, dot = 1 + 2M^2
    } else {
      // Rays (1, M) and (-1, M): opposite branches.
      row.chart = std::nullopt;
      row.great_circle = std::atan2(2.0 * m, m * m - 1.0);  // |cross| = 2M, dot = M^2 - 1
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace normaudit
