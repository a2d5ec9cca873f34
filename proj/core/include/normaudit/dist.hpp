#pragma once

#include <string>
#include <vector>

#include "normaudit/errors.hpp"

namespace normaudit {

enum class DistFamily { normal, logistic, uniform, cauchy, quantile_grid };

std::string to_string(DistFamily f);

struct QuantileNode {
  double p;      // probability level, strictly increasing in (0, 1)
  double value;  // nondecreasing
};

// One unobservable law. Parametric members are location-scale: X ~ loc + scale * Z
// with Z the standard member. `uniform` is parameterized by its lower endpoint
// (location) and width (scale), i.e. support [loc, loc + scale]. A quantile_grid
// carries the law as interpolated (p, value) nodes; its location/scale stay (0, 1)
// and affine maps act on the node values directly.
class DistHandle {
public:
  static DistHandle normal(double loc, double scale);
  static DistHandle logistic(double loc, double scale);
  static DistHandle uniform(double loc, double scale);
  static DistHandle cauchy(double loc, double scale);
  static DistHandle quantile_grid(std::vector<QuantileNode> nodes);

  DistFamily family() const { return family_; }
  double location() const { return location_; }
  double scale() const { return scale_; }
  const std::vector<QuantileNode>& grid() const { return grid_; }

  double cdf(double x) const;
  bool has_density() const { return family_ != DistFamily::quantile_grid; }
  double pdf(double x) const;  // throws NoDensityError for quantile_grid
  double quantile(double p) const;

  // Law of add + mul * X. Requires mul > 0.
  DistHandle affine(double add, double mul) const;

  bool operator==(const DistHandle&) const = default;

private:
  DistHandle(DistFamily family, double loc, double scale, std::vector<QuantileNode> grid);

  DistFamily family_;
  double location_;
  double scale_;
  std::vector<QuantileNode> grid_;
};

inline bool operator==(const QuantileNode& a, const QuantileNode& b) {
  return a.p == b.p && a.value == b.value;
}

// Largest absolute difference between the defining parameters of two handles;
// infinity when the families differ.
double max_abs_param_diff(const DistHandle& a, const DistHandle& b);

}  // namespace normaudit
