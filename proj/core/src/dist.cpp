#include "normaudit/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "normaudit/math.hpp"

namespace normaudit {

std::string to_string(DistFamily f) {
  switch (f) {
    case DistFamily::normal: return "normal";
    case DistFamily::logistic: return "logistic";
    case DistFamily::uniform: return "uniform";
    case DistFamily::cauchy: return "cauchy";
    case DistFamily::quantile_grid: return "quantile_grid";
  }
  return "?";
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p outside (0,1)");
  // Acklam's rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step against the exact CDF brings the result to ~1e-15.
  const double e = normal_cdf(x) - p;
  const double u = e / normal_pdf(x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

DistHandle::DistHandle(DistFamily family, double loc, double scale,
                       std::vector<QuantileNode> grid)
    : family_(family), location_(loc), scale_(scale), grid_(std::move(grid)) {
  require_finite(location_, "dist location");
  require_finite(scale_, "dist scale");
  if (!(scale_ > 0.0)) throw ConstraintViolatedError("dist scale must be > 0");
  if (family_ == DistFamily::quantile_grid) {
    if (grid_.empty()) throw ConstraintViolatedError("quantile grid is empty");
    double prev_p = 0.0;
    double prev_v = -std::numeric_limits<double>::infinity();
    for (const auto& node : grid_) {
      require_finite(node.p, "grid probability");
      require_finite(node.value, "grid value");
      if (!(node.p > prev_p && node.p < 1.0))
        throw ConstraintViolatedError("grid probabilities must be strictly increasing in (0,1)");
      if (node.value < prev_v)
        throw ConstraintViolatedError("grid values must be nondecreasing");
      prev_p = node.p;
      prev_v = node.value;
    }
  }
}

DistHandle DistHandle::normal(double loc, double scale) {
  return DistHandle(DistFamily::normal, loc, scale, {});
}
DistHandle DistHandle::logistic(double loc, double scale) {
  return DistHandle(DistFamily::logistic, loc, scale, {});
}
DistHandle DistHandle::uniform(double loc, double scale) {
  return DistHandle(DistFamily::uniform, loc, scale, {});
}
DistHandle DistHandle::cauchy(double loc, double scale) {
  return DistHandle(DistFamily::cauchy, loc, scale, {});
}
DistHandle DistHandle::quantile_grid(std::vector<QuantileNode> nodes) {
  return DistHandle(DistFamily::quantile_grid, 0.0, 1.0, std::move(nodes));
}

double DistHandle::cdf(double x) const {
  switch (family_) {
    case DistFamily::normal: return normal_cdf((x - location_) / scale_);
    case DistFamily::logistic: return logistic_cdf((x - location_) / scale_);
    case DistFamily::uniform: {
      const double z = (x - location_) / scale_;
      return std::clamp(z, 0.0, 1.0);
    }
    case DistFamily::cauchy: return cauchy_cdf((x - location_) / scale_);
    case DistFamily::quantile_grid: {
      // Piecewise-linear interpolant of the node inverse, clamped to the
      // grid's probability range outside the covered values.
      if (x <= grid_.front().value) return grid_.front().p;
      if (x >= grid_.back().value) return grid_.back().p;
      auto it = std::lower_bound(grid_.begin(), grid_.end(), x,
                                 [](const QuantileNode& n, double v) { return n.value < v; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      if (hi.value == lo.value) return lo.p;
      const double t = (x - lo.value) / (hi.value - lo.value);
      return lo.p + t * (hi.p - lo.p);
    }
  }
  throw Error("unreachable dist family");
}

double DistHandle::pdf(double x) const {
  switch (family_) {
    case DistFamily::normal: return normal_pdf((x - location_) / scale_) / scale_;
    case DistFamily::logistic: return logistic_pdf((x - location_) / scale_) / scale_;
    case DistFamily::uniform: {
      const double z = (x - location_) / scale_;
      return (z >= 0.0 && z <= 1.0) ? 1.0 / scale_ : 0.0;
    }
    case DistFamily::cauchy: return cauchy_pdf((x - location_) / scale_) / scale_;
    case DistFamily::quantile_grid:
      throw NoDensityError("quantile_grid carries no density");
  }
  throw Error("unreachable dist family");
}

double DistHandle::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile level outside (0,1)");
  switch (family_) {
    case DistFamily::normal: return location_ + scale_ * normal_quantile(p);
    case DistFamily::logistic: return location_ + scale_ * logistic_quantile(p);
    case DistFamily::uniform: return location_ + scale_ * p;
    case DistFamily::cauchy: return location_ + scale_ * cauchy_quantile(p);
    case DistFamily::quantile_grid: {
      if (p <= grid_.front().p) return grid_.front().value;
      if (p >= grid_.back().p) return grid_.back().value;
      auto it = std::lower_bound(grid_.begin(), grid_.end(), p,
                                 [](const QuantileNode& n, double q) { return n.p < q; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double t = (p - lo.p) / (hi.p - lo.p);
      return lo.value + t * (hi.value - lo.value);
    }
  }
  throw Error("unreachable dist family");
}

DistHandle DistHandle::affine(double add, double mul) const {
  require_finite(add, "affine shift");
  require_finite(mul, "affine scale");
  if (!(mul > 0.0)) throw ConstraintViolatedError("affine scale must be > 0");
  if (family_ == DistFamily::quantile_grid) {
    std::vector<QuantileNode> nodes = grid_;
    for (auto& n : nodes) n.value = add + mul * n.value;
    return quantile_grid(std::move(nodes));
  }
  return DistHandle(family_, add + mul * location_, mul * scale_, {});
}

double max_abs_param_diff(const DistHandle& a, const DistHandle& b) {
  if (a.family() != b.family()) return std::numeric_limits<double>::infinity();
  if (a.family() == DistFamily::quantile_grid) {
    if (a.grid().size() != b.grid().size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.grid().size(); ++i) {
      worst = std::max(worst, std::abs(a.grid()[i].p - b.grid()[i].p));
      worst = std::max(worst, std::abs(a.grid()[i].value - b.grid()[i].value));
    }
    return worst;
  }
  return std::max(std::abs(a.location() - b.location()),
                  std::abs(a.scale() - b.scale()));
}

}  // namespace normaudit
