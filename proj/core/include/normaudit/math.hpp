#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

#include "normaudit/errors.hpp"

namespace normaudit {

// Max-shifted logsumexp: log(sum_i exp(x_i)) without overflow.
inline double logsumexp(std::span<const double> xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

inline double logistic_cdf(double z) {
  // Evaluate through exp(-|z|) so neither tail overflows.
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline double logistic_pdf(double z) {
  const double p = logistic_cdf(z);
  return p * (1.0 - p);
}

// Quantile of the standard logistic, p in (0, 1).
inline double logistic_quantile(double p) {
  return std::log(p / (1.0 - p));
}

inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

// Acklam-style rational approximation refined by one Halley step against
// erfc; accurate to ~1e-15 over (0, 1).
double normal_quantile(double p);

inline double cauchy_cdf(double z) {
  return 0.5 + std::atan(z) / std::numbers::pi;
}

inline double cauchy_pdf(double z) {
  return 1.0 / (std::numbers::pi * (1.0 + z * z));
}

inline double cauchy_quantile(double p) {
  return std::tan(std::numbers::pi * (p - 0.5));
}

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw NonFiniteError(std::string(what) + " is not finite");
}

}  // namespace normaudit
