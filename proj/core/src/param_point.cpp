#include "normaudit/param_point.hpp"

#include <cmath>
#include <limits>

#include "normaudit/errors.hpp"
#include "normaudit/math.hpp"

namespace normaudit {

double ParamPoint::coord(std::string_view name) const {
  auto it = coords_.find(std::string(name));
  if (it == coords_.end())
    throw UnknownNameError("no coordinate named '" + std::string(name) + "'");
  return it->second;
}

const DistHandle& ParamPoint::dist(std::string_view name) const {
  auto it = dists_.find(std::string(name));
  if (it == dists_.end())
    throw UnknownNameError("no distribution named '" + std::string(name) + "'");
  return it->second;
}

void ParamPoint::set_coord(std::string name, double value) {
  require_finite(value, ("coordinate '" + name + "'").c_str());
  if (dists_.count(name) > 0)
    throw UnknownNameError("name '" + name + "' already used by a distribution");
  coords_[std::move(name)] = value;
}

void ParamPoint::set_dist(std::string name, DistHandle value) {
  if (coords_.count(name) > 0)
    throw UnknownNameError("name '" + name + "' already used by a coordinate");
  dists_.insert_or_assign(std::move(name), std::move(value));
}

std::vector<double> ParamPoint::indexed_coords(std::string_view prefix, std::size_t first) const {
  std::vector<double> out;
  for (std::size_t i = first;; ++i) {
    const std::string name = std::string(prefix) + std::to_string(i);
    auto it = coords_.find(name);
    if (it == coords_.end()) break;
    out.push_back(it->second);
  }
  return out;
}

double ParamPoint::max_abs_coord() const {
  double m = 0.0;
  for (const auto& [name, v] : coords_) m = std::max(m, std::abs(v));
  return m;
}

double param_distance(const ParamPoint& a, const ParamPoint& b) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (a.coords().size() != b.coords().size() || a.dists().size() != b.dists().size())
    return inf;
  double worst = 0.0;
  auto ita = a.coords().begin();
  auto itb = b.coords().begin();
  for (; ita != a.coords().end(); ++ita, ++itb) {
    if (ita->first != itb->first) return inf;
    worst = std::max(worst, std::abs(ita->second - itb->second));
  }
  auto da = a.dists().begin();
  auto db = b.dists().begin();
  for (; da != a.dists().end(); ++da, ++db) {
    if (da->first != db->first) return inf;
    worst = std::max(worst, max_abs_param_diff(da->second, db->second));
  }
  return worst;
}

}  // namespace normaudit
