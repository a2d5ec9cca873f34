#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "normaudit/dist.hpp"

namespace normaudit {

// One configuration of the unknowns: named real coordinates plus named
// distribution handles. Names are unique across both maps and coordinate
// values are always finite.
class ParamPoint {
public:
  ParamPoint() = default;

  double coord(std::string_view name) const;
  const DistHandle& dist(std::string_view name) const;
  bool has_coord(std::string_view name) const { return coords_.count(std::string(name)) > 0; }
  bool has_dist(std::string_view name) const { return dists_.count(std::string(name)) > 0; }

  // Insert-or-overwrite; throws NonFiniteError / UnknownNameError on bad input
  // or a name already used by the other map.
  void set_coord(std::string name, double value);
  void set_dist(std::string name, DistHandle value);

  const std::map<std::string, double>& coords() const { return coords_; }
  const std::map<std::string, DistHandle>& dists() const { return dists_; }

  // Values of <prefix><first>, <prefix><first+1>, ... while present.
  std::vector<double> indexed_coords(std::string_view prefix, std::size_t first = 0) const;

  double max_abs_coord() const;

  bool operator==(const ParamPoint&) const = default;

private:
  std::map<std::string, double> coords_;
  std::map<std::string, DistHandle> dists_;
};

// Largest absolute coordinate/dist-parameter difference between two points;
// infinity when their name sets or dist families disagree.
double param_distance(const ParamPoint& a, const ParamPoint& b);

}  // namespace normaudit
