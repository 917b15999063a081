#pragma once

#include <vector>

#include "catbranch/rtree.hpp"

namespace catbranch {

struct Breakpoint {
  double u = 0.0;
  double e = 0.0;
  bool operator==(const Breakpoint&) const = default;
};

// Piecewise-linear nonnegative path from (0,0) to (U,0).
struct Excursion {
  std::vector<Breakpoint> points;
  double speed = 0.0;  // 0 when unknown (sampled paths)

  double duration() const { return points.empty() ? 0.0 : points.back().u; }
  double value_at(double u) const;
  double max_height() const;
};

void validate(const Excursion& e);
// Drops repeated times, flat pieces and interior points of monotone runs.
Excursion canonical(const Excursion& e);

Excursion contour_from_forest(const FamilyForest& f, double sigma);
FamilyForest tree_from_excursion(const Excursion& e);
Excursion excise_above(const Excursion& e, double t);

}  // namespace catbranch
