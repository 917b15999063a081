#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "catbranch/common.hpp"

namespace catbranch {

// Cadlag step function. values[i] holds on [times[i], times[i+1]).
// Known up to `horizon`; after absorption at 0 it is known forever.
struct MassPath {
  std::vector<double> times{0.0};
  std::vector<double> values{0.0};
  double horizon = kInf;

  double at(double t) const;
  bool absorbed() const { return values.back() == 0.0; }
  // Integral of the path over [a,b].
  double integral(double a, double b) const;
  static MassPath constant(double v, double horizon = kInf);
};

// Cumulative integral C(t) of a MassPath and its generalized inverse.
class StepIntegral {
 public:
  explicit StepIntegral(const MassPath& p);
  double at(double t) const;
  // Smallest t with C(t) = c; +inf if C never reaches c.
  double inverse(double c) const;

 private:
  const MassPath& p_;
  std::vector<double> cum_;
};

// Uniform-grid sample of a continuous path.
struct DiffusionPath {
  double dt = 1e-4;
  std::vector<double> values;
  long absorbed_index = -1;  // first grid index at 0, -1 if never
  std::uint64_t seed = 0;

  double horizon() const { return values.empty() ? 0.0 : dt * static_cast<double>(values.size() - 1); }
  // Linear interpolation; constant beyond the last grid point.
  double at(double t) const;
  static DiffusionPath constant(double v, double horizon, double dt);
};

}  // namespace catbranch
