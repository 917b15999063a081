#include "catbranch/paths.hpp"

#include <algorithm>
#include <cmath>

namespace catbranch {

double MassPath::at(double t) const {
  if (t < times.front()) return values.front();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

double MassPath::integral(double a, double b) const {
  if (b <= a) return 0.0;
  StepIntegral c(*this);
  return c.at(b) - c.at(a);
}

MassPath MassPath::constant(double v, double horizon) {
  MassPath p;
  p.values = {v};
  p.horizon = horizon;
  return p;
}

StepIntegral::StepIntegral(const MassPath& p) : p_(p), cum_(p.times.size(), 0.0) {
  for (std::size_t i = 1; i < cum_.size(); ++i)
    cum_[i] = cum_[i - 1] + p.values[i - 1] * (p.times[i] - p.times[i - 1]);
}

double StepIntegral::at(double t) const {
  if (t <= p_.times.front()) return 0.0;
  auto i = static_cast<std::size_t>(std::upper_bound(p_.times.begin(), p_.times.end(), t) - p_.times.begin()) - 1;
  if (p_.values[i] == 0.0) return cum_[i];
  return cum_[i] + p_.values[i] * (t - p_.times[i]);
}

double StepIntegral::inverse(double c) const {
  if (c <= 0.0) return p_.times.front();
  auto i = static_cast<std::size_t>(std::lower_bound(cum_.begin(), cum_.end(), c) - cum_.begin());
  // cum_[i-1] < c <= cum_[i]: the crossing lies in step i-1
  std::size_t k = i == 0 ? 0 : i - 1;
  if (i == cum_.size() && p_.values[k] <= 0.0) return kInf;
  double t = p_.times[k] + (c - cum_[k]) / p_.values[k];
  if (k + 1 < p_.times.size()) t = std::min(t, p_.times[k + 1]);
  return std::max(t, p_.times[k]);
}

double DiffusionPath::at(double t) const {
  if (values.empty()) return 0.0;
  if (t <= 0.0) return values.front();
  double x = t / dt;
  auto k = static_cast<std::size_t>(x);
  if (k + 1 >= values.size()) return values.back();
  double w = x - static_cast<double>(k);
  return values[k] + w * (values[k + 1] - values[k]);
}

DiffusionPath DiffusionPath::constant(double v, double horizon, double dt) {
  if (!(dt > 0.0) || !(horizon >= 0.0)) throw InputError("constant path needs dt > 0 and horizon >= 0");
  DiffusionPath p;
  p.dt = dt;
  p.values.assign(static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9)) + 1, v);
  if (v == 0.0) p.absorbed_index = 0;
  return p;
}

}  // namespace catbranch
