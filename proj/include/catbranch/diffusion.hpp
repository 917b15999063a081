#pragma once

#include <cstdint>

#include "catbranch/contour.hpp"
#include "catbranch/particle.hpp"
#include "catbranch/paths.hpp"

namespace catbranch {

// dX = sqrt(b1 X) dW^X, dY = sqrt(b2 X Y) dW^Y. b1 = b2 = 1 is the textbook system.
struct FellerConfig {
  double x0 = 1.0;
  double y0 = 1.0;
  double b1 = 1.0;
  double b2 = 1.0;
  double dt = 1e-4;
  double horizon = 10.0;
  std::uint64_t seed = 0;
  bool freeze_catalyst = false;  // X stays at x0
  void validate() const;
};

struct FellerPaths {
  DiffusionPath x;
  DiffusionPath y;
};

// Full-truncation Euler. Noise for X from stream 0, for Y from stream 1.
FellerPaths integrate_catalytic_feller(const FellerConfig& cfg);

enum class Absorbed { none, catalyst, reactant };

struct RaceResult {
  Absorbed first = Absorbed::none;
  double time = 0.0;  // absorption time, or the horizon
  double x = 0.0;     // state when the run stopped
  double y = 0.0;
};

// Same scheme as integrate_catalytic_feller, no storage, stops at the first absorption.
RaceResult absorption_race(const FellerConfig& cfg);

// s(x) = int_0^x X_u du on the grid of X, restricted to [0, tau^delta].
class ScaleFunction {
 public:
  ScaleFunction(const DiffusionPath& X, double delta);

  double domain_end() const { return end_; }  // tau^delta (or the path horizon)
  double operator()(double x) const;
  double derivative(double x) const;  // X at x
  double inverse(double v) const;
  // Inverse starting the search from grid cell `hint`, updated in place.
  double inverse(double v, std::size_t& hint) const;
  double range_end() const { return s_.back(); }

 private:
  const DiffusionPath& X_;
  std::vector<double> s_;
  double end_ = 0.0;
};

ScaleFunction scale_function(const DiffusionPath& X, double delta);

struct LimitContourOptions {
  double dt = 1e-5;
  double budget = 2.0;  // Skorokhod regulator of B = s(zeta) at 0 at which to stop
  std::uint64_t seed = 0;
  std::size_t max_steps = 400'000'000;
};

struct LimitContour {
  DiffusionPath zeta;
  double tau = 0.0;          // upper reflecting level tau^delta
  double regulator = 0.0;    // final regulator of B at 0
  bool reached_top = false;  // hit the upper boundary
  bool budget_reached = false;
};

// B = s(zeta): d<B> = 4 X_{s^{-1}(B)} du, folded at 0 and s(tau^delta). delta = 0 is refused.
LimitContour simulate_limit_contour(const DiffusionPath& X, double delta, const LimitContourOptions& opt);

struct RandomEvolutionOptions {
  int n = 1;
  double b2 = 1.0;
  double y0 = 1.0;  // y0 * n excursions from 0
  double delta = 0.0;
  RateConvention rate_convention = RateConvention::birth_rate;
  std::uint64_t seed = 0;
  std::size_t max_flips = 100'000'000;
};

// Slopes +-2n; sign flips at rate kappa n^2 b2 eta(height); forced down at T^delta.
Excursion simulate_random_evolution(const MassPath& catalyst, const RandomEvolutionOptions& opt);

// (1/2eps) * sum of squared increments over steps starting in (t-eps, t+eps).
double local_time_estimate(const DiffusionPath& path, double t, double eps);
double quadratic_variation(const DiffusionPath& path);
double quadratic_variation(const Excursion& e);

// Grid points as breakpoints, u = k*dt.
Excursion to_excursion(const DiffusionPath& path);

}  // namespace catbranch
