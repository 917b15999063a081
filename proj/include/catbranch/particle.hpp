#pragma once

#include <cstdint>
#include <string>

#include "catbranch/paths.hpp"
#include "catbranch/rtree.hpp"

namespace catbranch {

enum class Representation { galton_watson, birth_death };

// birth_rate: an individual splits at rate b*env and dies at rate b*env.
// lifetime:   Exp(b*env) lifetimes, then 0 or 2 offspring (half the event rate).
enum class RateConvention { birth_rate, lifetime };

struct SimConfig {
  double b1 = 1.0;
  double b2 = 1.0;
  int n = 1;
  double x0 = 1.0;  // initial catalyst mass
  double y0 = 1.0;  // initial reactant mass
  double delta = 0.0;
  double t_max = 10.0;
  std::uint64_t seed = 0;
  Representation representation = Representation::galton_watson;
  RateConvention rate_convention = RateConvention::birth_rate;
  std::size_t max_live = 10'000'000;
  bool record_forest = true;

  // Split rate (= death rate) per individual per unit of b*env at scale n.
  double split_rate_factor() const;
  void validate() const;
};

Representation parse_representation(const std::string& s);
RateConvention parse_rate_convention(const std::string& s);
std::string to_string(Representation r);
std::string to_string(RateConvention r);

struct Population {
  MassPath mass;
  FamilyForest forest;
  std::size_t events = 0;
};

struct JointResult {
  Population catalyst;
  Population reactant;
};

Population simulate_catalyst(const SimConfig& cfg);
Population simulate_catalyst(const SimConfig& cfg, Rng& rng);
Population simulate_reactant_quenched(const SimConfig& cfg, const MassPath& catalyst);
Population simulate_reactant_quenched(const SimConfig& cfg, const MassPath& catalyst, Rng& rng);
JointResult simulate_joint(const SimConfig& cfg);

double stopping_time(const MassPath& path, double delta);

}  // namespace catbranch
