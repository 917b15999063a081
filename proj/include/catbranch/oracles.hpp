#pragma once

#include <optional>
#include <string>
#include <vector>

#include "catbranch/paths.hpp"
#include "catbranch/rtree.hpp"

namespace catbranch {

// Extinction probability by t of one individual splitting and dying at rate lambda(s) each:
// L / (1 + L) with L = int_0^t lambda.
double oracle_extinction_prob(const MassPath& rate, double t);
double oracle_extinction_prob(double rate, double t);

// Law of the MRCA height of two level-t neighbours under branching rate eta.
double oracle_mrca_cdf(const MassPath& eta, double t, double h);
double oracle_mrca_density(const MassPath& eta, double t, double h);

// Expected number of level-t neighbour MRCA heights in (h1, h2] per unit of the index range,
// times y_t: y_t * (1/int_{h2}^t X - 1/int_{h1}^t X).
double oracle_reactant_intensity(const MassPath& X, double y_t, double t, double h1, double h2);
double oracle_reactant_intensity(const DiffusionPath& X, double y_t, double t, double h1, double h2);
// x_t * (1/(t-h2) - 1/(t-h1)); h2 >= t is rejected.
double oracle_brownian_intensity(double x_t, double t, double h1, double h2);

// int_{t-h}^t x, and its inverse in h.
double stretch_map(const MassPath& x, double t, double h);
double stretch_map_inverse(const MassPath& x, double t, double v);

// E[exp(-lambda Y_t) | Y_0 = y] for Feller branching with rate b(s): exp(-y lambda / (1 + lambda int b)).
double laplace_branching(double y, double lambda, const MassPath& b, double t);
double laplace_branching(double y, double lambda, double b, double t);

// P(reactant dies before catalyst) for dX = sqrt(b1 X) dW, dY = sqrt(b2 X Y) dW.
double hitting_probability(double b1, double b2, double x0, double y0);
// P(tau^0 <= t) for dX = sqrt(b1 X) dW.
double feller_extinction_prob(double b1, double x0, double t);

// Probability that two level-t individuals drawn uniformly with replacement lie in different trees.
// Empty level -> nullopt.
std::optional<double> different_tree_probability(const FamilyForest& f, double t);

struct ComparisonStat {
  double reactant_mean = 0.0, reactant_se = 0.0;
  double brownian_mean = 0.0, brownian_se = 0.0;
  std::size_t reactant_used = 0, brownian_used = 0;
};
ComparisonStat comparison_statistic(const std::vector<FamilyForest>& reactant,
                                    const std::vector<FamilyForest>& brownian, double t);

struct OracleReport {
  std::string name;
  std::string anchor;
  double statistic = 0.0;
  std::string target;
  std::string test;
  double p_value = -1.0;  // <0 when the check is a CI / tolerance check
  double ci_lo = 0.0, ci_hi = 0.0;
  std::string criterion;
  bool pass = false;
};

std::string to_json(const std::vector<OracleReport>& reports);

}  // namespace catbranch
