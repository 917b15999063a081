#include <cmath>

#include "catbranch/oracles.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace catbranch;

TEST_CASE("extinction oracle") {
  CHECK(oracle_extinction_prob(1.0, 1.0) == 0.5);
  CHECK(oracle_extinction_prob(1.0, 0.0) == 0.0);
  CHECK(oracle_extinction_prob(1.0, 1e12) == doctest::Approx(1.0));
  MassPath p;
  p.times = {0.0, 0.5};
  p.values = {2.0, 0.0};
  CHECK(oracle_extinction_prob(p, 3.0) == 0.5);
}

TEST_CASE("mrca law") {
  MassPath one = MassPath::constant(1.0);
  CHECK(oracle_mrca_cdf(one, 1.0, 0.5) == doctest::Approx(1.0 / 3.0));
  CHECK(oracle_mrca_cdf(one, 1.0, 0.0) == 0.0);
  CHECK(oracle_mrca_cdf(one, 1.0, 1.0) == doctest::Approx(1.0));
  for (double h : {0.1, 0.3, 0.7, 0.9}) CHECK(oracle_mrca_cdf(one, 1.0, h) == doctest::Approx(1 - 2 * (1 - h) / (2 - h)));
  // density integrates to 1 (Simpson, piecewise-constant eta)
  MassPath eta;
  eta.times = {0.0, 0.4, 1.1};
  eta.values = {1.0, 3.0, 0.5};
  const double t = 2.0;
  auto simpson = [&](double a, double b) {
    const int m = 20000;
    double hstep = (b - a) / m, s = 0.0;
    for (int i = 0; i <= m; ++i) {
      double w = (i == 0 || i == m) ? 1 : (i % 2 ? 4 : 2);
      s += w * oracle_mrca_density(eta, t, a + i * hstep);
    }
    return s * hstep / 3.0;
  };
  double total = simpson(0.0, 0.4 - 1e-12) + simpson(0.4, 1.1 - 1e-12) + simpson(1.1, t);
  CHECK(std::abs(total - 1.0) < 1e-6);
  CHECK(simpson(0.0, 0.4 - 1e-12) == doctest::Approx(oracle_mrca_cdf(eta, t, 0.4)).epsilon(1e-6));
  CHECK_THROWS_AS(oracle_mrca_cdf(MassPath::constant(0.0), 1.0, 0.5), InputError);
}

TEST_CASE("intensities") {
  MassPath one = MassPath::constant(1.0);
  CHECK(oracle_reactant_intensity(one, 1.0, 1.0, 0.0, 0.5) == doctest::Approx(1.0));
  CHECK(oracle_reactant_intensity(one, 1.0, 1.0, 0.3, 0.3) == 0.0);
  MassPath x;
  x.times = {0.0, 0.3, 0.8};
  x.values = {1.0, 2.5, 0.7};
  double a = oracle_reactant_intensity(x, 1.3, 1.0, 0.1, 0.4), b = oracle_reactant_intensity(x, 1.3, 1.0, 0.4, 0.9);
  CHECK(a + b == doctest::Approx(oracle_reactant_intensity(x, 1.3, 1.0, 0.1, 0.9)));
  CHECK(oracle_brownian_intensity(1.0, 1.0, 0.0, 0.5) == doctest::Approx(1.0));
  CHECK(oracle_brownian_intensity(1.0, 1.0, 0.2, 0.2) == 0.0);
  CHECK_THROWS_AS(oracle_brownian_intensity(1.0, 1.0, 0.2, 1.0), InputError);
  for (double h : {0.2, 0.6})
    CHECK(oracle_brownian_intensity(0.8, 1.0, 0.0, h) == doctest::Approx(oracle_reactant_intensity(one, 0.8, 1.0, 0.0, h)));
  auto X = DiffusionPath::constant(1.0, 2.0, 1e-3);
  CHECK(oracle_reactant_intensity(X, 1.0, 1.0, 0.0, 0.5) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("stretch map") {
  MassPath two = MassPath::constant(2.0);
  CHECK(stretch_map(two, 1.0, 0.25) == 0.5);
  CHECK(stretch_map(two, 1.0, 0.0) == 0.0);
  MassPath one = MassPath::constant(1.0);
  for (double h : {0.1, 0.5, 0.9}) CHECK(stretch_map(one, 1.0, h) == doctest::Approx(h));
  MassPath x;
  x.times = {0.0, 0.3, 0.8};
  x.values = {1.0, 2.5, 0.7};
  double prev = -1.0;
  for (double h : {0.0, 0.1, 0.35, 0.6, 0.95}) {
    double v = stretch_map(x, 1.0, h);
    CHECK(v > prev);
    prev = v;
    CHECK(stretch_map_inverse(x, 1.0, v) == doctest::Approx(h).epsilon(1e-12));
  }
}

TEST_CASE("laplace, hitting probability") {
  CHECK(laplace_branching(1.0, 1.0, 1.0, 1.0) == doctest::Approx(std::exp(-0.5)));
  CHECK(laplace_branching(1.0, 0.0, 1.0, 1.0) == 1.0);
  CHECK(hitting_probability(1, 1, 1, 1) == doctest::Approx(1.0 / std::sqrt(5.0)));
  // invariant under a common rescaling of both rates
  CHECK(hitting_probability(2, 2, 1.3, 0.7) == doctest::Approx(hitting_probability(1, 1, 1.3, 0.7)));
}

TEST_CASE("comparison statistic") {
  auto c = testutil::cherry();
  CHECK(*different_tree_probability(c, 1.0) == 0.0);
  FamilyForest k;
  for (int i = 0; i < 4; ++i) add_root(k, 0.0, 1.0);
  CHECK(*different_tree_probability(k, 1.0) == doctest::Approx(0.75));
  CHECK(!different_tree_probability(k, 2.0));
  auto s = comparison_statistic({c, k}, {k}, 1.0);
  CHECK(s.reactant_mean == doctest::Approx(0.375));
  CHECK(s.brownian_mean == doctest::Approx(0.75));
  OracleReport r{"x", "y", 1.0, "t", "ks", 0.5, 0, 0, "p > 0.01", true};
  CHECK(to_json({r}).find("\"pass\": true") != std::string::npos);
}
