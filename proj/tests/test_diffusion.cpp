#include <cmath>

#include "catbranch/diffusion.hpp"
#include "catbranch/oracles.hpp"
#include "catbranch/stats.hpp"
#include "doctest.h"

using namespace catbranch;

TEST_CASE("feller paths: shape, truncation, freezing") {
  FellerConfig c;
  c.horizon = 1.0;
  c.dt = 1e-3;
  c.seed = 4;
  auto p = integrate_catalytic_feller(c);
  CHECK(p.x.values.size() == 1001);
  for (double v : p.x.values) CHECK(v >= 0.0);
  for (double v : p.y.values) CHECK(v >= 0.0);
  if (p.x.absorbed_index >= 0)
    for (std::size_t k = static_cast<std::size_t>(p.x.absorbed_index); k < p.y.values.size(); ++k)
      CHECK(p.y.values[k] == p.y.values[p.x.absorbed_index]);
  c.freeze_catalyst = true;
  auto q = integrate_catalytic_feller(c);
  for (double v : q.x.values) CHECK(v == 1.0);
  auto r = integrate_catalytic_feller(c);
  CHECK(r.y.values == q.y.values);
}

TEST_CASE("feller martingale and extinction law") {
  FellerConfig c;
  c.horizon = 1.0;
  c.dt = 1e-3;
  std::vector<double> xs, ys;
  int dead = 0;
  const int R = 4000;
  for (int i = 0; i < R; ++i) {
    c.seed = stream_seed(100, i);
    auto p = integrate_catalytic_feller(c);
    xs.push_back(p.x.values.back());
    ys.push_back(p.y.values.back());
    dead += p.x.absorbed_index >= 0;
  }
  auto mx = mean_se(xs), my = mean_se(ys);
  CHECK(std::abs(mx.mean - 1.0) < 3.5 * mx.se);
  CHECK(std::abs(my.mean - 1.0) < 3.5 * my.se);
  // P(tau <= 1) = exp(-2); grid detection misses some sub-step hits, allow 4 SE + 0.01
  double p = feller_extinction_prob(1.0, 1.0, 1.0);
  CHECK(std::abs(dead / double(R) - p) < 4.0 * std::sqrt(p * (1 - p) / R) + 0.01);
}

TEST_CASE("laplace transform with a frozen catalyst") {
  // dY = sqrt(Y) dW is branching at rate b = 1/2 in the Laplace formula
  FellerConfig c;
  c.horizon = 1.0;
  c.dt = 1e-3;
  c.freeze_catalyst = true;
  std::vector<double> v;
  for (int i = 0; i < 4000; ++i) {
    c.seed = stream_seed(200, i);
    v.push_back(std::exp(-integrate_catalytic_feller(c).y.values.back()));
  }
  auto m = mean_se(v);
  CHECK(std::abs(m.mean - laplace_branching(1.0, 1.0, 0.5, 1.0)) < 3.5 * m.se + 2e-3);
}

TEST_CASE("absorption race") {
  FellerConfig c;
  c.horizon = 50.0;
  c.dt = 1e-3;
  int wins = 0, done = 0;
  const int R = 3000;
  for (int i = 0; i < R; ++i) {
    c.seed = stream_seed(300, i);
    auto r = absorption_race(c);
    done += r.first != Absorbed::none;
    wins += r.first == Absorbed::reactant;
  }
  CHECK(done > R * 0.97);
  double p = hitting_probability(1, 1, 1, 1);
  CHECK(std::abs(wins / double(R) - p) < 4.0 * std::sqrt(p * (1 - p) / R) + 0.02);
}

TEST_CASE("scale function") {
  auto X = DiffusionPath::constant(2.0, 3.0, 0.01);
  ScaleFunction s(X, 0.5);
  CHECK(s(0.0) == 0.0);
  CHECK(s(1.3) == doctest::Approx(2.6));
  CHECK(s.domain_end() == doctest::Approx(3.0));
  for (double x : {0.0, 0.123, 1.0, 2.999}) CHECK(std::abs(s.inverse(s(x)) - x) <= 0.01);
  DiffusionPath Y;
  Y.dt = 0.1;
  Y.values = {1.0, 0.8, 0.6, 0.4, 0.2, 0.0};
  ScaleFunction sy(Y, 0.5);
  CHECK(sy.domain_end() == doctest::Approx(0.3));
  CHECK_THROWS_AS(ScaleFunction(Y, 1.5), InputError);
}

TEST_CASE("limit contour") {
  auto X = DiffusionPath::constant(2.0, 1.0, 1e-3);
  LimitContourOptions o;
  o.dt = 1e-4;
  o.budget = 0.5;
  o.seed = 9;
  CHECK_THROWS_AS(simulate_limit_contour(X, 0.0, o), InputError);
  auto lc = simulate_limit_contour(X, 0.1, o);
  CHECK(lc.budget_reached);
  for (double v : lc.zeta.values) {
    CHECK(v >= 0.0);
    CHECK(v <= lc.tau + 1e-12);
  }
  // d<zeta> = 4/X du
  const double u = lc.zeta.dt * static_cast<double>(lc.zeta.values.size() - 1);
  CHECK(quadratic_variation(lc.zeta) / u == doctest::Approx(2.0).epsilon(0.1));
  // local time scaling between zeta and B = s(zeta) = 2 zeta
  DiffusionPath B = lc.zeta;
  for (double& v : B.values) v *= 2.0;
  CHECK(local_time_estimate(lc.zeta, 0.3, 0.02) == doctest::Approx(local_time_estimate(B, 0.6, 0.04) / 2.0));
}

TEST_CASE("local time estimate") {
  DiffusionPath flat = DiffusionPath::constant(1.0, 1.0, 0.01);
  CHECK(local_time_estimate(flat, 3.0, 0.1) == 0.0);
  CHECK_THROWS_AS(local_time_estimate(flat, 1.0, 0.0), InputError);
  // reflected Brownian motion: estimates at level 0 agree across band halvings
  Rng rng(5);
  DiffusionPath r;
  r.dt = 1e-5;
  double v = 0.0;
  r.values.push_back(v);
  for (int k = 0; k < 2'000'000; ++k) {
    v = std::abs(v + std::sqrt(r.dt) * rng.normal());
    r.values.push_back(v);
  }
  double a = local_time_estimate(r, 0.0, 0.02), b = local_time_estimate(r, 0.0, 0.01);
  CHECK(std::abs(a - b) / a < 0.15);
}

TEST_CASE("quadratic variation") {
  // piecewise-linear path: refinement drives the grid QV to 0
  double prev = kInf;
  for (int m : {10, 100, 1000}) {
    DiffusionPath p;
    p.dt = 1.0 / m;
    for (int k = 0; k <= m; ++k) p.values.push_back(k <= m / 2 ? 2.0 * k / m : 2.0 - 2.0 * k / m);
    double q = quadratic_variation(p);
    CHECK(q < prev);
    prev = q;
  }
  CHECK(prev < 0.01);
  Rng rng(8);
  DiffusionPath w;
  w.dt = 1e-4;
  const double sigma = 1.7;
  double x = 0.0;
  w.values.push_back(x);
  for (int k = 0; k < 100000; ++k) {
    x += sigma * std::sqrt(w.dt) * rng.normal();
    w.values.push_back(x);
  }
  CHECK(quadratic_variation(w) == doctest::Approx(sigma * sigma * 10.0).epsilon(0.05));
}

TEST_CASE("random evolution") {
  RandomEvolutionOptions o;
  o.n = 1;
  o.y0 = 1.0;
  MassPath zero;
  zero.times = {0.0, 2.0};
  zero.values = {0.0, 0.0};
  zero.horizon = 2.0;
  // zero catalyst: absorbed at once, upper boundary 0, no movement at all
  auto e0 = simulate_random_evolution(zero, o);
  CHECK(e0.points.size() == 1);
  MassPath step;
  step.times = {0.0, 1.0, 2.0};
  step.values = {0.0, 0.0, 0.0};
  step.values = {1e-300, 0.0, 0.0};
  o.delta = 0.0;
  auto e1 = simulate_random_evolution(step, o);
  CHECK(e1.max_height() == 1.0);
  CHECK(e1.points.size() == 3);
  // Poisson flip count with a constant catalyst
  MassPath c = MassPath::constant(1.5, 1e9);
  o.n = 3;
  o.y0 = 5.0;
  o.delta = 0.0;
  double flips = 0.0, time = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    o.seed = s;
    auto e = simulate_random_evolution(c, o);
    validate(e);
    for (std::size_t i = 1; i + 1 < e.points.size(); ++i) flips += e.points[i].e > 0.0;
    time += e.duration();
  }
  const double rate = 2.0 * 9.0 * 1.0 * 1.5;  // kappa n^2 b2 c
  CHECK(exact_poisson_test(static_cast<long>(flips), rate * time).p_value > 0.001);
  // slopes are +-2n
  auto e = simulate_random_evolution(c, o);
  for (std::size_t i = 1; i < e.points.size(); ++i) {
    double s = (e.points[i].e - e.points[i - 1].e) / (e.points[i].u - e.points[i - 1].u);
    CHECK(std::abs(std::abs(s) - 6.0) < 1e-9);
  }
}
