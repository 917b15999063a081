#include <cmath>

#include "catbranch/contour.hpp"
#include "catbranch/rtree.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace catbranch;
using testutil::cherry;
using testutil::segment;

namespace {

// splits at 0.5 and 0.8, leaves at 1: ((l1, l2) at 0.8, l3) at 0.5
FamilyForest three_leaf(int& l1, int& l2, int& l3) {
  FamilyForest f;
  int r = add_root(f, 0.0, 0.5);
  int a = add_child(f, r, 0.8);
  l3 = add_child(f, r, 1.0);
  l1 = add_child(f, a, 1.0);
  l2 = add_child(f, a, 1.0);
  // order: subtree a first, then l3
  assign_labels(f);
  return f;
}

TreePoint top(const FamilyForest& f, int v) { return {v, f.nodes[v].death - f.nodes[v].birth}; }

}  // namespace

TEST_CASE("genealogical distance examples") {
  int l1, l2, l3;
  auto f = three_leaf(l1, l2, l3);
  CHECK(genealogical_distance(f, top(f, l1), top(f, l1)) == 0.0);
  CHECK(genealogical_distance(f, top(f, l1), top(f, l2)) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(genealogical_distance(f, top(f, l1), top(f, l3)) == doctest::Approx(1.0).epsilon(1e-15));
  // t1 = t2 = 1, split at 0.3
  FamilyForest g;
  int r = add_root(g, 0.0, 0.3);
  int a = add_child(g, r, 1.0), b = add_child(g, r, 1.0);
  CHECK(genealogical_distance(g, top(g, a), top(g, b)) == doctest::Approx(1.4));
  // ancestor/descendant on the same lineage
  CHECK(genealogical_distance(g, {r, 0.1}, top(g, a)) == doctest::Approx(0.9));
  // distinct trees: t1 + t2, roots at height 0 are at distance 0
  FamilyForest two;
  int p = add_root(two, 0.0, 1.0), q = add_root(two, 0.0, 1.0);
  CHECK(genealogical_distance(two, top(two, p), top(two, q)) == 2.0);
  CHECK(genealogical_distance(two, {p, 0.0}, {q, 0.0}) == 0.0);
  CHECK_THROWS_AS(genealogical_distance(two, {5, 0.0}, {q, 0.0}), InputError);
  CHECK_THROWS_AS(genealogical_distance(two, {p, 2.0}, {q, 0.0}), InputError);
}

TEST_CASE("metric properties on random forests") {
  Rng rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    auto f = testutil::random_forest(rng);
    std::vector<TreePoint> pts;
    for (std::size_t v = 0; v < f.nodes.size(); ++v) {
      const Node& n = f.nodes[v];
      pts.push_back({static_cast<int>(v), 0.5 * (n.death - n.birth)});
      pts.push_back({static_cast<int>(v), n.death - n.birth});
    }
    auto d = pairwise_distances(f, pts);
    const auto k = d.rows();
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) {
        CHECK(d(i, j) == d(j, i));
        CHECK(d(i, j) >= 0.0);
      }
    // four-point condition on sampled quadruples
    for (int s = 0; s < 200; ++s) {
      Eigen::Index a = rng.index(k), b = rng.index(k), c = rng.index(k), e = rng.index(k);
      double x = d(a, b) + d(c, e), y = d(a, c) + d(b, e), z = d(a, e) + d(b, c);
      double m1 = std::max({x, y, z});
      int at_max = (x >= m1 - 1e-12) + (y >= m1 - 1e-12) + (z >= m1 - 1e-12);
      CHECK(at_max >= 2);
    }
    // ultrametric on levels
    for (double t : {0.25, 0.5, 0.75, 1.0}) {
      auto lv = level_set(f, t);
      auto dl = pairwise_distances(f, lv);
      for (Eigen::Index i = 0; i < dl.rows(); ++i)
        for (Eigen::Index j = 0; j < dl.rows(); ++j)
          for (Eigen::Index l = 0; l < dl.rows(); ++l) CHECK(dl(i, l) <= std::max(dl(i, j), dl(j, l)) + 1e-12);
    }
  }
}

TEST_CASE("truncate") {
  auto f = segment(2.0);
  auto g = truncate(f, 1.0);
  CHECK(g.nodes.size() == 1);
  CHECK(g.nodes[0].death == 1.0);
  CHECK(*g.height_cap == 1.0);
  auto c = cherry();
  auto same = truncate(c, 3.0);
  CHECK(ordered_isometric(c, same));
  auto roots_only = truncate(c, 0.0);
  CHECK(roots_only.nodes.size() == 1);
  CHECK(height(roots_only) == 0.0);
  CHECK_THROWS_AS(truncate(c, -1.0), InputError);
  // infinite branches are clipped at the truncation level
  FamilyForest inf;
  add_root(inf, 0.0, kInf);
  CHECK(truncate(inf, 4.0).nodes[0].death == 4.0);
}

TEST_CASE("level_set") {
  auto c = cherry();
  CHECK(level_set(c, 0.0).size() == 1);
  CHECK(level_set(c, 0.7).size() == 2);
  CHECK(level_set(segment(2.0), 1.0).size() == 1);
  CHECK(level_set(c, 1.5).empty());
  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    auto f = testutil::random_forest(rng);
    for (double t : {0.3, 0.6, 1.1}) {
      std::size_t alive = 0;
      for (const Node& n : f.nodes) alive += (t > n.birth && t <= n.death);
      CHECK(level_set(f, t).size() == alive);
    }
  }
}

TEST_CASE("trim") {
  CHECK_THROWS_AS(trim(cherry(), 0.0), InputError);
  auto r = trim(cherry(), 1.5);
  CHECK(r.nodes.size() == 1);
  CHECK(height(r) == 0.0);
  auto s = trim(segment(2.0), 1.0);
  CHECK(s.nodes.size() == 1);
  CHECK(s.nodes[0].death == 1.0);
  auto c = trim(cherry(), 0.7);
  CHECK(c.nodes.size() == 1);
  CHECK(height(c) == doctest::Approx(0.3).epsilon(1e-15));
  Rng rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    auto f = testutil::random_forest(rng);
    const double e1 = static_cast<double>(1 + rng.index(16)) / 64.0, e2 = static_cast<double>(1 + rng.index(16)) / 64.0;
    CHECK(ordered_isometric(trim(trim(f, e1), e2), trim(f, e1 + e2)));
  }
}

TEST_CASE("ancestors") {
  auto c = cherry();
  CHECK(ancestors(c, 1.0, 0.3).size() == 2);
  CHECK(ancestors(c, 1.0, 0.7).size() == 1);
  CHECK(ancestors(c, 1.0, 1.0).size() == 1);
  CHECK(ancestors(c, 2.0, 0.5).empty());
  CHECK_THROWS_AS(ancestors(c, 1.0, 0.0), InputError);
  CHECK_THROWS_AS(ancestors(c, 1.0, 1.5), InputError);
  Rng rng(8);
  for (int rep = 0; rep < 100; ++rep) {
    auto f = testutil::random_forest(rng);
    const double t = 1.0;
    std::size_t prev = static_cast<std::size_t>(-1);
    for (int k = 1; k <= 16; ++k) {
      auto a = ancestors(f, t, k / 16.0);
      CHECK(a.size() <= prev);
      prev = a.size();
    }
  }
}

TEST_CASE("gh bounds") {
  auto c = cherry();
  auto b = gh_distance_bounds(c, c);
  CHECK(b.lower == 0.0);
  CHECK(b.upper == 0.0);
  // rooted segments: embedding distance |h1 - h2| / 2 (see ledger); both bounds agree
  auto s = gh_distance_bounds(segment(1.0), segment(1.5));
  CHECK(s.lower == doctest::Approx(0.25));
  CHECK(s.upper == doctest::Approx(0.25));
  REQUIRE(s.skeleton_estimate);
  CHECK(*s.skeleton_estimate == doctest::Approx(0.25));
  Rng rng(21);
  for (int rep = 0; rep < 100; ++rep) {
    auto f = testutil::random_forest(rng);
    const double t = 0.5 * height(f);
    auto g = truncate(f, t);
    auto gb = gh_distance_bounds(f, g);
    CHECK(gb.lower <= gb.upper);
    CHECK(gb.upper <= height(f) - t + 1e-12);
  }
}

TEST_CASE("i2 length") {
  const double h = 1.5;
  for (int m : {1, 2, 4, 8, 16}) CHECK(i2_length(segment(h), h / m) == doctest::Approx(h * h / m));
  Rng rng(2);
  auto f = testutil::random_forest(rng);
  double prev = kInf;
  for (double mesh : {0.5, 0.25, 0.125, 1.0 / 64, 1.0 / 256}) {
    double v = i2_length(f, mesh);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK_THROWS_AS(i2_length(f, 0.0), InputError);
}

TEST_CASE("i2 length of a walk tree is half the contour quadratic variation") {
  // Simple-walk excursions with unit-mesh steps: each edge is traversed twice.
  Rng rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    Excursion e;
    e.points.push_back({0.0, 0.0});
    double h = 0.0, u = 0.0;
    do {
      h += (h == 0.0 || rng.coin()) ? 1.0 : -1.0;
      u += 1.0;
      e.points.push_back({u, h});
    } while (h > 0.0 && u < 400.0);
    while (h > 0.0) {
      h -= 1.0;
      u += 1.0;
      e.points.push_back({u, h});
    }
    double qv = 0.0;
    for (std::size_t i = 1; i < e.points.size(); ++i) qv += 1.0;
    auto f = tree_from_excursion(e);
    CHECK(i2_length(f, 1.0) == doctest::Approx(qv / 2.0));
  }
}

TEST_CASE("labels and validation") {
  auto c = cherry();
  validate(c);
  CHECK(c.nodes[1].label == std::vector<int>{0, 0});
  CHECK(c.nodes[2].label == std::vector<int>{0, 1});
  c.nodes[2].birth = 0.4;
  CHECK_THROWS_AS(validate(c), InputError);
}
