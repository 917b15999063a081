#include "catbranch/contour.hpp"
#include "catbranch/diffusion.hpp"
#include "catbranch/points.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace catbranch;

TEST_CASE("point process examples") {
  auto one = point_process_at_level(testutil::segment(2.0), 1.0, 1.0);
  CHECK(one.points.empty());
  auto c = point_process_at_level(testutil::cherry(), 1.0, 1.0);
  REQUIRE(c.points.size() == 1);
  CHECK(c.points[0].ell == 1.0);
  CHECK(c.points[0].h == 0.5);
  CHECK(!c.points[0].separator);
  FamilyForest two;
  add_root(two, 0.0, 1.0);
  add_root(two, 0.0, 1.0);
  auto s = point_process_at_level(two, 1.0, 0.5);
  REQUIRE(s.points.size() == 1);
  CHECK(s.points[0].h == 0.0);
  CHECK(s.points[0].ell == 0.5);
  CHECK(s.zero_marks == 1);
  auto empty = point_process_at_level(two, 3.0, 1.0);
  CHECK(empty.points.empty());
  CHECK_THROWS_AS(point_process_at_level(two, 1.0, 0.0), InputError);
  CHECK_THROWS_AS(point_process_at_level(truncate(two, 0.5), 1.0, 1.0), InputError);
}

TEST_CASE("reconstruction examples") {
  GenealogicalPointProcess p;
  p.t = 1.0;
  p.points = {{1.0, 1.0 - 0.2, false}, {2.0, 1.0 - 0.5, false}};  // neighbour distances 0.4, 1.0
  auto d = reconstruct_distance_matrix(p);
  CHECK(d(0, 1) == doctest::Approx(0.4));
  CHECK(d(1, 2) == doctest::Approx(1.0));
  CHECK(d(0, 2) == doctest::Approx(1.0));
  GenealogicalPointProcess z;
  z.t = 0.7;
  z.points = {{1.0, 0.0, true}, {2.0, 0.0, true}, {3.0, 0.0, true}};
  auto dz = reconstruct_distance_matrix(z);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(dz(i, j) == (i == j ? 0.0 : 1.4));
}

TEST_CASE("reconstruction matches forest distances; truncation above t changes nothing") {
  Rng rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    auto f = testutil::random_forest(rng);
    for (double t : {0.25 + 1.0 / 128, 0.5 + 1.0 / 128, 1.0 + 1.0 / 128}) {
      auto p = point_process_at_level(f, t, 1.0);
      auto d = reconstruct_distance_matrix(p);
      auto ref = pairwise_distances(f, level_set(f, t));
      REQUIRE(d.rows() == (ref.rows() == 0 ? 1 : ref.rows()));
      if (ref.rows() > 0) CHECK((d - ref).cwiseAbs().maxCoeff() == 0.0);
      auto q = point_process_at_level(truncate(f, t), t, 1.0);
      REQUIRE(q.points.size() == p.points.size());
      for (std::size_t i = 0; i < p.points.size(); ++i) CHECK(q.points[i].h == p.points[i].h);
      for (const auto& g : p.points) CHECK(g.h < t);
    }
  }
}

TEST_CASE("excursion depths on exact contours") {
  Excursion mono;
  mono.points = {{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}};
  CHECK(excursion_depths_below_level(mono, 0.5).empty());
  Excursion dip;
  dip.points = {{0.0, 0.0}, {1.0, 1.0}, {1.6, 0.4}, {2.2, 1.0}, {3.2, 0.0}};
  auto d = excursion_depths_below_level(dip, 1.0);
  REQUIRE(d.size() == 1);
  CHECK(d[0].depth == doctest::Approx(0.6));
  Rng rng(41);
  for (int rep = 0; rep < 200; ++rep) {
    auto f = testutil::random_forest(rng);
    const double t = 0.5 + 1.0 / 128;
    auto p = point_process_at_level(f, t, 1.0);
    auto dep = excursion_depths_below_level(contour_from_forest(f, 2.0), t);
    REQUIRE(dep.size() == p.points.size());
    for (std::size_t i = 0; i < dep.size(); ++i) {
      CHECK(dep[i].depth == t - p.points[i].h);
      CHECK(dep[i].index == p.points[i].ell);
    }
  }
}

TEST_CASE("excursion depths on sampled paths") {
  DiffusionPath p;
  p.dt = 0.01;
  for (int k = 0; k <= 100; ++k) p.values.push_back(k * 0.01);
  DepthOptions opt;
  opt.depth_floor = 0.0;
  CHECK(excursion_depths_below_level(p, 0.5, opt).empty());
  DiffusionPath q;
  q.dt = 0.01;
  for (double v : {0.0, 0.5, 1.0, 0.7, 0.4, 0.8, 1.0, 0.5, 0.0}) q.values.push_back(v);
  opt.band = 0.1;
  auto d = excursion_depths_below_level(q, 1.0, opt);
  REQUIRE(d.size() == 1);
  CHECK(d[0].depth == doctest::Approx(0.6));
  opt.depth_floor = 0.7;
  CHECK(excursion_depths_below_level(q, 1.0, opt).empty());
}
