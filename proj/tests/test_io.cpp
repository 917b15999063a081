#include <sstream>

#include "catbranch/io.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace catbranch;

TEST_CASE("forest round trip") {
  Rng rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    auto f = testutil::random_forest(rng);
    for (Node& n : f.nodes)
      if (n.children.empty()) n.death += 0.1;  // not a short binary fraction
    if (rep % 2) f = truncate(f, 0.7);
    std::ostringstream a;
    write_forest(a, f);
    std::istringstream in(a.str());
    auto g = read_forest(in);
    CHECK(ordered_isometric(f, g));
    CHECK(g.height_cap == f.height_cap);
    std::ostringstream b;
    write_forest(b, g);
    CHECK(a.str() == b.str());
  }
  FamilyForest inf;
  add_root(inf, 0.0, kInf);
  std::ostringstream s;
  write_forest(s, inf);
  CHECK(s.str() == "roots=0 height_cap=none\n0 -1 0 inf\n");
  std::istringstream bad("roots=0 height_cap=none\n0 -1 0\n");
  CHECK_THROWS_AS(read_forest(bad), InputError);
  std::istringstream cyc("roots=0 height_cap=none\n0 -1 0 1 1\n1 0 1 2 0\n");
  CHECK_THROWS_AS(read_forest(cyc), InputError);
}

TEST_CASE("forest -> contour -> forest is byte-identical") {
  Rng rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    auto f = tree_from_excursion(contour_from_forest(testutil::random_forest(rng), 2.0));
    std::ostringstream a, b;
    write_forest(a, f);
    write_forest(b, tree_from_excursion(contour_from_forest(f, 2.0)));
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("excursion, point process, paths, config") {
  auto e = contour_from_forest(testutil::cherry(), 2.0);
  std::ostringstream o;
  write_excursion(o, e);
  std::istringstream i(o.str());
  auto e2 = read_excursion(i);
  CHECK(e2.points == e.points);
  CHECK(e2.speed == 2.0);
  std::istringstream badex("speed=1\n0 0\n1 -1\n2 0\n");
  CHECK_THROWS_AS(read_excursion(badex), InputError);

  auto p = point_process_at_level(testutil::cherry(), 1.0, 0.25);
  std::ostringstream po;
  write_point_process(po, p);
  std::istringstream pi(po.str());
  auto p2 = read_point_process(pi);
  CHECK(p2.t == 1.0);
  CHECK(p2.spacing == 0.25);
  REQUIRE(p2.points.size() == 1);
  CHECK(p2.points[0].h == 0.5);

  MassPath m;
  m.times = {0.0, 0.1, 0.35};
  m.values = {1.0, 1.5, 1.0};
  std::ostringstream mo;
  write_mass_path(mo, m);
  std::istringstream mi(mo.str());
  auto m2 = read_mass_path(mi);
  CHECK(m2.times == m.times);
  CHECK(m2.values == m.values);

  DiffusionPath d = DiffusionPath::constant(0.3, 0.5, 0.1);
  d.seed = 42;
  std::ostringstream dout;
  write_diffusion_path(dout, d);
  std::istringstream din(dout.str());
  auto d2 = read_diffusion_path(din);
  CHECK(d2.values == d.values);
  CHECK(d2.seed == 42);
  CHECK(d2.dt == 0.1);

  std::istringstream kv("# comment\nn = 5\nseed=7 # trailing\n\nb1=2\n");
  auto m3 = read_key_values(kv);
  CHECK(m3.at("n") == "5");
  CHECK(m3.at("seed") == "7");
  CHECK(m3.size() == 3);
  std::istringstream bad("novalue\n");
  CHECK_THROWS_AS(read_key_values(bad), InputError);
  CHECK(parse_double(format_double(0.1)) == 0.1);
  CHECK_THROWS_AS(parse_double("1.2x"), InputError);
}
