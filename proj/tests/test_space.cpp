#include <cmath>

#include <doctest.h>

#include "oracle.hpp"
#include "qmorph/errors.hpp"
#include "qmorph/space.hpp"
#include "qmorph/suites.hpp"

using namespace qmorph;

namespace {

Point tv(const char* w) { return tree_vertex(Word::parse(w)); }
Point hp(double x, double y) { return PlanePoint{x, y}; }

}  // namespace

TEST_CASE("distances on the model spaces") {
  CHECK(distance(ModelSpace::tree(2), tv("ab"), tv("a")) == 1.0);
  CHECK(distance(ModelSpace::half_plane(), hp(0, 1), hp(0, 4)) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  const ModelSpace prod = ModelSpace::product(ModelSpace::tree(2), ModelSpace::euclidean(1));
  const Point p = make_product_point(tv(""), euclid_point({0}));
  const Point q = make_product_point(tv("a"), euclid_point({1}));
  CHECK(distance(prod, p, q) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("geodesics are parametrized by arclength") {
  const ModelSpace tree = ModelSpace::tree(2);
  CHECK(geodesic(tree, tv(""), tv("ab")).point_at(1) == tv("a"));
  const ModelSpace h = ModelSpace::half_plane();
  const Point mid = geodesic(h, hp(0, 1), hp(0, 4)).point_at(std::log(2.0));
  CHECK(mid.plane().x == doctest::Approx(0.0));
  CHECK(mid.plane().y == doctest::Approx(2.0));
  CHECK(geodesic(ModelSpace::euclidean(2), euclid_point({0, 0}), euclid_point({3, 4})).length() == 5.0);

  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const Point a = random_point(h, rng, origin(h), 3.0);
    const Point b = random_point(h, rng, origin(h), 3.0);
    const Segment s = geodesic(h, a, b);
    const double t0 = rng.uniform() * s.length();
    const double t1 = rng.uniform() * s.length();
    CHECK(distance(h, s.point_at(t0), s.point_at(t1)) == doctest::Approx(std::abs(t1 - t0)).epsilon(1e-6));
    CHECK(distance(h, s.point_at(0), a) < 1e-9);
    CHECK(distance(h, s.point_at(s.length()), b) < 1e-7);
  }
}

TEST_CASE("tree segments through edge points") {
  const ModelSpace tree = ModelSpace::tree(2);
  const Point x = tree_point(Word::parse("a"), 2, 0.25);
  const Point y = tree_point(Word::parse("B"), -1, 0.5);
  CHECK(distance(tree, x, y) == doctest::Approx(2.75));
  const Segment s = geodesic(tree, x, y);
  CHECK(distance(tree, s.point_at(0.25), tv("a")) == doctest::Approx(0.0));
  CHECK(distance(tree, s.point_at(1.25), tv("")) == doctest::Approx(0.0));
}

TEST_CASE("projections") {
  const ModelSpace tree = ModelSpace::tree(2);
  const ProjectionResult t = project(tree, tv("ba"), geodesic(tree, tv(""), tv("aa")));
  CHECK(t.point == tv(""));
  CHECK(t.distance == 2.0);

  const ModelSpace h = ModelSpace::half_plane();
  const ProjectionResult p = project(h, hp(1, 1), geodesic(h, hp(0, 0.5), hp(0, 4)));
  CHECK(p.point.plane().x == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(p.point.plane().y == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(p.distance == doctest::Approx(std::acosh(std::sqrt(2.0))).epsilon(1e-9));

  const ModelSpace e = ModelSpace::euclidean(2);
  const ProjectionResult q = project(e, euclid_point({1, 1}), geodesic(e, euclid_point({0, 0}), euclid_point({2, 0})));
  CHECK(q.point == euclid_point({1, 0}));
  CHECK(q.distance == 1.0);
}

TEST_CASE("closed-form projections agree with golden-section search") {
  Rng rng(2);
  for (const ModelSpace& s : {ModelSpace::half_plane(), ModelSpace::euclidean(2)}) {
    for (int i = 0; i < 200; ++i) {
      const Segment seg = geodesic(s, random_point(s, rng, origin(s), 3.0), random_point(s, rng, origin(s), 3.0));
      const Point x = random_point(s, rng, origin(s), 4.0);
      CHECK(project(s, x, seg).distance == doctest::Approx(project_golden(s, x, seg).distance).epsilon(1e-7));
    }
  }
}

TEST_CASE("tree projections match a brute-force scan of segment vertices") {
  const ModelSpace tree = ModelSpace::tree(2);
  const std::vector<Word> pts = ball(2, 3);
  for (const Word& b : ball(2, 3)) {
    const Segment seg = geodesic(tree, tv(""), tree_vertex(b));
    const std::vector<Word> on = seg.tree_vertices();
    for (const Word& x : pts) {
      std::size_t best = 1000;
      for (const Word& v : on) best = std::min(best, word_distance(x, v));
      CHECK(project(tree, tree_vertex(x), seg).distance == static_cast<double>(best));
    }
  }
}

TEST_CASE("axiom DD") {
  const ModelSpace tree = ModelSpace::tree(2);
  CHECK(check_dd(tree, tree_dd_sampler(tree, 3), 1.0).empty());
  const ModelSpace e = ModelSpace::euclidean(2);
  CHECK(check_dd(e, random_dd_sampler(e, Rng(3), 250, 4, 3.0), 0.0).empty());
  CHECK_FALSE(check_dd(e, random_dd_sampler(e, Rng(3), 10, 4, 3.0), -1.0).empty());
  const ModelSpace h = ModelSpace::half_plane().with_tolerance(1e-6);
  CHECK(check_dd(h, random_dd_sampler(h, Rng(4), 250, 4, 3.0), 0.0).empty());
}

TEST_CASE("axiom FT") {
  const ModelSpace e = ModelSpace::euclidean(2);
  CHECK(check_ft(e, random_ft_sampler(e, Rng(5), 1000, 3.0, 1.0), 0.0).empty());
  const ModelSpace tree = ModelSpace::tree(2);
  CHECK(check_ft(tree, tree_ft_sampler(tree, 4, 1), 0.0).empty());
  const ModelSpace h = ModelSpace::half_plane().with_tolerance(1e-6);
  CHECK(check_ft(h, random_ft_sampler(h, Rng(6), 1000, 3.0, 1.0), 0.0).empty());
}

TEST_CASE("metric suite") {
  for (const ModelSpace& s : {ModelSpace::tree(2), ModelSpace::half_plane().with_tolerance(1e-6),
                              ModelSpace::euclidean(2),
                              ModelSpace::product(ModelSpace::half_plane(), ModelSpace::euclidean(1)).with_tolerance(1e-6)}) {
    const MetricReport m = metric_suite(s, Rng(7), 300, 2, 3.0);
    CHECK(m.triples > 0);
    CHECK(m.triangle_violations == 0);
    CHECK(m.isometry_violations == 0);
    CHECK(m.idempotence_violations == 0);
  }
}

TEST_CASE("invalid points are rejected") {
  CHECK_THROWS_AS(validate(ModelSpace::half_plane(), hp(0, -1)), InputError);
  CHECK_THROWS_AS(validate(ModelSpace::tree(2), tv("ac")), InputError);
}
