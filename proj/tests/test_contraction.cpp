#include <cmath>

#include <doctest.h>

#include "qmorph/contraction.hpp"
#include "qmorph/errors.hpp"
#include "qmorph/suites.hpp"

using namespace qmorph;

namespace {

Point tv(const char* w) { return tree_vertex(Word::parse(w)); }
Point hp(double x, double y) { return PlanePoint{x, y}; }

}  // namespace

TEST_CASE("constant ledger entries") {
  CHECK(phi::subseg(1, 1) == 8.0);
  CHECK(phi::thin(1, 1) == 5.0);
  CHECK(phi::proj(1, 1, 2) == 9.0);
  CHECK(phi::lemma1(1, 1) == 3.0);
  CHECK(phi::var(1, 1) == 5.0);
  const ConstantLedger l = phi_table(1, 1);
  CHECK(l.B_prime == 8.0);
  CHECK(l.D == phi::hn(1, 1));
  CHECK(l.table.at("thin") == 5.0);
  CHECK_THROWS_AS(phi_table(0, 1), InputError);
  CHECK(ledger_monotonicity_violations({0.25, 0.5, 1, 2, 4, 8}).empty());
}

TEST_CASE("projection diameter of balls off a Euclidean line") {
  const ModelSpace e = ModelSpace::euclidean(2);
  const Segment seg = geodesic(e, euclid_point({-40, 0}), euclid_point({40, 0}));
  for (double h : {2.0, 4.0, 7.0, 20.0}) {
    const double d = projection_diameter_under_ball(e, seg, euclid_point({0, h}), h - 1, 64);
    CHECK(d <= 2 * (h - 1) + 1e-9);
    CHECK(d >= 0.95 * 2 * (h - 1));
  }
  CHECK(projection_diameter_under_ball(e, seg, euclid_point({0, 3}), 0.0, 64) == 0.0);
  CHECK_THROWS_AS(probe_ball(e, seg, euclid_point({0, 1}), 2.0, 64), InputError);
}

TEST_CASE("tree balls disjoint from a segment project to a point") {
  const ModelSpace tree = ModelSpace::tree(2);
  const Segment seg = geodesic(tree, tv(""), tv("aab"));
  for (const Word& c : ball(2, 4)) {
    const Point center = tree_vertex(c);
    const double d = distance_to_segment(tree, center, seg);
    if (d < 1.0) continue;
    for (double r = 0; r < d; r += 1.0) CHECK(projection_diameter_under_ball(tree, seg, center, r, 0) == 0.0);
  }
}

TEST_CASE("contraction certificates") {
  const ModelSpace tree = ModelSpace::tree(2);
  const ContractionCertificate t = certify_contracting(tree, geodesic(tree, tv(""), tv("aab")), 1.0);
  CHECK_FALSE(t.refuted());
  CHECK(t.max_diameter == 0.0);
  CHECK(t.balls_checked > 0);

  const ModelSpace e = ModelSpace::euclidean(2);
  const Segment line = geodesic(e, euclid_point({0, 0}), euclid_point({30, 0}));
  const ContractionCertificate r = certify_contracting(e, line, 10.0);
  REQUIRE(r.refuted());
  REQUIRE(r.witness);
  CHECK(r.witness->diameter >= 10.0);
  CHECK(replay_witness(e, line, *r.witness, 10.0, r.budget.samples));
  BallProbe bad = *r.witness;
  bad.diameter += 1.0;
  CHECK_FALSE(replay_witness(e, line, bad, 10.0, r.budget.samples));

  const ModelSpace h = ModelSpace::half_plane().with_tolerance(1e-6);
  const Segment axis = geodesic(h, hp(0, 1), hp(0, std::exp(4.0)));
  CHECK(axis.length() == doctest::Approx(4.0));
  bool found = false;
  for (double B : {1.0, 2.0, 3.0, 4.0, 5.0}) {
    if (!certify_contracting(h, axis, B, reduced_budget()).refuted()) {
      found = true;
      break;
    }
  }
  CHECK(found);
}

TEST_CASE("lemma checkers on hand-computed tree configurations") {
  const ModelSpace tree = ModelSpace::tree(2);
  const ConstantLedger l = phi_table(1, 1);
  const LemmaCheck thin = check_thin_triangle(tree, tv(""), tv("aa"), tv("aab"), l);
  CHECK_FALSE(thin.violated());
  CHECK(thin.value == 0.0);
  CHECK_FALSE(check_thin_triangle(tree, tv("a"), tv("a"), tv("a"), l).violated());

  const LemmaCheck rev = check_reverse_triangle(tree, tv(""), tv("aa"), tv("aaaa"), l);
  CHECK_FALSE(rev.violated());
  CHECK(rev.value == 0.0);
  CHECK(rev.bound == 3.0);

  const Segment ab = geodesic(tree, tv(""), tv("aaaaa"));
  const Segment pq = geodesic(tree, tv("b"), tv("bb"));
  CHECK_FALSE(check_variation(tree, ab, pq, l).violated());
  CHECK_FALSE(check_variation(tree, geodesic(tree, tv(""), tv("")), pq, l).violated());

  const LemmaCheck st = check_stability(tree, ab, tv("b"), tv("aaaaab"), 1.0, l);
  CHECK(st.status == CheckStatus::Holds);
  CHECK(check_stability(tree, ab, tv(""), tv("aaaaa"), 0.0, l).status == CheckStatus::Holds);
  CHECK(phi::stab(1, 1, 0) >= 1.0);
}

TEST_CASE("half-plane stability under endpoint perturbation") {
  const ModelSpace h = ModelSpace::half_plane().with_tolerance(1e-6);
  const ConstantLedger l = phi_table(1, 2);
  const Segment axis = geodesic(h, hp(0, 1), hp(0, 8));
  const Point a2 = PlanePoint{std::sinh(0.5), std::cosh(0.5)};
  const LemmaCheck st = check_stability(h, axis, a2, hp(0, 8 * std::exp(0.5)), 0.5, l, reduced_budget());
  CHECK(st.status == CheckStatus::Holds);
}

TEST_CASE("lemma suites on small tree balls") {
  const ModelSpace tree = ModelSpace::tree(2);
  const LemmaSuiteReport rep = tree_lemma_suite(tree, phi_table(1, 1), 3, reduced_budget());
  CHECK(rep.violations() == 0);
  for (const auto& [name, t] : rep.lemmas) {
    INFO(name);
    CHECK(t.holds > 0);
  }
}
