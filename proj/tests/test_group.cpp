#include <cmath>

#include <doctest.h>

#include "oracle.hpp"
#include "qmorph/action.hpp"
#include "qmorph/errors.hpp"
#include "qmorph/word.hpp"

using namespace qmorph;

namespace {

Word W(const char* s) { return Word::parse(s); }

}  // namespace

TEST_CASE("free reduction") {
  CHECK(multiply(W("a"), W("A")).is_identity());
  CHECK(multiply(W("ab"), W("Ba")) == W("aa"));
  CHECK(multiply(Word(), W("aab")) == W("aab"));
  CHECK(W("aab").inverse() == W("BAA"));
  CHECK(power(W("aab"), 2) == W("aabaab"));
  CHECK(power(W("aab"), -1) == W("BAA"));
  CHECK(power(W("aab"), 0).is_identity());
  CHECK(W("aAb") == W("b"));
  CHECK_THROWS_AS(W("axb"), InputError);
}

TEST_CASE("cyclic reduction") {
  const CyclicReduction r1 = cyclic_reduce(W("abA"));
  CHECK(r1.core == W("b"));
  CHECK(r1.conjugator == W("a"));
  const CyclicReduction r2 = cyclic_reduce(W("aab"));
  CHECK(r2.core == W("aab"));
  CHECK(r2.conjugator.is_identity());
  const CyclicReduction r3 = cyclic_reduce(W("abbA"));
  CHECK(r3.core == W("bb"));
  CHECK(r3.conjugator == W("a"));

  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const Word w = testing::random_word(rng, 2, 1 + rng.below(9));
    const CyclicReduction r = cyclic_reduce(w);
    CHECK(is_cyclically_reduced(r.core));
    CHECK(multiply({r.conjugator, r.core, r.conjugator.inverse()}) == w);
  }
}

TEST_CASE("conjugacy in free groups") {
  CHECK(conjugacy_test(W("aab"), W("aba")));
  CHECK_FALSE(conjugacy_test(W("aab"), W("BAA")));
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const Word w = testing::random_word(rng, 2, 1 + rng.below(6));
    const Word g = testing::random_word(rng, 2, rng.below(6));
    CHECK(conjugacy_test(w, multiply({g, w, g.inverse()})));
  }
  CHECK_THROWS_AS(conjugacy_test(GroupModel::matrix({diagonal(2.0)}), W("a"), W("a")), UnsupportedError);
}

TEST_CASE("balls in free groups") {
  const std::vector<Word> b1 = ball(2, 1);
  CHECK(b1.size() == 5);
  CHECK(std::find(b1.begin(), b1.end(), W("B")) != b1.end());
  CHECK(ball(2, 2).size() == 17);
  CHECK(ball(1, 3).size() == 7);
  for (int r = 0; r <= 5; ++r) CHECK(ball(2, r).size() == ball_size(2, r));
  CHECK(ball(GroupModel::free(2), 3).size() == 53);
}

TEST_CASE("isometric actions") {
  const ModelSpace tree = ModelSpace::tree(2);
  const GroupModel f2 = GroupModel::free(2);
  CHECK(act(tree, f2.evaluate(W("aab")), tree_vertex(Word())) == tree_vertex(W("aab")));
  const ModelSpace h = ModelSpace::half_plane();
  const GroupModel m = GroupModel::matrix({diagonal(2.0)});
  const Point i4 = act(h, m.evaluate(W("a")), PlanePoint{0, 1});
  CHECK(i4.plane().x == doctest::Approx(0.0));
  CHECK(i4.plane().y == doctest::Approx(4.0));
  CHECK(act(h, m.identity(), PlanePoint{0.3, 2}) == Point(PlanePoint{0.3, 2}));

  const std::vector<Point> to = orbit_points(tree, f2.evaluate(W("aab")), tree_vertex(Word()), 2);
  REQUIRE(to.size() == 3);
  CHECK(to[2] == tree_vertex(W("aabaab")));
  const std::vector<Point> ho = orbit_points(h, m.evaluate(W("a")), PlanePoint{0, 1}, 2);
  CHECK(ho[2].plane().y == doctest::Approx(16.0));
  CHECK(orbit_points(h, m.evaluate(W("a")), PlanePoint{0, 1}, 0).size() == 1);
}

TEST_CASE("group actions preserve distances") {
  const ModelSpace h = ModelSpace::half_plane();
  const Mat2 r = rotation_about_i(1.0);
  const GroupModel m = GroupModel::matrix({diagonal(2.0), r * diagonal(3.0) * inverse(r)});
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const Word w = testing::random_word(rng, 2, 1 + rng.below(4));
    const Isometry g = m.evaluate(w);
    const Point x = PlanePoint{rng.uniform(-1, 1), rng.uniform(0.5, 2)};
    const Point y = PlanePoint{rng.uniform(-1, 1), rng.uniform(0.5, 2)};
    CHECK(distance(h, act(h, g, x), act(h, g, y)) == doctest::Approx(distance(h, x, y)).epsilon(1e-8));
    const Isometry gi = m.evaluate(w.inverse());
    CHECK(distance(h, act(h, gi, act(h, g, x)), x) < 1e-8);
  }
  const ModelSpace e = ModelSpace::euclidean(2);
  const GroupModel t = GroupModel::euclid({EuclidMotion::translation({1, 0}), EuclidMotion::translation({0, 2})});
  CHECK(act(e, t.evaluate(W("abA")), euclid_point({0, 0})) == euclid_point({0, 2}));
}
