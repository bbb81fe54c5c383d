#include <doctest.h>

#include "qmorph/errors.hpp"
#include "qmorph/wpd.hpp"

using namespace qmorph;

namespace {

Word W(const char* s) { return Word::parse(s); }
const ModelSpace kTree = ModelSpace::tree(2);
const GroupModel kF2 = GroupModel::free(2);
const Point kE = tree_vertex(Word());

}  // namespace

TEST_CASE("WPD counts") {
  for (const char* g : {"aab", "ab", "b"}) {
    const WpdReport r = wpd_count(kTree, kF2, W(g), kE, 0.0, 4, 6);
    REQUIRE(r.count() == 1);
    CHECK(r.elements.front().is_identity());
  }
  const WpdStability s = wpd_stability(kTree, kF2, W("aab"), kE, 2.0, 4, 6);
  CHECK(s.stable);
  CHECK(s.inner.count() == s.outer.count());
  CHECK(s.outer.radius == 8);
  CHECK(wpd_count(kTree, kF2, W("aab"), kE, -1.0, 4, 6).count() == 0);
}

TEST_CASE("WPD sets grow with c but stay finite") {
  const WpdReport small = wpd_count(kTree, kF2, W("aab"), kE, 2.0, 4, 6);
  const WpdReport wide = wpd_count(kTree, kF2, W("aab"), kE, 4.0, 4, 6);
  CHECK(wide.count() >= small.count());
  for (const Word& g : wide.elements) CHECK(g.length() <= 4);
}

TEST_CASE("Hausdorff-equivalent orbit segments") {
  const auto w = equiv_search(kTree, kF2, W("aab"), W("aaabA"), kE, 2.0, 5, 4);
  REQUIRE(w);
  CHECK(w->m == w->n);
  CHECK(w->gamma == W("A"));
  CHECK(equiv_holds(kTree, kF2, W("aab"), W("aaabA"), kE, *w, 2.0));
  CHECK(equiv_holds(kTree, kF2, W("aaabA"), W("aab"), kE, symmetric_witness(*w), 2.0));

  const auto same = equiv_search(kTree, kF2, W("aab"), W("aab"), kE, 2.0, 5, 4);
  REQUIRE(same);
  CHECK(same->gamma.is_identity());
  CHECK(same->m == 1);
  CHECK(same->n == 1);

  CHECK_FALSE(equiv_search(kTree, kF2, W("aab"), W("BAA"), kE, 2.0, 5, 6));
}

TEST_CASE("conjugate powers") {
  const auto c = conjugate_power_test(W("aab"), W("aba"), 4);
  REQUIRE(c);
  CHECK(*c == std::pair{1, 1});
  CHECK_FALSE(conjugate_power_test(W("aab"), W("BAA"), 6));
  const auto p = conjugate_power_test(W("aabaab"), W("aab"), 4);
  REQUIRE(p);
  CHECK(*p == std::pair{1, 2});
}

TEST_CASE("families of mutually non-conjugate elements") {
  const std::vector<Word> two = build_family(W("aab"), W("bba"), 2);
  REQUIRE(two.size() == 2);
  for (const Word& f : two) {
    CHECK(is_cyclically_reduced(f));
    CHECK(exponent_sums(f, 2) == std::vector<long>{0, 0});
    CHECK_FALSE(conjugate_power_test(f, f.inverse(), 4));
  }
  CHECK_FALSE(conjugate_power_test(two[0], two[1], 4));
  CHECK_FALSE(conjugate_power_test(two[0], two[1].inverse(), 4));

  FamilyBudget plain;
  plain.commutator = false;
  const std::vector<Word> one = build_family(W("aab"), W("bba"), 1, plain);
  REQUIRE(one.size() == 1);
  CHECK_FALSE(conjugate_power_test(one[0], one[0].inverse(), 4));

  FamilyBudget tiny;
  tiny.max_candidates = 1;
  CHECK_THROWS_AS(build_family(W("aab"), W("bba"), 3, tiny), BudgetError);
}
