#include <doctest.h>

#include "oracle.hpp"
#include "qmorph/algebra.hpp"
#include "qmorph/errors.hpp"

using namespace qmorph;

namespace {

Word W(const char* s) { return Word::parse(s); }

long scan_count(const Word& w, const Word& g) {
  const std::string hay = g.str();
  const std::string needle = w.str();
  long n = 0;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) n += hay.compare(i, needle.size(), needle) == 0;
  return n;
}

}  // namespace

TEST_CASE("Brooks counting functions") {
  CHECK(brooks(W("aab"), W("aabaab")) == 2);
  CHECK(brooks(W("aab"), W("BAA")) == -1);
  CHECK(brooks(W("aab"), Word()) == 0);
  Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    const Word g = testing::random_word(rng, 2, rng.below(12));
    CHECK(brooks(W("aab"), g) == scan_count(W("aab"), g) - scan_count(W("BAA"), g));
    CHECK(brooks(W("aba"), g) == scan_count(W("aba"), g) - scan_count(W("ABA"), g));
  }
}

TEST_CASE("homogenized Brooks functions are homogeneous and conjugation invariant") {
  const Quasimorphism hb = homogenized_brooks_qm(W("aab"));
  std::vector<Word> elems;
  for (const Word& g : ball(2, 4)) {
    if (!g.is_identity()) elems.push_back(g);
  }
  CHECK(homogeneity_suite(hb, elems, ball(2, 2), 5, 1e-12).empty());
  CHECK(hb(W("aab")) == 1.0);
  CHECK(hb(W("aba")) == 1.0);
  Rng rng(32);
  for (int i = 0; i < 50; ++i) {
    const Word g = testing::random_word(rng, 2, 1 + rng.below(6));
    const double v = static_cast<double>(brooks(W("aab"), power(g, 64))) / 64;
    CHECK(std::abs(v - hb(g)) <= 1.0 / 64 + 1e-12);
  }
}

TEST_CASE("homogeneity suite negative controls") {
  std::vector<Word> elems;
  for (const Word& g : ball(2, 3)) {
    if (!g.is_identity()) elems.push_back(g);
  }
  const auto raw = homogeneity_suite(brooks_qm(W("aab")), elems, ball(2, 1), 3, 1e-12);
  CHECK_FALSE(raw.empty());
  CHECK(std::any_of(raw.begin(), raw.end(), [](const HomogeneityViolation& v) { return v.kind == "conjugacy"; }));
  const auto len = homogeneity_suite(word_length_qm(), {W("abA")}, {}, 2, 1e-12);
  REQUIRE(len.size() == 1);
  CHECK(len[0].value == 4.0);
  CHECK(len[0].expected == 6.0);
  CHECK(homogeneity_suite(word_length_qm(), {W("aab")}, {}, 4, 1e-12).empty());
}

TEST_CASE("sigma action and orbit averages on the letter swap") {
  const FiniteExtension ext = FiniteExtension::letter_swap();
  CHECK(ext.order() == 2);
  CHECK(ext.apply(1, W("aab")) == W("bba"));
  const Quasimorphism b = brooks_qm(W("aab"));
  CHECK(sigma_act(ext, 1, b)(W("aab")) == 0.0);
  CHECK(sigma_act(ext, 0, b)(W("aab")) == 1.0);
  const Quasimorphism avg = orbit_average(ext, b);
  CHECK(avg(W("aab")) == 1.0);
  CHECK(avg(W("bba")) == 1.0);
  CHECK(invariance_defect(ext, orbit_average(ext, homogenized_brooks_qm(W("aab"))), 5) == 0.0);
  CHECK(invariance_defect(ext, b, 3) > 0.0);

  const FiniteExtension triv = FiniteExtension::trivial(2);
  for (const Word& g : ball(2, 3)) CHECK(orbit_average(triv, b)(g) == b(g));
}

TEST_CASE("extension group law") {
  const FiniteExtension ext = FiniteExtension::letter_swap();
  const GElem s{Word(), 1};
  CHECK(ext.multiply(s, s) == GElem{Word(), 0});
  CHECK(ext.multiply(ext.multiply(s, GElem{W("a"), 0}), s) == GElem{W("b"), 0});
  for (const GElem& x : ext.ball(2)) {
    CHECK(ext.multiply(x, ext.inverse(x)) == GElem{Word(), 0});
    for (const GElem& y : ext.ball(1)) {
      for (const GElem& z : ext.ball(1)) {
        CHECK(ext.multiply(ext.multiply(x, y), z) == ext.multiply(x, ext.multiply(y, z)));
      }
    }
  }
  CHECK_THROWS_AS(FiniteExtension(2, {{0, 1}, {1, 0}}, {{W("a"), W("b")}, {W("a"), W("a")}}), InputError);
}

TEST_CASE("transfer extensions") {
  const FiniteExtension triv = FiniteExtension::trivial(2);
  const Quasimorphism b = brooks_qm(W("aab"));
  const GQuasimorphism tb = transfer_extend(triv, b);
  for (const Word& g : ball(2, 3)) CHECK(tb(GElem{g, 0}) == b(g));
  CHECK(restriction_check(triv, tb, b, 4, 2).max_deviation == 0.0);

  const FiniteExtension ext = FiniteExtension::letter_swap();
  const Quasimorphism avg = orbit_average(ext, homogenized_brooks_qm(W("aab")));
  const GQuasimorphism t = transfer_extend(ext, avg);
  for (const Word& g : ball(2, 4)) {
    CHECK(t(GElem{g, 0}) == avg(power(g, 2)) / 2);
    CHECK(t(GElem{g, 0}) == avg(g));
  }
  CHECK(t(GElem{Word(), 1}) == 0.0);
  CHECK_THROWS_AS(transfer_extend(ext, b), InputError);

  const RestrictionReport r = restriction_check(ext, t, avg, 5, 3);
  CHECK(r.max_deviation == 0.0);
  CHECK(r.defect > 0.0);
  CHECK(extension_defect(ext, t, 4) - r.defect <= 1.0);
}

TEST_CASE("numeric homogenization brackets the exact value") {
  const Quasimorphism raw = brooks_qm(W("aab"));
  const double delta = exhaustive_defect(raw, 2, 3);
  const Quasimorphism num = homogenize_numeric(raw, 64, delta);
  const Quasimorphism exact = homogenized_brooks_qm(W("aab"));
  for (const Word& g : ball(2, 3)) CHECK(std::abs(num(g) - exact(g)) <= *num.defect_bound + 1e-12);
}
