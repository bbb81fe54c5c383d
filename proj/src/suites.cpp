#include "qmorph/suites.hpp"

#include <algorithm>
#include <cmath>

#include "qmorph/errors.hpp"

namespace qmorph {

namespace {

constexpr std::size_t kKeptViolations = 5;

Point vertex(Word w) { return Point(tree_vertex(std::move(w))); }

std::vector<double> random_tangent(Rng& rng, int dim, double scale) {
  std::vector<double> v(static_cast<std::size_t>(dim));
  for (;;) {
    double norm2 = 0.0;
    for (double& c : v) {
      c = rng.uniform(-1.0, 1.0);
      norm2 += c * c;
    }
    if (norm2 <= 1.0 && norm2 > 1e-12) break;
  }
  for (double& c : v) c *= scale;
  return v;
}


}  // namespace

Point origin(const ModelSpace& space) {
  switch (space.kind()) {
    case SpaceKind::Tree: return vertex(Word());
    case SpaceKind::HalfPlane: return Point(PlanePoint{0.0, 1.0});
    case SpaceKind::Euclidean: return Point(EuclidPoint{std::vector<double>(static_cast<std::size_t>(space.dim()), 0.0)});
    case SpaceKind::Product: return make_product_point(origin(space.left()), origin(space.right()));
  }
  return Point();
}

Point random_point(const ModelSpace& space, Rng& rng, const Point& center, double scale) {
  const std::vector<double> v = random_tangent(rng, space.tangent_dim(), rng.uniform() * scale);
  return exp_point(space, center, v);
}

DdSampler tree_dd_sampler(const ModelSpace& space, int radius) {
  return [space, radius](const DdSink& sink) {
    const std::vector<Word> words = ball(space.rank(), radius);
    std::vector<Point> pts;
    pts.reserve(words.size());
    for (const Word& w : words) pts.push_back(vertex(w));
    for (const Point& v : pts) sink(DdBundle{geodesic(space, pts.front(), v), pts});
  };
}

DdSampler random_dd_sampler(const ModelSpace& space, Rng rng, std::size_t count, std::size_t bundle, double scale) {
  return [space, rng, count, bundle, scale](const DdSink& sink) mutable {
    const Point o = origin(space);
    for (std::size_t i = 0; i < count; ++i) {
      const Point a = random_point(space, rng, o, scale);
      const Point b = random_point(space, rng, o, scale);
      DdBundle bun{geodesic(space, a, b), {}};
      for (std::size_t k = 0; k < bundle; ++k) bun.points.push_back(random_point(space, rng, o, scale));
      sink(bun);
    }
  };
}

FtSampler tree_ft_sampler(const ModelSpace& space, int radius, int move) {
  return [space, radius, move](const FtSink& sink) {
    const Point e = vertex(Word());
    const std::vector<Word> near = ball(space.rank(), move);
    for (const Word& b : ball(space.rank(), radius)) {
      for (const Word& a2 : near) {
        for (const Word& t : near) sink(FtQuad{e, vertex(b), vertex(a2), vertex(multiply(b, t))});
      }
    }
  };
}

FtSampler random_ft_sampler(const ModelSpace& space, Rng rng, std::size_t count, double scale, double move) {
  return [space, rng, count, scale, move](const FtSink& sink) mutable {
    const Point o = origin(space);
    for (std::size_t i = 0; i < count; ++i) {
      const Point a = random_point(space, rng, o, scale);
      const Point b = random_point(space, rng, o, scale);
      const Point a2 = random_point(space, rng, a, move);
      const Point b2 = random_point(space, rng, b, move);
      sink(FtQuad{a, b, a2, b2});
    }
  };
}

MetricReport metric_suite(const ModelSpace& space, Rng rng, std::size_t count, int tree_radius, double scale) {
  MetricReport rep;
  const double eps = space.tolerance();
  auto check_triple = [&](const Point& x, const Point& y, const Point& z) {
    ++rep.triples;
    const double gap = distance(space, x, z) - distance(space, x, y) - distance(space, y, z);
    rep.worst = std::max(rep.worst, gap);
    if (gap > eps) ++rep.triangle_violations;
  };
  auto check_segment = [&](const Point& x, const Point& y, const Point& z) {
    const Segment seg = geodesic(space, x, y);
    const double L = seg.length();
    for (double s : {0.0, 0.25 * L, 0.5 * L, 0.7 * L, L}) {
      for (double t : {0.1 * L, 0.6 * L, L}) {
        const double d = distance(space, seg.point_at(s), seg.point_at(t));
        if (std::abs(d - std::abs(s - t)) > eps * (1.0 + L)) ++rep.isometry_violations;
      }
    }
    const ProjectionResult p = project(space, z, seg);
    const ProjectionResult q = project(space, p.point, seg);
    if (distance(space, p.point, q.point) > std::max(eps, 1e-7) * (1.0 + L)) ++rep.idempotence_violations;
  };
  if (space.kind() == SpaceKind::Tree) {
    const std::vector<Word> words = ball(space.rank(), tree_radius);
    for (const Word& x : words) {
      for (const Word& y : words) {
        for (const Word& z : words) check_triple(vertex(x), vertex(y), vertex(z));
        check_segment(vertex(Word()), vertex(x), vertex(y));
      }
    }
    return rep;
  }
  const Point o = origin(space);
  for (std::size_t i = 0; i < count; ++i) {
    const Point x = random_point(space, rng, o, scale);
    const Point y = random_point(space, rng, o, scale);
    const Point z = random_point(space, rng, o, scale);
    check_triple(x, y, z);
    check_segment(x, y, z);
  }
  return rep;
}

void SuiteTally::add(LemmaCheck c) {
  switch (c.status) {
    case CheckStatus::Holds: ++holds; break;
    case CheckStatus::Skipped: ++skipped; break;
    case CheckStatus::Violated:
      ++violated;
      if (violations.size() < kKeptViolations) violations.push_back(std::move(c));
      break;
  }
}

std::size_t LemmaSuiteReport::violations() const {
  std::size_t n = 0;
  for (const auto& [name, t] : lemmas) n += t.violated;
  return n;
}

CertifyBudget reduced_budget() {
  CertifyBudget b;
  b.center_distances = {1.5, 2, 3, 4, 8};
  b.directions = 8;
  b.samples = 24;
  b.tree_tube = 2;
  return b;
}

LemmaSuiteReport tree_lemma_suite(const ModelSpace& space, const ConstantLedger& ledger, int radius,
                                  const CertifyBudget& budget) {
  LemmaSuiteReport rep;
  const int rank = space.rank();
  const Point e = vertex(Word());
  const std::vector<Word> words = ball(rank, radius);
  auto& thin = rep.lemmas["thin"];
  auto& lemma1 = rep.lemmas["lemma1"];
  for (const Word& b0 : words) {
    if (b0.is_identity()) continue;
    const Segment seg = geodesic(space, e, vertex(b0));
    for (const Word& c : words) {
      const Point cp = vertex(c);
      const Point b = project(space, cp, seg).point;
      thin.add(check_thin_triangle(space, e, b, cp, ledger));
      lemma1.add(check_reverse_triangle(space, e, b, cp, ledger));
    }
  }
  auto& cor = rep.lemmas["cor23"];
  const std::vector<Word> small = ball(rank, std::min(radius, 2));
  for (const Word& s : words) {
    if (s.is_identity()) continue;
    const Segment seg = geodesic(space, e, vertex(s));
    for (const Word& x : small) {
      for (const Word& y : small) {
        const Point u = project(space, vertex(x), seg).point;
        const Point v = project(space, vertex(y), seg).point;
        cor.add(check_cor23(space, geodesic(space, vertex(x), vertex(y)), geodesic(space, u, v), ledger));
      }
    }
  }
  auto& var = rep.lemmas["variation"];
  const std::vector<Word> mid = ball(rank, std::min(radius, 4));
  const std::vector<Word> anchors = ball(rank, std::min(radius, 3));
  for (const Word& b : mid) {
    if (b.is_identity()) continue;
    const Segment ab = geodesic(space, e, vertex(b));
    for (const Word& p : anchors) {
      for (const Word& t : small) {
        if (t.is_identity()) continue;
        var.add(check_variation(space, ab, geodesic(space, vertex(p), vertex(multiply(p, t))), ledger));
      }
    }
  }
  auto& stab = rep.lemmas["stability"];
  const std::vector<Word> unit = ball(rank, 1);
  for (const Word& b : mid) {
    if (b.is_identity()) continue;
    const Segment ab = geodesic(space, e, vertex(b));
    for (const Word& a2 : unit) {
      for (const Word& t : unit) stab.add(check_stability(space, ab, vertex(a2), vertex(multiply(b, t)), 1.0, ledger, budget));
    }
  }
  return rep;
}

LemmaSuiteReport random_lemma_suite(const ModelSpace& space, const ConstantLedger& ledger, std::size_t count, Rng rng,
                                    const CertifyBudget& budget, double scale) {
  if (space.kind() == SpaceKind::Tree) throw InputError("random lemma suites need a smooth model");
  LemmaSuiteReport rep;
  const Point o = origin(space);
  Rng r_thin = rng.split("thin");
  Rng r_cor = rng.split("cor23");
  Rng r_var = rng.split("variation");
  Rng r_stab = rng.split("stability");
  auto& thin = rep.lemmas["thin"];
  auto& lemma1 = rep.lemmas["lemma1"];
  for (std::size_t i = 0; i < count; ++i) {
    const Point a = random_point(space, r_thin, o, scale);
    const Point b0 = random_point(space, r_thin, o, scale);
    const Point c = random_point(space, r_thin, o, scale);
    const Point b = project(space, c, geodesic(space, a, b0)).point;
    thin.add(check_thin_triangle(space, a, b, c, ledger));
    lemma1.add(check_reverse_triangle(space, a, b, c, ledger));
  }
  auto& cor = rep.lemmas["cor23"];
  for (std::size_t i = 0; i < count; ++i) {
    const Segment seg = geodesic(space, random_point(space, r_cor, o, scale), random_point(space, r_cor, o, scale));
    const Point x = random_point(space, r_cor, o, 2.0 * scale);
    const Point y = random_point(space, r_cor, o, 2.0 * scale);
    const Point u = project(space, x, seg).point;
    const Point v = project(space, y, seg).point;
    cor.add(check_cor23(space, geodesic(space, x, y), geodesic(space, u, v), ledger));
  }
  auto& var = rep.lemmas["variation"];
  for (std::size_t i = 0; i < count; ++i) {
    const Segment pq = geodesic(space, random_point(space, r_var, o, scale), random_point(space, r_var, o, scale));
    Point a = random_point(space, r_var, o, 2.0 * scale);
    for (int tries = 0; tries < 16 && distance_to_segment(space, a, pq) < 1.0; ++tries) {
      a = random_point(space, r_var, o, 2.0 * scale);
    }
    const Point b = random_point(space, r_var, a, scale);
    var.add(check_variation(space, geodesic(space, a, b), pq, ledger));
  }
  auto& stab = rep.lemmas["stability"];
  const double D = 0.5;
  for (std::size_t i = 0; i < count; ++i) {
    const Point a = random_point(space, r_stab, o, scale);
    const Point b = random_point(space, r_stab, o, scale);
    const Point a2 = random_point(space, r_stab, a, D);
    const Point b2 = random_point(space, r_stab, b, D);
    stab.add(check_stability(space, geodesic(space, a, b), a2, b2, D, ledger, budget));
  }
  return rep;
}

LambdaSamples tree_lambda_samples(int radius, std::size_t max_pairs) {
  LambdaSamples s;
  const std::vector<Word> words = ball(2, radius);
  const std::size_t n = words.size();
  const std::size_t stride = std::max<std::size_t>(1, n * n / std::max<std::size_t>(1, max_pairs));
  for (std::size_t k = 0; k < n * n && s.pairs.size() < max_pairs; k += stride) {
    s.pairs.emplace_back(vertex(words[k / n]), vertex(words[k % n]));
  }
  const std::vector<Word> unit = ball(2, 1);
  for (std::size_t i = 0; i < s.pairs.size(); i += 7) {
    const auto& [a, b] = s.pairs[i];
    for (const Word& t : unit) {
      s.quads.push_back({{a, b}, {vertex(multiply(a.tree().vertex, t)), vertex(multiply(b.tree().vertex, unit[i % unit.size()]))}});
    }
  }
  for (const Word& c : words) {
    const auto letters = c.letters();
    for (std::size_t k = 0; k <= letters.size(); ++k) {
      const Word b = Word::from_reduced(std::vector<Letter>(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(k)));
      s.triples.emplace_back(vertex(Word()), vertex(b), vertex(c));
    }
  }
  s.group_elements = {Word::parse("a"), Word::parse("B"), Word::parse("aab"), Word::parse("bA")};
  return s;
}

}  // namespace qmorph
