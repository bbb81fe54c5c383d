#pragma once

#include <map>
#include <string>
#include <vector>

#include "qmorph/contraction.hpp"
#include "qmorph/expressway.hpp"
#include "qmorph/rng.hpp"
#include "qmorph/space.hpp"

namespace qmorph {

/// i for the half-plane, the origin for Euclidean space, componentwise for products.
Point origin(const ModelSpace& space);

/// exp of a uniformly random tangent vector of length <= scale at center.
Point random_point(const ModelSpace& space, Rng& rng, const Point& center, double scale);

/// Tree: segments [e, v] with the bundle of all vertices, v in ball(radius).
DdSampler tree_dd_sampler(const ModelSpace& space, int radius);
/// Smooth models: `count` random segments with bundles of `bundle` points.
DdSampler random_dd_sampler(const ModelSpace& space, Rng rng, std::size_t count, std::size_t bundle, double scale);

/// Tree: a = e, b in ball(radius), a', b' within `move` of a, b.
FtSampler tree_ft_sampler(const ModelSpace& space, int radius, int move);
FtSampler random_ft_sampler(const ModelSpace& space, Rng rng, std::size_t count, double scale, double move);

struct MetricReport {
  std::size_t triples = 0;
  std::size_t triangle_violations = 0;
  std::size_t isometry_violations = 0;  // |point_at(s) - point_at(t)| != |s - t|
  std::size_t idempotence_violations = 0;
  double worst = 0.0;
};

/// Triangle inequality, segment parametrization and projection idempotence
/// on the tree ball or on random smooth samples.
MetricReport metric_suite(const ModelSpace& space, Rng rng, std::size_t count, int tree_radius, double scale);

struct SuiteTally {
  std::size_t holds = 0;
  std::size_t violated = 0;
  std::size_t skipped = 0;
  std::vector<LemmaCheck> violations;  // first few
  void add(LemmaCheck c);
};

struct LemmaSuiteReport {
  std::map<std::string, SuiteTally> lemmas;  // thin, lemma1, cor23, variation, stability
  [[nodiscard]] std::size_t violations() const;
};

/// Exhaustive tree configurations with a = e and points of length <= radius.
LemmaSuiteReport tree_lemma_suite(const ModelSpace& space, const ConstantLedger& ledger, int radius,
                                  const CertifyBudget& budget);

/// `count` seeded configurations per lemma in a smooth model.
LemmaSuiteReport random_lemma_suite(const ModelSpace& space, const ConstantLedger& ledger, std::size_t count, Rng rng,
                                    const CertifyBudget& budget, double scale = 3.0);

/// Budget used by the smooth suites.
CertifyBudget reduced_budget();

/// Vertex pairs, quadruples and collinear triples of the tree ball, plus
/// group elements for the invariance clause.
LambdaSamples tree_lambda_samples(int radius, std::size_t max_pairs);

}  // namespace qmorph
