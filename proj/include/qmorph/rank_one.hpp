#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmorph/action.hpp"
#include "qmorph/contraction.hpp"
#include "qmorph/space.hpp"

namespace qmorph {

// ---------------------------------------------------------------------------
// Rank-one certificates
// ---------------------------------------------------------------------------

struct RankOneStep {
  int n = 0;
  double displacement = 0.0;  // |x0 - x_n|
  double hausdorff = 0.0;     // sampled Hausdorff distance of orbit prefix and [x0, x_n]
  ContractionCertificate certificate;
};

struct RankOneCertificate {
  Word g;
  Point x0;
  double B = 0.0;
  int n_max = 0;
  std::vector<RankOneStep> steps;
  double epsilon0 = 0.0;  // min over n of |x0 - x_n| / n
  bool refuted = false;
  int failing_n = 0;
  std::string reason;  // "hausdorff", "contraction" or "growth" on refutation
};

/// Checks the orbit of g against [x0, g^n x0] for n = 1..n_max: Hausdorff
/// distance at most B (segment sampled at step B/2) and B-contraction at
/// the budget. Throws InputError for trivial g or n_max < 1.
RankOneCertificate rank_one_test(const ModelSpace& space, const GroupModel& group, const Word& g, const Point& x0,
                                 double B, int n_max, const CertifyBudget& budget = {});

struct IndependenceProfile {
  std::vector<double> profile;  // profile[R - 1] = min |x_m - y_n| over max(|m|, |n|) = R
  int grid_max = 0;
  double threshold = 0.0;
  bool increasing_tail = false;
  bool independent = false;
};

/// Properness evidence for (m, n) -> |g^m x0 - h^n x0| on the finite grid.
/// Independent means strictly increasing over the second half of the grid
/// and exceeding `threshold` at R = grid_max.
IndependenceProfile independence_test(const ModelSpace& space, const GroupModel& group, const Word& g, const Word& h,
                                      const Point& x0, int grid_max, double threshold);

struct ChainCheck {
  CheckStatus status = CheckStatus::Holds;
  std::string reason;
  double neighborhood = 0.0;  // max sampled distance from [x0, xk] to the chain
  double bound = 0.0;         // Phi_qg(B, C)
  std::optional<ContractionCertificate> certificate;
};

/// Piecewise-geodesic chain through `vertices`: checks that [x0, xk] lies in
/// the Phi_qg-neighborhood of the chain and is Phi_qg-contracting at budget.
ChainCheck chain_check(const ModelSpace& space, const std::vector<Point>& vertices, double B,
                       const ConstantLedger& ledger, const CertifyBudget& budget = {}, double step = 0.5);

struct SchottkyRow {
  Word word;           // over the two Schottky letters: a = g^N, b = h^N
  Word element;        // the group word w(g^N, h^N)
  double displacement = 0.0;
  double bound = 0.0;  // |word| * E
};

struct SchottkyResult {
  std::optional<int> N;
  std::vector<SchottkyRow> table;                 // for the returned N, or the last one tried
  std::vector<std::pair<int, double>> attempts;   // (N, min displacement / |w|)
};

/// Smallest even N <= n_budget with |x0 - w x0| >= |w| E - eps for every
/// reduced w of length <= word_len_max in g^N, h^N.
SchottkyResult schottky_exponent(const ModelSpace& space, const GroupModel& group, const Word& g, const Word& h,
                                 const Point& x0, double E, int word_len_max, int n_budget);

/// The word w(u, v): letter 1 -> u, letter 2 -> v.
Word substitute(const Word& w, const Word& u, const Word& v);

struct FlatRow {
  double B = 0.0;
  BallProbe probe;
  bool refuted = false;
};

/// Balls centered at height r + 1 over the middle of seg inside the flat
/// through it, with radius r = max(B, 1). Euclidean plane or a product
/// of two smooth factors.
std::vector<FlatRow> half_flat_control(const ModelSpace& space, const Segment& seg, const std::vector<double>& sweep,
                                       std::size_t samples = 64);

/// Center of the flat-control ball of radius r.
Point flat_center(const ModelSpace& space, const Segment& seg, double r);

}  // namespace qmorph
