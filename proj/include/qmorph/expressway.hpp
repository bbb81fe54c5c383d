#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qmorph/action.hpp"
#include "qmorph/contraction.hpp"
#include "qmorph/space.hpp"

namespace qmorph {

struct ExpresswayPolicy {
  /// Both endpoints of a translate must lie within this distance of [a, b].
  /// Unset means D + L with D the ledger's neighborhood constant.
  std::optional<double> margin;
  /// Candidate group ball for models other than the tree.
  int group_radius = 4;
  /// Upper bound on the number of translates in one admissible graph.
  std::size_t max_expressways = 4096;
};

/// The translate g * sigma.
struct Translate {
  Word g;
  Point start;
  Point end;
};

/// Oriented base segment sigma = [x0, w x0] and the collection of its
/// group translates.
class ExpresswaySystem {
 public:
  /// Throws ConfigError if |sigma| < 1 (negative expressway weights) or w is trivial.
  ExpresswaySystem(ModelSpace space, GroupModel group, Word w, Point x0, ConstantLedger ledger,
                   ExpresswayPolicy policy = {});

  [[nodiscard]] const ModelSpace& space() const { return space_; }
  [[nodiscard]] const GroupModel& group() const { return group_; }
  [[nodiscard]] const Word& word() const { return word_; }
  [[nodiscard]] const Point& basepoint() const { return x0_; }
  [[nodiscard]] const Segment& sigma() const { return sigma_; }
  [[nodiscard]] double length() const { return sigma_.length(); }
  [[nodiscard]] double margin() const { return margin_; }
  [[nodiscard]] const ConstantLedger& ledger() const { return ledger_; }
  [[nodiscard]] const ExpresswayPolicy& policy() const { return policy_; }
  /// |sigma| > Phi_HN, the length hypothesis of the construction.
  [[nodiscard]] bool length_hypothesis() const { return length() > ledger_.D; }
  /// Tree model with margin < 1: translates are read off the geodesic word.
  [[nodiscard]] bool uses_line_path() const { return line_path_; }
  /// x0^-1 w x0 as a word: the label of sigma read from start to end (tree).
  [[nodiscard]] const Word& pattern() const { return pattern_; }

  /// The translate g * sigma, computed once per g.
  [[nodiscard]] Translate translate(const Word& g) const;

 private:
  ModelSpace space_;
  GroupModel group_;
  Word word_;
  Point x0_;
  Point wx0_;
  Segment sigma_;
  ConstantLedger ledger_;
  ExpresswayPolicy policy_;
  double margin_ = 0.0;
  bool line_path_ = false;
  Word pattern_;
  struct Cache {
    std::mutex mutex;
    std::unordered_map<Word, std::pair<Point, Point>, WordHash> translates;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Translates with both endpoints within the margin of [a, b], in a
/// deterministic order. Throws BudgetError when the candidate set exceeds
/// the enumeration cap.
std::vector<Translate> enumerate_relevant_expressways(const ExpresswaySystem& sys, const Point& a, const Point& b);

struct PathStep {
  Point from;
  Point to;
  bool expressway = false;
  Word g;  // the translate, for expressway steps
};

struct ModifiedLengthResult {
  double value = 0.0;
  std::vector<PathStep> path;
  int expressways = 0;
  std::size_t candidates = 0;
};

ModifiedLengthResult modified_length(const ExpresswaySystem& sys, const Point& a, const Point& b);

/// Modified length between two vertices of the tree joined by the reduced
/// word `path`, with sigma labelled by `pattern`; only translates lying on
/// the geodesic are used.
double line_lambda(std::span<const Letter> path, std::span<const Letter> pattern, double L);

/// lambda(g x0, x0) - lambda(x0, g x0).
double phi_sigma(const ExpresswaySystem& sys, const Word& g);

struct DefectReport {
  double value = 0.0;
  Word g;
  Word h;
  std::size_t pairs = 0;
};

/// max |phi(gh) - phi(g) - phi(h)| over the given pairs.
DefectReport defect_estimate(const ExpresswaySystem& sys, std::span<const std::pair<Word, Word>> pairs);

/// Exhaustive defect over all pairs of words of length <= radius.
DefectReport defect_exhaustive(const ExpresswaySystem& sys, int radius);

struct Homogenized {
  double value = 0.0;
  double error_bound = 0.0;
};

/// phi(g^n)/n and the bound delta_hat/n.
Homogenized homogenize(const ExpresswaySystem& sys, const Word& g, int n_max, double delta_hat);

struct IndependenceResult {
  std::vector<std::vector<double>> matrix;
  int rank = 0;
};

/// Numerical rank with partial pivoting.
int matrix_rank(std::vector<std::vector<double>> m, double tol = 1e-6);

IndependenceResult independence_matrix(const std::vector<const ExpresswaySystem*>& systems,
                                       const std::vector<Word>& testers, int n_max, double tol = 1e-6);

struct LambdaSamples {
  std::vector<std::pair<Point, Point>> pairs;                  // bounds, invariance, no-expressway clause
  std::vector<std::pair<std::pair<Point, Point>, std::pair<Point, Point>>> quads;  // Lipschitz
  std::vector<std::tuple<Point, Point, Point>> triples;        // b on [a, c]
  std::vector<Word> group_elements;                            // invariance
};

struct LambdaViolation {
  std::string property;
  std::vector<Point> points;
  double value = 0.0;
  double bound = 0.0;
};

std::vector<LambdaViolation> check_lambda_properties(const ExpresswaySystem& sys, const LambdaSamples& samples);

/// Largest distance from [a, b] of points sampled along the witness path.
double witness_deviation(const ExpresswaySystem& sys, const Point& a, const Point& b,
                         const ModifiedLengthResult& result, double step = 0.5);

}  // namespace qmorph
