#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qmorph/action.hpp"
#include "qmorph/space.hpp"

namespace qmorph {

struct WpdReport {
  Word g;
  double c = 0.0;
  int M = 0;
  int radius = 0;
  std::vector<Word> elements;  // gamma with both displacements <= c
  [[nodiscard]] std::size_t count() const { return elements.size(); }
};

/// Elements of ball(radius) moving both x0 and g^M x0 by at most c.
WpdReport wpd_count(const ModelSpace& space, const GroupModel& group, const Word& g, const Point& x0, double c, int M,
                    int radius);

struct WpdStability {
  WpdReport inner;
  WpdReport outer;  // radius + 2
  bool stable = false;
};

/// The matching set does not grow when the radius increases by 2.
WpdStability wpd_stability(const ModelSpace& space, const GroupModel& group, const Word& g, const Point& x0, double c,
                           int M, int radius);

struct EquivWitness {
  Word gamma;
  int m = 0;
  int n = 0;
  double hausdorff = 0.0;
};

/// True if [x0, g^m x0] and gamma [x0, h^n x0] are K-Hausdorff equivalent
/// with matching orientation (start within K of start, end within K of end).
bool equiv_holds(const ModelSpace& space, const GroupModel& group, const Word& g, const Word& h, const Point& x0,
                 const EquivWitness& w, double K, double step = 0.5, double* measured = nullptr);

/// First witness in the order m, n, gamma (ball order), or none at budget.
std::optional<EquivWitness> equiv_search(const ModelSpace& space, const GroupModel& group, const Word& g,
                                         const Word& h, const Point& x0, double K, int power_max, int radius,
                                         double step = 0.5);

/// The witness for (h, g) obtained from one for (g, h).
EquivWitness symmetric_witness(const EquivWitness& w);

/// First (m, n) in 1..power_max with g^m conjugate to h^n.
std::optional<std::pair<int, int>> conjugate_power_test(const Word& g, const Word& h, int power_max);

struct FamilyBudget {
  int N = 2;              // Schottky exponent
  int power_max = 4;      // for conjugate_power_test
  int max_candidates = 32;
  bool commutator = true;
};

/// Members f_i = [g1^N, g2^{N i}] (commutator flag) or g1^N g2^{N i},
/// accepted when f_i^{+-1} has no power conjugate to a power of any earlier
/// member or of f_i^-1. Throws BudgetError if fewer than count are found.
std::vector<Word> build_family(const Word& g1, const Word& g2, int count, const FamilyBudget& budget = {});

}  // namespace qmorph
