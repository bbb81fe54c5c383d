#include "qmorph/wpd.hpp"

#include <algorithm>

#include "qmorph/errors.hpp"

namespace qmorph {

WpdReport wpd_count(const ModelSpace& space, const GroupModel& group, const Word& g, const Point& x0, double c, int M,
                    int radius) {
  if (M < 0) throw InputError("WPD power must be nonnegative");
  WpdReport rep{g, c, M, radius, {}};
  if (c < 0.0) return rep;
  const double eps = space.tolerance();
  const Point y0 = act(space, group.evaluate(power(g, M)), x0);
  for (const Word& gamma : ball(group, radius)) {
    const Isometry iso = group.evaluate(gamma);
    if (distance(space, x0, act(space, iso, x0)) > c + eps) continue;
    if (distance(space, y0, act(space, iso, y0)) > c + eps) continue;
    rep.elements.push_back(gamma);
  }
  return rep;
}

WpdStability wpd_stability(const ModelSpace& space, const GroupModel& group, const Word& g, const Point& x0, double c,
                           int M, int radius) {
  WpdStability s;
  s.inner = wpd_count(space, group, g, x0, c, M, radius);
  s.outer = wpd_count(space, group, g, x0, c, M, radius + 2);
  s.stable = s.inner.elements == s.outer.elements;
  return s;
}

namespace {

struct Pieces {
  Segment base;
  Segment moved;
};

Pieces equiv_pieces(const ModelSpace& space, const GroupModel& group, const Word& g, const Word& h, const Point& x0,
                    const EquivWitness& w) {
  const Isometry gam = group.evaluate(w.gamma);
  const Point s = act(space, gam, x0);
  const Point e = act(space, group.evaluate(multiply(w.gamma, power(h, w.n))), x0);
  return {geodesic(space, x0, act(space, group.evaluate(power(g, w.m)), x0)), geodesic(space, s, e)};
}

}  // namespace

bool equiv_holds(const ModelSpace& space, const GroupModel& group, const Word& g, const Word& h, const Point& x0,
                 const EquivWitness& w, double K, double step, double* measured) {
  const Pieces p = equiv_pieces(space, group, g, h, x0, w);
  const double eps = space.tolerance();
  const double ends = std::max(distance(space, p.base.start(), p.moved.start()),
                               distance(space, p.base.end(), p.moved.end()));
  const double haus = std::max(ends, hausdorff(space, p.base, p.moved, step));
  if (measured != nullptr) *measured = haus;
  return haus <= K + eps;
}

std::optional<EquivWitness> equiv_search(const ModelSpace& space, const GroupModel& group, const Word& g,
                                         const Word& h, const Point& x0, double K, int power_max, int radius,
                                         double step) {
  const double eps = space.tolerance();
  const std::vector<Word> gammas = ball(group, radius);
  std::vector<Point> starts;
  starts.reserve(gammas.size());
  for (const Word& gamma : gammas) starts.push_back(act(space, group.evaluate(gamma), x0));
  for (int m = 1; m <= power_max; ++m) {
    const Point gm = act(space, group.evaluate(power(g, m)), x0);
    for (int n = 1; n <= power_max; ++n) {
      const Word hn = power(h, n);
      for (std::size_t i = 0; i < gammas.size(); ++i) {
        if (distance(space, x0, starts[i]) > K + eps) continue;
        const Point end = act(space, group.evaluate(multiply(gammas[i], hn)), x0);
        if (distance(space, gm, end) > K + eps) continue;
        EquivWitness w{gammas[i], m, n, 0.0};
        if (equiv_holds(space, group, g, h, x0, w, K, step, &w.hausdorff)) return w;
      }
    }
  }
  return std::nullopt;
}

EquivWitness symmetric_witness(const EquivWitness& w) { return EquivWitness{w.gamma.inverse(), w.n, w.m, w.hausdorff}; }

std::optional<std::pair<int, int>> conjugate_power_test(const Word& g, const Word& h, int power_max) {
  if (g.is_identity() || h.is_identity()) throw InputError("conjugate power test needs nontrivial elements");
  for (int m = 1; m <= power_max; ++m) {
    const Word gm = power(g, m);
    for (int n = 1; n <= power_max; ++n) {
      if (conjugacy_test(gm, power(h, n))) return std::make_pair(m, n);
    }
  }
  return std::nullopt;
}

std::vector<Word> build_family(const Word& g1, const Word& g2, int count, const FamilyBudget& budget) {
  if (count < 1) throw InputError("family size must be positive");
  if (conjugate_power_test(g1, g2, budget.power_max)) throw InputError("family generators have conjugate powers");
  const Word G = power(g1, budget.N);
  const Word H = power(g2, budget.N);
  std::vector<Word> out;
  for (int i = 1; i <= budget.max_candidates && static_cast<int>(out.size()) < count; ++i) {
    const Word Hi = power(H, i);
    const Word f = budget.commutator ? multiply({G, Hi, G.inverse(), Hi.inverse()}) : multiply(G, Hi);
    const Word core = cyclic_reduce(f).core;
    if (core.is_identity()) continue;
    if (conjugate_power_test(core, core.inverse(), budget.power_max)) continue;
    bool fresh = true;
    for (const Word& e : out) {
      if (conjugate_power_test(core, e, budget.power_max) || conjugate_power_test(core, e.inverse(), budget.power_max)) {
        fresh = false;
        break;
      }
    }
    if (fresh) out.push_back(core);
  }
  if (static_cast<int>(out.size()) < count) {
    throw BudgetError("found " + std::to_string(out.size()) + " of " + std::to_string(count) + " family members");
  }
  return out;
}

}  // namespace qmorph
