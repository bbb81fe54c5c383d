#include "qmorph/expressway.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmorph/errors.hpp"

namespace qmorph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Shortest admissible path. Node 0 is the source, node 1 the sink, and
/// nodes 2 + 2i, 3 + 2i are the start and end of expressway i. Free edges
/// join every pair of nodes but may not follow another free edge.
struct Solved {
  double value = kInf;
  std::vector<int> nodes;
  std::vector<char> express;
};

template <class Dist>
Solved solve_admissible(std::size_t k, const Dist& dist, double express_cost) {
  const std::size_t v_count = 2 + 2 * k;
  const std::size_t s_count = 2 * v_count;
  std::vector<double> best(s_count, kInf);
  std::vector<int> prev(s_count, -1);
  std::vector<char> done(s_count, 0);
  best[0] = 0.0;  // state = 2 * node + arrived_by_free
  Solved out;
  for (;;) {
    std::size_t u = s_count;
    double bu = kInf;
    for (std::size_t s = 0; s < s_count; ++s) {
      if (!done[s] && best[s] < bu) {
        bu = best[s];
        u = s;
      }
    }
    if (u == s_count) break;
    done[u] = 1;
    const std::size_t node = u / 2;
    if (node == 1) {
      out.value = bu;
      for (int s = static_cast<int>(u); s >= 0; s = prev[static_cast<std::size_t>(s)]) {
        out.nodes.push_back(s / 2);
        out.express.push_back(static_cast<char>(s % 2 == 0));
      }
      std::reverse(out.nodes.begin(), out.nodes.end());
      std::reverse(out.express.begin(), out.express.end());
      // express[i] describes the edge into nodes[i]; shift to edges.
      out.express.erase(out.express.begin());
      return out;
    }
    if (u % 2 == 0) {
      for (std::size_t v = 0; v < v_count; ++v) {
        if (v == node) continue;
        const std::size_t t = 2 * v + 1;
        const double nd = bu + dist(node, v);
        if (nd < best[t]) {
          best[t] = nd;
          prev[t] = static_cast<int>(u);
        }
      }
    }
    if (node >= 2 && node % 2 == 0) {
      const std::size_t t = 2 * (node + 1);
      const double nd = bu + express_cost;
      if (nd < best[t]) {
        best[t] = nd;
        prev[t] = static_cast<int>(u);
      }
    }
  }
  return out;
}

struct LineExpressway {
  std::size_t from;
  std::size_t to;
};

bool matches(std::span<const Letter> path, std::size_t at, std::span<const Letter> pattern, bool inverted) {
  const std::size_t m = pattern.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Letter want = inverted ? -pattern[m - 1 - i] : pattern[i];
    if (path[at + i] != want) return false;
  }
  return true;
}

std::vector<LineExpressway> line_expressways(std::span<const Letter> path, std::span<const Letter> pattern) {
  std::vector<LineExpressway> out;
  const std::size_t m = pattern.size();
  if (m == 0 || m > path.size()) return out;
  for (std::size_t i = 0; i + m <= path.size(); ++i) {
    if (matches(path, i, pattern, false)) out.push_back({i, i + m});
    if (matches(path, i, pattern, true)) out.push_back({i + m, i});
  }
  return out;
}

Solved solve_line(std::span<const Letter> path, const std::vector<LineExpressway>& ex, double L) {
  std::vector<double> pos{0.0, static_cast<double>(path.size())};
  for (const auto& e : ex) {
    pos.push_back(static_cast<double>(e.from));
    pos.push_back(static_cast<double>(e.to));
  }
  return solve_admissible(
      ex.size(), [&](std::size_t i, std::size_t j) { return std::abs(pos[i] - pos[j]); }, L - 1.0);
}

Word prefix_word(const Word& w, std::size_t n) {
  const auto l = w.letters();
  return Word::from_reduced(std::vector<Letter>(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(n)));
}

}  // namespace

// ---------------------------------------------------------------------------

ExpresswaySystem::ExpresswaySystem(ModelSpace space, GroupModel group, Word w, Point x0, ConstantLedger ledger,
                                   ExpresswayPolicy policy)
    : space_(std::move(space)),
      group_(std::move(group)),
      word_(std::move(w)),
      x0_(std::move(x0)),
      ledger_(std::move(ledger)),
      policy_(policy) {
  if (word_.is_identity()) throw ConfigError("expressway word must be nontrivial");
  validate(space_, x0_);
  wx0_ = act(space_, group_.evaluate(word_), x0_);
  sigma_ = geodesic(space_, x0_, wx0_);
  if (sigma_.length() < 1.0) throw ConfigError("expressway length must be at least 1");
  margin_ = policy_.margin.value_or(ledger_.D + sigma_.length());
  if (!(margin_ >= 0.0)) throw ConfigError("enumeration margin must be nonnegative");
  if (space_.kind() == SpaceKind::Tree) {
    if (!x0_.tree().is_vertex()) throw ConfigError("tree basepoint must be a vertex");
    pattern_ = multiply({x0_.tree().vertex.inverse(), word_, x0_.tree().vertex});
    line_path_ = margin_ < 1.0;
  }
}

Translate ExpresswaySystem::translate(const Word& g) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    const auto it = cache_->translates.find(g);
    if (it != cache_->translates.end()) return Translate{g, it->second.first, it->second.second};
  }
  const Isometry iso = group_.evaluate(g);
  Point s = act(space_, iso, x0_);
  Point e = act(space_, iso, wx0_);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  const auto [it, inserted] = cache_->translates.try_emplace(g, std::move(s), std::move(e));
  return Translate{g, it->second.first, it->second.second};
}

std::vector<Translate> enumerate_relevant_expressways(const ExpresswaySystem& sys, const Point& a, const Point& b) {
  const ModelSpace& space = sys.space();
  const Segment ab = geodesic(space, a, b);
  const double margin = sys.margin();
  std::vector<Translate> out;
  auto push = [&](Translate t) {
    out.push_back(std::move(t));
    if (out.size() > sys.policy().max_expressways) {
      throw BudgetError("more than " + std::to_string(sys.policy().max_expressways) +
                        " relevant expressways (partial result discarded)");
    }
  };
  if (space.kind() == SpaceKind::Tree) {
    const int r = static_cast<int>(std::floor(margin));
    const std::size_t spine = static_cast<std::size_t>(ab.length()) + 3;
    if (ball_size(space.rank(), r) * spine > kBallWordCap) {
      throw BudgetError("tree enumeration margin " + std::to_string(margin) + " exceeds the ball cap");
    }
    const Word x0inv = sys.basepoint().tree().vertex.inverse();
    for (const Word& v : tree_tube_vertices(space, ab, r)) {
      Point end(tree_vertex(multiply(v, sys.pattern())));
      if (distance_to_segment(space, end, ab) > margin) continue;
      push(Translate{multiply(v, x0inv), Point(tree_vertex(v)), std::move(end)});
    }
    return out;
  }
  for (const Word& g : ball(sys.group(), sys.policy().group_radius)) {
    Translate t = sys.translate(g);
    if (distance_to_segment(space, t.start, ab) > margin) continue;
    if (distance_to_segment(space, t.end, ab) > margin) continue;
    push(std::move(t));
  }
  return out;
}

double line_lambda(std::span<const Letter> path, std::span<const Letter> pattern, double L) {
  const auto ex = line_expressways(path, pattern);
  if (ex.empty()) return static_cast<double>(path.size());
  return solve_line(path, ex, L).value;
}

ModifiedLengthResult modified_length(const ExpresswaySystem& sys, const Point& a, const Point& b) {
  const ModelSpace& space = sys.space();
  const double L = sys.length();
  ModifiedLengthResult res;
  if (sys.uses_line_path() && a.tree().is_vertex() && b.tree().is_vertex()) {
    validate(space, a);
    validate(space, b);
    const Word& av = a.tree().vertex;
    const Word path = multiply(av.inverse(), b.tree().vertex);
    const auto ex = line_expressways(path.letters(), sys.pattern().letters());
    const Solved s = solve_line(path.letters(), ex, L);
    res.value = s.value;
    res.candidates = ex.size();
    auto vertex_at = [&](int node) -> std::size_t {
      if (node == 0) return 0;
      if (node == 1) return path.length();
      const auto& e = ex[static_cast<std::size_t>((node - 2) / 2)];
      return node % 2 == 0 ? e.from : e.to;
    };
    auto point_at = [&](std::size_t k) { return Point(tree_vertex(multiply(av, prefix_word(path, k)))); };
    const Word x0inv = sys.basepoint().tree().vertex.inverse();
    for (std::size_t i = 0; i + 1 < s.nodes.size(); ++i) {
      PathStep step{point_at(vertex_at(s.nodes[i])), point_at(vertex_at(s.nodes[i + 1])), s.express[i] != 0, Word()};
      if (step.expressway) {
        ++res.expressways;
        step.g = multiply(step.from.tree().vertex, x0inv);
      }
      res.path.push_back(std::move(step));
    }
    return res;
  }
  const std::vector<Translate> ex = enumerate_relevant_expressways(sys, a, b);
  res.candidates = ex.size();
  std::vector<Point> nodes{a, b};
  for (const Translate& t : ex) {
    nodes.push_back(t.start);
    nodes.push_back(t.end);
  }
  const std::size_t n = nodes.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = dist[j * n + i] = distance(space, nodes[i], nodes[j]);
  }
  const Solved s = solve_admissible(
      ex.size(), [&](std::size_t i, std::size_t j) { return dist[i * n + j]; }, L - 1.0);
  res.value = s.value;
  for (std::size_t i = 0; i + 1 < s.nodes.size(); ++i) {
    const auto u = static_cast<std::size_t>(s.nodes[i]);
    const auto v = static_cast<std::size_t>(s.nodes[i + 1]);
    PathStep step{nodes[u], nodes[v], s.express[i] != 0, Word()};
    if (step.expressway) {
      ++res.expressways;
      step.g = ex[(u - 2) / 2].g;
    }
    res.path.push_back(std::move(step));
  }
  return res;
}

double phi_sigma(const ExpresswaySystem& sys, const Word& g) {
  if (sys.uses_line_path()) {
    const Word& q = sys.basepoint().tree().vertex;
    const Word fwd = multiply({q.inverse(), g, q});
    const Word back = fwd.inverse();
    const auto pat = sys.pattern().letters();
    return line_lambda(back.letters(), pat, sys.length()) - line_lambda(fwd.letters(), pat, sys.length());
  }
  const Point& x0 = sys.basepoint();
  const Point gx0 = act(sys.space(), sys.group().evaluate(g), x0);
  return modified_length(sys, gx0, x0).value - modified_length(sys, x0, gx0).value;
}

DefectReport defect_estimate(const ExpresswaySystem& sys, std::span<const std::pair<Word, Word>> pairs) {
  DefectReport rep;
  std::unordered_map<Word, double, WordHash> cache;
  auto phi = [&](const Word& w) {
    const auto it = cache.find(w);
    if (it != cache.end()) return it->second;
    const double v = phi_sigma(sys, w);
    cache.emplace(w, v);
    return v;
  };
  for (const auto& [g, h] : pairs) {
    const double d = std::abs(phi(multiply(g, h)) - phi(g) - phi(h));
    ++rep.pairs;
    if (d > rep.value || rep.pairs == 1) {
      rep.value = d;
      rep.g = g;
      rep.h = h;
    }
  }
  return rep;
}

DefectReport defect_exhaustive(const ExpresswaySystem& sys, int radius) {
  const std::vector<Word> words = ball(sys.group(), radius);
  std::vector<double> phis;
  phis.reserve(words.size());
  for (const Word& w : words) phis.push_back(phi_sigma(sys, w));
  DefectReport rep;
  const bool fast = sys.uses_line_path() && sys.basepoint().tree().vertex.is_identity();
  const auto pat = sys.pattern().letters();
  const double L = sys.length();
  std::vector<Letter> fwd;
  std::vector<Letter> back;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto gl = words[i].letters();
    for (std::size_t j = 0; j < words.size(); ++j) {
      double phi_gh = 0.0;
      if (fast) {
        const auto hl = words[j].letters();
        std::size_t cancel = 0;
        while (cancel < gl.size() && cancel < hl.size() && gl[gl.size() - 1 - cancel] == -hl[cancel]) ++cancel;
        fwd.assign(gl.begin(), gl.end() - static_cast<std::ptrdiff_t>(cancel));
        fwd.insert(fwd.end(), hl.begin() + static_cast<std::ptrdiff_t>(cancel), hl.end());
        back.resize(fwd.size());
        for (std::size_t k = 0; k < fwd.size(); ++k) back[k] = -fwd[fwd.size() - 1 - k];
        phi_gh = line_lambda(back, pat, L) - line_lambda(fwd, pat, L);
      } else {
        phi_gh = phi_sigma(sys, multiply(words[i], words[j]));
      }
      const double d = std::abs(phi_gh - phis[i] - phis[j]);
      ++rep.pairs;
      if (d > rep.value || rep.pairs == 1) {
        rep.value = d;
        rep.g = words[i];
        rep.h = words[j];
      }
    }
  }
  return rep;
}

Homogenized homogenize(const ExpresswaySystem& sys, const Word& g, int n_max, double delta_hat) {
  if (n_max < 1) throw InputError("homogenization needs n_max >= 1");
  const double n = static_cast<double>(n_max);
  return Homogenized{phi_sigma(sys, power(g, n_max)) / n, delta_hat / n};
}

int matrix_rank(std::vector<std::vector<double>> m, double tol) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size();
  const std::size_t cols = m.front().size();
  int rank = 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (std::abs(m[i][c]) > std::abs(m[piv][c])) piv = i;
    }
    if (std::abs(m[piv][c]) <= tol) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const double f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

IndependenceResult independence_matrix(const std::vector<const ExpresswaySystem*>& systems,
                                       const std::vector<Word>& testers, int n_max, double tol) {
  if (testers.size() < systems.size()) throw InputError("need at least as many testers as systems");
  IndependenceResult res;
  for (const ExpresswaySystem* sys : systems) {
    std::vector<double> row;
    for (const Word& t : testers) row.push_back(homogenize(*sys, t, n_max, 0.0).value);
    res.matrix.push_back(std::move(row));
  }
  res.rank = matrix_rank(res.matrix, tol);
  return res;
}

std::vector<LambdaViolation> check_lambda_properties(const ExpresswaySystem& sys, const LambdaSamples& samples) {
  const ModelSpace& space = sys.space();
  const double eps = space.tolerance();
  const double D = sys.ledger().D;
  std::vector<LambdaViolation> out;
  auto lam = [&](const Point& a, const Point& b) { return modified_length(sys, a, b).value; };
  for (const auto& [a, b] : samples.pairs) {
    const double l = lam(a, b);
    const double d = distance(space, a, b);
    if (l > d + eps) out.push_back({"upper bound", {a, b}, l, d});
    if (enumerate_relevant_expressways(sys, a, b).empty() && std::abs(l - d) > eps) {
      out.push_back({"no expressways", {a, b}, l, d});
    }
    for (const Word& g : samples.group_elements) {
      const Isometry iso = sys.group().evaluate(g);
      const double lg = lam(act(space, iso, a), act(space, iso, b));
      if (std::abs(lg - l) > eps) out.push_back({"invariance under " + g.str(), {a, b}, lg, l});
    }
  }
  for (const auto& [ab, ab2] : samples.quads) {
    const double diff = std::abs(lam(ab.first, ab.second) - lam(ab2.first, ab2.second));
    const double bound = distance(space, ab.first, ab2.first) + distance(space, ab.second, ab2.second);
    if (diff > bound + eps) out.push_back({"lipschitz", {ab.first, ab.second, ab2.first, ab2.second}, diff, bound});
  }
  for (const auto& [a, b, c] : samples.triples) {
    const double ac = lam(a, c);
    const double sum = lam(a, b) + lam(b, c);
    if (ac > sum + eps) out.push_back({"triangle", {a, b, c}, ac, sum});
    if (!(ac > sum - 2.0 * D - 1.0 - eps)) out.push_back({"coarse additivity", {a, b, c}, ac, sum - 2.0 * D - 1.0});
  }
  return out;
}

double witness_deviation(const ExpresswaySystem& sys, const Point& a, const Point& b,
                         const ModifiedLengthResult& result, double step) {
  const ModelSpace& space = sys.space();
  const Segment ab = geodesic(space, a, b);
  double worst = 0.0;
  for (const PathStep& s : result.path) {
    const Segment piece = geodesic(space, s.from, s.to);
    for (const Point& p : sample_segment(piece, step)) worst = std::max(worst, distance_to_segment(space, p, ab));
  }
  return worst;
}

}  // namespace qmorph
