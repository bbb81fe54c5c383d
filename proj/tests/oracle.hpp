#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <utility>
#include <vector>

#include "qmorph/rng.hpp"
#include "qmorph/word.hpp"

namespace qmorph::testing {

/// Modified length in the Cayley tree of F_2 computed by Dijkstra over the
/// given vertices: unit edges, plus an edge v -> v * pattern of weight
/// |pattern| - 1 for every vertex v.
inline double lambda_over(const std::vector<Word>& verts, const Word& pattern, const Word& from, const Word& to) {
  std::map<Word, std::size_t> index;
  for (std::size_t i = 0; i < verts.size(); ++i) index.emplace(verts[i], i);
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(verts.size());
  const double shortcut = static_cast<double>(pattern.length()) - 1.0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (Letter l : {1, -1, 2, -2}) {
      const auto it = index.find(multiply(verts[i], Word::generator(l)));
      if (it != index.end()) adj[i].emplace_back(it->second, 1.0);
    }
    const auto it = index.find(multiply(verts[i], pattern));
    if (it != index.end()) adj[i].emplace_back(it->second, shortcut);
  }
  std::vector<double> dist(verts.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const std::size_t s = index.at(from);
  const std::size_t t = index.at(to);
  dist[s] = 0.0;
  pq.emplace(0.0, s);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u == t) return d;
    for (const auto& [v, w] : adj[u]) {
      if (d + w < dist[v]) {
        dist[v] = d + w;
        pq.emplace(dist[v], v);
      }
    }
  }
  return dist[t];
}

inline double tree_lambda_oracle(const Word& pattern, const Word& from, const Word& to, int radius) {
  return lambda_over(ball(2, radius), pattern, from, to);
}

/// Vertices within `tube` of the geodesic [from, to], by breadth-first search
/// from each vertex of the geodesic.
inline std::vector<Word> tube_vertices(const Word& from, const Word& to, int tube) {
  std::vector<Word> geo;
  const Word step = multiply(from.inverse(), to);
  for (std::size_t i = 0; i <= step.length(); ++i) {
    const auto l = step.letters().subspan(0, i);
    geo.push_back(multiply(from, Word::from_letters(l)));
  }
  std::map<Word, int> seen;
  std::vector<Word> frontier;
  for (const Word& v : geo) {
    if (seen.emplace(v, 0).second) frontier.push_back(v);
  }
  for (int d = 1; d <= tube; ++d) {
    std::vector<Word> next;
    for (const Word& v : frontier) {
      for (Letter l : {1, -1, 2, -2}) {
        const Word u = multiply(v, Word::generator(l));
        if (seen.emplace(u, d).second) next.push_back(u);
      }
    }
    frontier = std::move(next);
  }
  std::vector<Word> out;
  for (const auto& [w, d] : seen) out.push_back(w);
  return out;
}

/// As tree_lambda_oracle, over the vertices within `tube` of [from, to].
inline double tube_lambda_oracle(const Word& pattern, const Word& from, const Word& to, int tube) {
  return lambda_over(tube_vertices(from, to, tube), pattern, from, to);
}

/// lambda(g, e) - lambda(e, g) from the oracle.
inline double tree_phi_oracle(const Word& pattern, const Word& g, int radius) {
  return tree_lambda_oracle(pattern, g, Word(), radius) - tree_lambda_oracle(pattern, Word(), g, radius);
}

/// Uniform reduced word of the given length in F_rank.
inline Word random_word(Rng& rng, int rank, std::size_t length) {
  std::vector<Letter> letters;
  while (letters.size() < length) {
    auto l = static_cast<Letter>(rng.below(static_cast<std::uint64_t>(rank)) + 1);
    if (rng.below(2) == 1) l = -l;
    if (!letters.empty() && letters.back() == -l) continue;
    letters.push_back(l);
  }
  return Word::from_letters(letters);
}

}  // namespace qmorph::testing
