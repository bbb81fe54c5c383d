#include "qmorph/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>

#include "qmorph/errors.hpp"

namespace qmorph {

namespace {

long count_occurrences(std::span<const Letter> w, std::span<const Letter> g) {
  if (w.size() > g.size()) return 0;
  long n = 0;
  for (std::size_t i = 0; i + w.size() <= g.size(); ++i) {
    if (std::equal(w.begin(), w.end(), g.begin() + static_cast<std::ptrdiff_t>(i))) ++n;
  }
  return n;
}

long count_periodic(std::span<const Letter> w, std::span<const Letter> c) {
  long n = 0;
  const std::size_t p = c.size();
  for (std::size_t i = 0; i < p; ++i) {
    bool hit = true;
    for (std::size_t k = 0; k < w.size() && hit; ++k) hit = c[(i + k) % p] == w[k];
    if (hit) ++n;
  }
  return n;
}

}  // namespace

long brooks(const Word& w, const Word& g) {
  if (w.is_identity()) throw InputError("Brooks counting needs a nontrivial word");
  const Word wi = w.inverse();
  return count_occurrences(w.letters(), g.letters()) - count_occurrences(wi.letters(), g.letters());
}

long cyclic_occurrences(const Word& w, const Word& c) {
  if (c.is_identity() || !is_cyclically_reduced(c)) throw InputError("periodic count needs a cyclically reduced word");
  return count_periodic(w.letters(), c.letters());
}

double homogenized_brooks(const Word& w, const Word& g) {
  if (w.is_identity()) throw InputError("Brooks counting needs a nontrivial word");
  const Word c = cyclic_reduce(g).core;
  if (c.is_identity()) return 0.0;
  return static_cast<double>(cyclic_occurrences(w, c) - cyclic_occurrences(w.inverse(), c));
}

Quasimorphism brooks_qm(const Word& w) {
  if (w.is_identity()) throw InputError("Brooks counting needs a nontrivial word");
  return Quasimorphism{"brooks(" + w.str() + ")", [w](const Word& g) { return static_cast<double>(brooks(w, g)); },
                       std::nullopt, false};
}

Quasimorphism homogenized_brooks_qm(const Word& w) {
  if (w.is_identity()) throw InputError("Brooks counting needs a nontrivial word");
  return Quasimorphism{"hbrooks(" + w.str() + ")", [w](const Word& g) { return homogenized_brooks(w, g); },
                       std::nullopt, true};
}

Quasimorphism homogenize_numeric(const Quasimorphism& phi, int n_max, double delta_hat) {
  if (n_max < 1) throw InputError("homogenization needs n_max >= 1");
  auto eval = phi.eval;
  return Quasimorphism{phi.name + "^" + std::to_string(n_max),
                       [eval, n_max](const Word& g) { return eval(power(g, n_max)) / n_max; },
                       delta_hat / n_max, false};
}

Quasimorphism word_length_qm() {
  return Quasimorphism{"length", [](const Word& g) { return static_cast<double>(g.length()); }, std::nullopt, true};
}

double exhaustive_defect(const Quasimorphism& phi, int rank, int radius) {
  const std::vector<Word> words = ball(rank, radius);
  std::vector<double> vals;
  vals.reserve(words.size());
  for (const Word& w : words) vals.push_back(phi(w));
  double worst = 0.0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < words.size(); ++j) {
      worst = std::max(worst, std::abs(phi(multiply(words[i], words[j])) - vals[i] - vals[j]));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------

FiniteExtension::FiniteExtension(int rank, std::vector<std::vector<int>> table, std::vector<std::vector<Word>> images)
    : rank_(rank), table_(std::move(table)), images_(std::move(images)) {
  const std::size_t n = table_.size();
  if (rank_ < 1 || rank_ > kMaxRank) throw InputError("extension base rank must be in 1..4");
  if (n == 0 || images_.size() != n) throw InputError("extension needs one automorphism per element of Sigma");
  for (const auto& row : table_) {
    if (row.size() != n) throw InputError("Sigma table must be square");
    for (int v : row) {
      if (v < 0 || static_cast<std::size_t>(v) >= n) throw InputError("Sigma table entry out of range");
    }
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (table_[0][s] != static_cast<int>(s) || table_[s][0] != static_cast<int>(s)) {
      throw InputError("element 0 of Sigma must be the identity");
    }
    if (images_[s].size() != static_cast<std::size_t>(rank_)) throw InputError("automorphism needs one image per generator");
    for (const Word& w : images_[s]) {
      if (w.max_generator() > rank_) throw InputError("automorphism image uses a generator outside the base");
    }
  }
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t u = 0; u < n; ++u) {
        const auto st = static_cast<std::size_t>(table_[s][t]);
        const auto tu = static_cast<std::size_t>(table_[t][u]);
        if (table_[st][u] != table_[s][tu]) throw InputError("Sigma table is not associative");
      }
    }
  }
  inverse_.assign(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (table_[s][t] == 0 && table_[t][s] == 0) inverse_[s] = static_cast<int>(t);
    }
    if (inverse_[s] < 0) throw InputError("Sigma element without inverse");
  }
  for (int i = 1; i <= rank_; ++i) {
    const Word gen = Word::generator(i);
    if (apply(0, gen) != gen) throw InputError("the identity of Sigma must act trivially");
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = 0; t < n; ++t) {
        if (apply(static_cast<int>(s), apply(static_cast<int>(t), gen)) != apply(table_[s][t], gen)) {
          throw InputError("Sigma action is not a homomorphism");
        }
      }
    }
  }
}

FiniteExtension FiniteExtension::trivial(int rank) {
  std::vector<Word> id;
  for (int i = 1; i <= rank; ++i) id.push_back(Word::generator(i));
  return FiniteExtension(rank, {{0}}, {id});
}

FiniteExtension FiniteExtension::letter_swap() {
  return FiniteExtension(2, {{0, 1}, {1, 0}},
                         {{Word::generator(1), Word::generator(2)}, {Word::generator(2), Word::generator(1)}});
}

Word FiniteExtension::apply(int s, const Word& h) const {
  const auto& img = images_[static_cast<std::size_t>(s)];
  Word out;
  for (Letter l : h.letters()) {
    const Word& piece = img[static_cast<std::size_t>(std::abs(l) - 1)];
    out = qmorph::multiply(out, l > 0 ? piece : piece.inverse());
  }
  return out;
}

GElem FiniteExtension::multiply(const GElem& x, const GElem& y) const {
  return GElem{qmorph::multiply(x.h, apply(x.sigma, y.h)), sigma_mul(x.sigma, y.sigma)};
}

GElem FiniteExtension::inverse(const GElem& x) const {
  const int si = sigma_inverse(x.sigma);
  return GElem{apply(si, x.h.inverse()), si};
}

GElem FiniteExtension::power(const GElem& x, int n) const {
  if (n < 0) return power(inverse(x), -n);
  GElem out{Word(), 0};
  for (int i = 0; i < n; ++i) out = multiply(out, x);
  return out;
}

std::vector<GElem> FiniteExtension::ball(int radius) const {
  std::vector<GElem> out;
  for (const Word& h : qmorph::ball(rank_, radius)) {
    for (int s = 0; s < order(); ++s) out.push_back(GElem{h, s});
  }
  return out;
}

std::string to_string(const GElem& g) { return "(" + g.h.str() + "," + std::to_string(g.sigma) + ")"; }

Quasimorphism sigma_act(const FiniteExtension& ext, int s, const Quasimorphism& phi) {
  if (s < 0 || s >= ext.order()) throw InputError("Sigma element out of range");
  auto eval = phi.eval;
  auto e = std::make_shared<const FiniteExtension>(ext);
  const int si = ext.sigma_inverse(s);
  return Quasimorphism{std::to_string(s) + "." + phi.name,
                       [eval, e, si](const Word& h) {
                         if (h.max_generator() > e->rank()) throw InputError("word is not in the base group");
                         return eval(e->apply(si, h));
                       },
                       phi.defect_bound, phi.homogeneous};
}

Quasimorphism orbit_average(const FiniteExtension& ext, const Quasimorphism& phi) {
  std::vector<Quasimorphism> parts;
  for (int s = 0; s < ext.order(); ++s) parts.push_back(sigma_act(ext, s, phi));
  std::optional<double> bound;
  if (phi.defect_bound) bound = *phi.defect_bound * ext.order();
  return Quasimorphism{"avg(" + phi.name + ")",
                       [parts](const Word& h) {
                         double sum = 0.0;
                         for (const auto& p : parts) sum += p(h);
                         return sum;
                       },
                       bound, phi.homogeneous};
}

double invariance_defect(const FiniteExtension& ext, const Quasimorphism& phi, int radius) {
  double worst = 0.0;
  for (const Word& h : ball(ext.rank(), radius)) {
    const double v = phi(h);
    for (int s = 1; s < ext.order(); ++s) worst = std::max(worst, std::abs(sigma_act(ext, s, phi)(h) - v));
  }
  return worst;
}

GQuasimorphism transfer_extend(const FiniteExtension& ext, const Quasimorphism& phi, int check_radius, double tol) {
  const double dev = invariance_defect(ext, phi, check_radius);
  if (dev > tol) throw InputError("transfer needs a Sigma-invariant quasimorphism (deviation " + std::to_string(dev) + ")");
  auto e = std::make_shared<const FiniteExtension>(ext);
  auto eval = phi.eval;
  const int N = ext.order();
  return GQuasimorphism{"transfer(" + phi.name + ")",
                        [e, eval, N](const GElem& g) {
                          const GElem gn = e->power(g, N);
                          if (gn.sigma != 0) throw NumericError("g^N left the base group");
                          return eval(gn.h) / N;
                        },
                        phi.homogeneous};
}

namespace {

// 3 bits per letter, 5 bits of length, 4 bits of sigma.
std::optional<std::uint64_t> pack(const GElem& g) {
  const auto letters = g.h.letters();
  if (letters.size() > 18 || g.sigma < 0 || g.sigma > 15) return std::nullopt;
  std::uint64_t key = static_cast<std::uint64_t>(g.sigma) | (static_cast<std::uint64_t>(letters.size()) << 4);
  int shift = 9;
  for (Letter l : letters) {
    if (l > 4 || l < -4) return std::nullopt;
    const auto code = static_cast<std::uint64_t>(l > 0 ? l - 1 : 3 - l);
    key |= code << shift;
    shift += 3;
  }
  return key;
}

}  // namespace

double extension_defect(const FiniteExtension& ext, const GQuasimorphism& ext_phi, int radius, GElem* wx, GElem* wy) {
  const std::vector<GElem> elems = ext.ball(radius);
  std::vector<double> vals;
  vals.reserve(elems.size());
  for (const GElem& g : elems) vals.push_back(ext_phi(g));
  std::unordered_map<std::uint64_t, double> memo;
  const auto value = [&](const GElem& g) {
    const std::optional<std::uint64_t> key = pack(g);
    if (!key) return ext_phi(g);
    const auto it = memo.find(*key);
    if (it != memo.end()) return it->second;
    const double v = ext_phi(g);
    memo.emplace(*key, v);
    return v;
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) {
      const double d = std::abs(value(ext.multiply(elems[i], elems[j])) - vals[i] - vals[j]);
      if (d > worst) {
        worst = d;
        if (wx != nullptr) *wx = elems[i];
        if (wy != nullptr) *wy = elems[j];
      }
    }
  }
  return worst;
}

RestrictionReport restriction_check(const FiniteExtension& ext, const GQuasimorphism& ext_phi,
                                    const Quasimorphism& phi, int radius, int defect_radius) {
  RestrictionReport rep;
  for (const Word& h : ball(ext.rank(), radius)) {
    const double d = std::abs(ext_phi(GElem{h, 0}) - phi(h));
    ++rep.words;
    if (d > rep.max_deviation) {
      rep.max_deviation = d;
      rep.worst = h;
    }
  }
  rep.defect = extension_defect(ext, ext_phi, defect_radius, &rep.defect_x, &rep.defect_y);
  return rep;
}

std::vector<HomogeneityViolation> homogeneity_suite(const Quasimorphism& phi, const std::vector<Word>& elements,
                                                    const std::vector<Word>& conjugators, int n_max, double tol) {
  std::vector<HomogeneityViolation> out;
  for (const Word& g : elements) {
    const double v = phi(g);
    for (int n = 2; n <= n_max; ++n) {
      const double vn = phi(power(g, n));
      if (std::abs(vn - n * v) > tol) out.push_back({"power", g, Word(), n, vn, n * v});
    }
    for (const Word& h : conjugators) {
      const double vc = phi(multiply({h, g, h.inverse()}));
      if (std::abs(vc - v) > tol) out.push_back({"conjugacy", g, h, 0, vc, v});
    }
  }
  return out;
}

}  // namespace qmorph
