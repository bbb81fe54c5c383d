#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qmorph/word.hpp"

namespace qmorph {

/// A real-valued function on the free group, with its claimed properties.
struct Quasimorphism {
  std::string name;
  std::function<double(const Word&)> eval;
  std::optional<double> defect_bound;
  bool homogeneous = false;

  double operator()(const Word& g) const { return eval(g); }
};

/// Overlapping occurrences of w in the reduced word g minus those of w^-1.
/// Throws InputError for trivial w.
long brooks(const Word& w, const Word& g);

/// Occurrences of w in the bi-infinite periodic word ...ccc... starting in
/// one period, for cyclically reduced nontrivial c.
long cyclic_occurrences(const Word& w, const Word& c);

/// lim brooks(w, g^n) / n, computed from the cyclic core of g.
double homogenized_brooks(const Word& w, const Word& g);

Quasimorphism brooks_qm(const Word& w);
Quasimorphism homogenized_brooks_qm(const Word& w);

/// g -> phi(g^n) / n with error bar delta_hat / n.
Quasimorphism homogenize_numeric(const Quasimorphism& phi, int n_max, double delta_hat);

Quasimorphism word_length_qm();

/// max |phi(gh) - phi(g) - phi(h)| over all pairs of words of length <= radius.
double exhaustive_defect(const Quasimorphism& phi, int rank, int radius);

// ---------------------------------------------------------------------------
// Finite extensions
// ---------------------------------------------------------------------------

/// Element (h, s) of a split extension H x| Sigma.
struct GElem {
  Word h;
  int sigma = 0;
  bool operator==(const GElem&) const = default;
};

/// Split extension 1 -> F_k -> G -> Sigma -> 1. Sigma is given by its
/// multiplication table with identity 0, and sigma acts on H by the
/// automorphism sending generator i to images[sigma][i - 1]. The section is
/// s -> (e, s), and conjugation by it is that automorphism.
class FiniteExtension {
 public:
  /// Verifies the table, the inverse of each element, that each map is an
  /// automorphism and that the action is a homomorphism on generators.
  FiniteExtension(int rank, std::vector<std::vector<int>> table, std::vector<std::vector<Word>> images);

  static FiniteExtension trivial(int rank);
  /// F_2 x| Z/2 with the generator swapping a and b.
  static FiniteExtension letter_swap();

  [[nodiscard]] int rank() const { return rank_; }
  [[nodiscard]] int order() const { return static_cast<int>(table_.size()); }
  [[nodiscard]] int sigma_mul(int s, int t) const { return table_[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)]; }
  [[nodiscard]] int sigma_inverse(int s) const { return inverse_[static_cast<std::size_t>(s)]; }

  /// alpha_s(h) = s~ h s~^-1.
  [[nodiscard]] Word apply(int s, const Word& h) const;
  [[nodiscard]] GElem multiply(const GElem& x, const GElem& y) const;
  [[nodiscard]] GElem inverse(const GElem& x) const;
  [[nodiscard]] GElem power(const GElem& x, int n) const;
  /// Elements (h, s) with |h| <= radius, for every s.
  [[nodiscard]] std::vector<GElem> ball(int radius) const;

 private:
  int rank_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  std::vector<std::vector<Word>> images_;
};

std::string to_string(const GElem& g);

/// h -> phi(s~^-1 h s~).
Quasimorphism sigma_act(const FiniteExtension& ext, int s, const Quasimorphism& phi);

/// Sum over Sigma of s . phi.
Quasimorphism orbit_average(const FiniteExtension& ext, const Quasimorphism& phi);

/// Largest |(s . phi)(h) - phi(h)| over all s and all h with |h| <= radius.
double invariance_defect(const FiniteExtension& ext, const Quasimorphism& phi, int radius);

struct GQuasimorphism {
  std::string name;
  std::function<double(const GElem&)> eval;
  bool homogeneous = false;

  double operator()(const GElem& g) const { return eval(g); }
};

/// g -> phi(g^N) / N with N = |Sigma|. Throws InputError unless phi is
/// Sigma-invariant within tol on words of length <= check_radius.
GQuasimorphism transfer_extend(const FiniteExtension& ext, const Quasimorphism& phi, int check_radius = 4,
                               double tol = 1e-9);

struct RestrictionReport {
  std::size_t words = 0;
  double max_deviation = 0.0;  // max |phi~(h, e) - phi(h)|
  Word worst;
  double defect = 0.0;         // sampled defect of phi~ over G-pairs
  GElem defect_x, defect_y;
};

/// Restriction of phi~ to words of length <= radius against phi, and the
/// defect of phi~ over all G-pairs with |h| <= defect_radius.
RestrictionReport restriction_check(const FiniteExtension& ext, const GQuasimorphism& ext_phi,
                                    const Quasimorphism& phi, int radius, int defect_radius);

/// Defect of phi~ over all pairs of ext.ball(radius).
double extension_defect(const FiniteExtension& ext, const GQuasimorphism& ext_phi, int radius, GElem* wx = nullptr,
                        GElem* wy = nullptr);

struct HomogeneityViolation {
  std::string kind;  // "power" or "conjugacy"
  Word g;
  Word h;            // conjugator, for "conjugacy"
  int n = 0;         // exponent, for "power"
  double value = 0.0;
  double expected = 0.0;
};

/// phi(g^n) = n phi(g) for 2 <= n <= n_max and phi(h g h^-1) = phi(g),
/// within tol.
std::vector<HomogeneityViolation> homogeneity_suite(const Quasimorphism& phi, const std::vector<Word>& elements,
                                                    const std::vector<Word>& conjugators, int n_max, double tol);

}  // namespace qmorph
