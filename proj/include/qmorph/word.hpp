#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qmorph {

/// Signed generator index: +k is the k-th generator, -k its inverse (k >= 1).
using Letter = int;

/// Largest free rank that has a letter in the string format (a..d).
inline constexpr int kMaxRank = 4;

/// A freely reduced word in the generators of a free group.
///
/// String format: lowercase letters a, b, c, d are generators, the matching
/// capital is the inverse, and "e" is the identity.
class Word {
 public:
  Word() = default;

  /// Reduces the input freely.
  static Word from_letters(std::span<const Letter> letters);
  static Word from_letters(std::initializer_list<Letter> letters) {
    return from_letters(std::span<const Letter>(letters.begin(), letters.size()));
  }
  /// Throws InputError on unknown characters.
  static Word parse(std::string_view text);

  /// Throws InputError if the letters are not freely reduced.
  static Word from_reduced(std::vector<Letter> letters);

  static Word generator(Letter l) { return Word(std::vector<Letter>{l}); }

  [[nodiscard]] std::string str() const;
  [[nodiscard]] std::span<const Letter> letters() const { return letters_; }
  [[nodiscard]] std::size_t length() const { return letters_.size(); }
  [[nodiscard]] bool is_identity() const { return letters_.empty(); }
  [[nodiscard]] Letter operator[](std::size_t i) const { return letters_[i]; }
  [[nodiscard]] Letter back() const { return letters_.back(); }
  [[nodiscard]] Word inverse() const;
  /// Largest generator index that occurs.
  [[nodiscard]] int max_generator() const;

  auto operator<=>(const Word&) const = default;
  bool operator==(const Word&) const = default;

 private:
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  std::vector<Letter> letters_;
};

char letter_char(Letter l);
Letter char_letter(char c);

Word multiply(const Word& u, const Word& v);
Word multiply(std::initializer_list<Word> factors);
/// n may be negative.
Word power(const Word& w, long n);
/// Appends a letter to w (with cancellation).
Word append(const Word& w, Letter l);

/// Length of the longest common prefix.
std::size_t common_prefix(const Word& u, const Word& v);
/// |u^-1 v|, computed without allocating.
inline std::size_t word_distance(const Word& u, const Word& v) {
  return u.length() + v.length() - 2 * common_prefix(u, v);
}

struct CyclicReduction {
  Word core;
  Word conjugator;
};

/// w = conjugator * core * conjugator^-1 with core cyclically reduced.
CyclicReduction cyclic_reduce(const Word& w);
bool is_cyclically_reduced(const Word& w);

/// Free-group conjugacy: cyclic cores are rotations of each other.
bool conjugacy_test(const Word& u, const Word& v);

/// Exponent sum of each generator 1..rank.
std::vector<long> exponent_sums(const Word& w, int rank);

/// Lexicographic generator order used everywhere: a < A < b < B < ...
std::vector<Letter> generator_order(int rank);

/// Upper bound on the number of words a ball() call may produce.
inline constexpr std::size_t kBallWordCap = 1'100'000;

/// All reduced words of length <= radius, BFS order, lexicographic within a
/// sphere. Throws BudgetError if the result would exceed kBallWordCap.
std::vector<Word> ball(int rank, int radius);
std::size_t ball_size(int rank, int radius);

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

}  // namespace qmorph
