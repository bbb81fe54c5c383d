#include "qmorph/word.hpp"

#include <algorithm>
#include <cstdlib>

#include "qmorph/errors.hpp"

namespace qmorph {

namespace {

void push_reduced(std::vector<Letter>& out, Letter l) {
  if (!out.empty() && out.back() == -l) {
    out.pop_back();
  } else {
    out.push_back(l);
  }
}

}  // namespace

char letter_char(Letter l) {
  const int k = std::abs(l);
  if (k < 1 || k > kMaxRank) throw InputError("generator index out of range: " + std::to_string(l));
  const char base = "abcd"[k - 1];
  return l > 0 ? base : static_cast<char>(base - 'a' + 'A');
}

Letter char_letter(char c) {
  switch (c) {
    case 'a': return 1;
    case 'A': return -1;
    case 'b': return 2;
    case 'B': return -2;
    case 'c': return 3;
    case 'C': return -3;
    case 'd': return 4;
    case 'D': return -4;
    default: throw InputError(std::string("unknown generator letter '") + c + "'");
  }
}

Word Word::from_letters(std::span<const Letter> letters) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (Letter l : letters) {
    if (l == 0 || std::abs(l) > kMaxRank) throw InputError("generator index out of range");
    push_reduced(out, l);
  }
  return Word(std::move(out));
}

Word Word::from_reduced(std::vector<Letter> letters) {
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (letters[i] == 0 || std::abs(letters[i]) > kMaxRank) throw InputError("generator index out of range");
    if (i > 0 && letters[i] == -letters[i - 1]) throw InputError("word is not freely reduced");
  }
  return Word(std::move(letters));
}

Word Word::parse(std::string_view text) {
  if (text == "e" || text.empty()) return Word();
  std::vector<Letter> out;
  out.reserve(text.size());
  for (char c : text) push_reduced(out, char_letter(c));
  return Word(std::move(out));
}

std::string Word::str() const {
  if (letters_.empty()) return "e";
  std::string s;
  s.reserve(letters_.size());
  for (Letter l : letters_) s.push_back(letter_char(l));
  return s;
}

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (Letter& l : out) l = -l;
  return Word(std::move(out));
}

int Word::max_generator() const {
  int m = 0;
  for (Letter l : letters_) m = std::max(m, std::abs(l));
  return m;
}

Word multiply(const Word& u, const Word& v) {
  const auto ul = u.letters();
  const auto vl = v.letters();
  std::size_t cancel = 0;
  while (cancel < ul.size() && cancel < vl.size() && ul[ul.size() - 1 - cancel] == -vl[cancel]) ++cancel;
  std::vector<Letter> out;
  out.reserve(ul.size() + vl.size() - 2 * cancel);
  out.insert(out.end(), ul.begin(), ul.end() - static_cast<std::ptrdiff_t>(cancel));
  out.insert(out.end(), vl.begin() + static_cast<std::ptrdiff_t>(cancel), vl.end());
  return Word::from_reduced(std::move(out));
}

Word multiply(std::initializer_list<Word> factors) {
  Word acc;
  for (const Word& f : factors) acc = multiply(acc, f);
  return acc;
}

Word power(const Word& w, long n) {
  if (n < 0) return power(w.inverse(), -n);
  const CyclicReduction cr = cyclic_reduce(w);
  std::vector<Letter> core;
  core.reserve(cr.core.length() * static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) core.insert(core.end(), cr.core.letters().begin(), cr.core.letters().end());
  return multiply({cr.conjugator, Word::from_reduced(std::move(core)), cr.conjugator.inverse()});
}

Word append(const Word& w, Letter l) {
  std::vector<Letter> out(w.letters().begin(), w.letters().end());
  push_reduced(out, l);
  return Word::from_reduced(std::move(out));
}

std::size_t common_prefix(const Word& u, const Word& v) {
  const auto ul = u.letters();
  const auto vl = v.letters();
  const std::size_t n = std::min(ul.size(), vl.size());
  std::size_t i = 0;
  while (i < n && ul[i] == vl[i]) ++i;
  return i;
}

CyclicReduction cyclic_reduce(const Word& w) {
  const auto l = w.letters();
  std::size_t lo = 0;
  std::size_t hi = l.size();
  while (hi - lo >= 2 && l[lo] == -l[hi - 1]) {
    ++lo;
    --hi;
  }
  CyclicReduction r;
  r.core = Word::from_reduced(std::vector<Letter>(l.begin() + static_cast<std::ptrdiff_t>(lo),
                                                  l.begin() + static_cast<std::ptrdiff_t>(hi)));
  r.conjugator = Word::from_reduced(std::vector<Letter>(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(lo)));
  return r;
}

bool is_cyclically_reduced(const Word& w) {
  return w.length() < 2 || w[0] != -w.back();
}

bool conjugacy_test(const Word& u, const Word& v) {
  const Word cu = cyclic_reduce(u).core;
  const Word cv = cyclic_reduce(v).core;
  if (cu.length() != cv.length()) return false;
  if (cu.is_identity()) return true;
  const auto a = cu.letters();
  const auto b = cv.letters();
  const std::size_t n = a.size();
  for (std::size_t shift = 0; shift < n; ++shift) {
    bool match = true;
    for (std::size_t i = 0; i < n && match; ++i) match = a[(i + shift) % n] == b[i];
    if (match) return true;
  }
  return false;
}

std::vector<long> exponent_sums(const Word& w, int rank) {
  std::vector<long> sums(static_cast<std::size_t>(rank), 0);
  for (Letter l : w.letters()) {
    const int k = std::abs(l);
    if (k <= rank) sums[static_cast<std::size_t>(k - 1)] += (l > 0 ? 1 : -1);
  }
  return sums;
}

std::vector<Letter> generator_order(int rank) {
  std::vector<Letter> order;
  for (int k = 1; k <= rank; ++k) {
    order.push_back(k);
    order.push_back(-k);
  }
  return order;
}

std::size_t ball_size(int rank, int radius) {
  if (radius < 0) return 0;
  if (rank == 0) return 1;
  std::size_t total = 1;
  std::size_t sphere = 2 * static_cast<std::size_t>(rank);
  for (int r = 1; r <= radius; ++r) {
    total += sphere;
    if (total > kBallWordCap * 10) return total;
    sphere *= 2 * static_cast<std::size_t>(rank) - 1;
  }
  return total;
}

std::vector<Word> ball(int rank, int radius) {
  if (radius < 0) throw InputError("ball radius must be nonnegative");
  if (rank < 0 || rank > kMaxRank) throw InputError("free rank out of range");
  if (ball_size(rank, radius) > kBallWordCap) {
    throw BudgetError("ball of radius " + std::to_string(radius) + " in F" + std::to_string(rank) +
                      " exceeds the enumeration cap");
  }
  const auto order = generator_order(rank);
  std::vector<Word> out;
  out.reserve(ball_size(rank, radius));
  out.emplace_back();
  std::size_t sphere_begin = 0;
  for (int r = 1; r <= radius; ++r) {
    const std::size_t sphere_end = out.size();
    for (std::size_t i = sphere_begin; i < sphere_end; ++i) {
      for (Letter l : order) {
        if (!out[i].is_identity() && out[i].back() == -l) continue;
        std::vector<Letter> next(out[i].letters().begin(), out[i].letters().end());
        next.push_back(l);
        out.push_back(Word::from_reduced(std::move(next)));
      }
    }
    sphere_begin = sphere_end;
  }
  return out;
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (Letter l : w.letters()) {
    h ^= static_cast<std::size_t>(l + 16);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace qmorph
