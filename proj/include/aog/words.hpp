#pragma once

// Free-group word kernel.
//
// A letter is a nonzero int: +i is the generator a_i, -i its inverse. The
// text format writes a_1, a_2, ... as a, b, ... and their inverses in upper
// case; the empty word is "1".

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace aog {

using Letter = int;
using BigInt = boost::multiprecision::cpp_int;

constexpr Letter inverse(Letter x) noexcept { return -x; }
constexpr int generator_of(Letter x) noexcept { return x < 0 ? -x : x; }

// Total order a < A < b < B < ... used for canonical forms.
constexpr int letter_key(Letter x) noexcept {
  return 2 * (generator_of(x) - 1) + (x < 0 ? 1 : 0);
}
constexpr Letter letter_from_key(int key) noexcept {
  return (key % 2 == 0) ? key / 2 + 1 : -(key / 2 + 1);
}

inline char letter_char(Letter x) {
  int g = generator_of(x);
  if (g < 1 || g > 26) {
    throw std::out_of_range("letter a_" + std::to_string(g) +
                            " has no single-character form");
  }
  return static_cast<char>(x > 0 ? 'a' + g - 1 : 'A' + g - 1);
}

/// A freely reduced word. The only ways to build one are the reducing
/// constructors below, so the invariant always holds.
class Word {
 public:
  Word() = default;

  /// Freely reduces `raw`.
  static Word reduce(std::span<const Letter> raw) {
    Word w;
    w.letters_.reserve(raw.size());
    for (Letter x : raw) {
      if (x == 0) {
        throw std::invalid_argument("letter 0 is not a generator");
      }
      if (!w.letters_.empty() && w.letters_.back() == inverse(x)) {
        w.letters_.pop_back();
      } else {
        w.letters_.push_back(x);
      }
    }
    return w;
  }

  static Word reduce(std::initializer_list<Letter> raw) {
    return reduce(std::span<const Letter>(raw.begin(), raw.size()));
  }

  static Word letter(Letter x) { return reduce({x}); }

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }
  std::span<const Letter> letters() const noexcept { return letters_; }

  Word subword(std::size_t pos, std::size_t len) const {
    Word w;
    w.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                      letters_.begin() + static_cast<std::ptrdiff_t>(pos + len));
    return w;
  }

  int max_generator() const noexcept {
    int g = 0;
    for (Letter x : letters_) g = std::max(g, generator_of(x));
    return g;
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

/// Freely reduces `raw`, rejecting letters outside a_1..a_m.
inline Word free_reduce(std::span<const Letter> raw, int m) {
  for (Letter x : raw) {
    if (x == 0 || generator_of(x) > m) {
      throw std::out_of_range("letter index " + std::to_string(x) +
                              " outside alphabet of rank " + std::to_string(m));
    }
  }
  return Word::reduce(raw);
}

inline Word inverse(const Word& w) {
  std::vector<Letter> raw(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) raw[i] = inverse(w[w.size() - 1 - i]);
  return Word::reduce(raw);
}

inline Word concat(const Word& u, const Word& v) {
  std::vector<Letter> raw(u.begin(), u.end());
  raw.insert(raw.end(), v.begin(), v.end());
  return Word::reduce(raw);
}

inline Word operator*(const Word& u, const Word& v) { return concat(u, v); }

inline Word power(const Word& u, int k) {
  Word base = k < 0 ? inverse(u) : u;
  std::vector<Letter> raw;
  for (int i = 0; i < (k < 0 ? -k : k); ++i) raw.insert(raw.end(), base.begin(), base.end());
  return Word::reduce(raw);
}

inline Word parse_word(std::string_view text) {
  std::vector<Letter> raw;
  if (text == "1") return Word{};
  for (char c : text) {
    if (c >= 'a' && c <= 'z') {
      raw.push_back(c - 'a' + 1);
    } else if (c >= 'A' && c <= 'Z') {
      raw.push_back(-(c - 'A' + 1));
    } else {
      throw std::invalid_argument("invalid character '" + std::string(1, c) +
                                  "' in word '" + std::string(text) + "'");
    }
  }
  return Word::reduce(raw);
}

inline Word parse_word(std::string_view text, int m) {
  Word w = parse_word(text);
  if (w.max_generator() > m) {
    throw std::out_of_range("word '" + std::string(text) +
                            "' uses a generator outside rank " +
                            std::to_string(m));
  }
  return w;
}

inline std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  s.reserve(w.size());
  for (Letter x : w) s.push_back(letter_char(x));
  return s;
}

inline bool is_cyclically_reduced(const Word& w) {
  return w.size() < 2 || w.front() != inverse(w.back());
}

struct CyclicReduction {
  Word core;
  Word conjugator;  // w == conjugator * core * conjugator^-1
};

inline CyclicReduction cyclic_reduce(const Word& w) {
  std::size_t lo = 0;
  std::size_t hi = w.size();
  while (hi - lo >= 2 && w[lo] == inverse(w[hi - 1])) {
    ++lo;
    --hi;
  }
  return {w.subword(lo, hi - lo), w.subword(0, lo)};
}

/// Start index of the lexicographically least rotation (letter_key order).
inline std::size_t least_rotation(std::span<const Letter> s) {
  const std::size_t n = s.size();
  if (n == 0) return 0;
  std::size_t i = 0;
  std::size_t j = 1;
  std::size_t k = 0;
  while (i < n && j < n && k < n) {
    int a = letter_key(s[(i + k) % n]);
    int b = letter_key(s[(j + k) % n]);
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) {
      i = i + k + 1;
    } else {
      j = j + k + 1;
    }
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

inline Word rotate(const Word& w, std::size_t offset) {
  std::vector<Letter> raw(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) raw[i] = w[(offset + i) % w.size()];
  return Word::reduce(raw);
}

/// A conjugacy class of cyclically reduced words, stored as its least
/// rotation. Inversion is not folded into the canonical form.
class CyclicWord {
 public:
  CyclicWord() = default;

  /// `w` is cyclically reduced first, so any word is accepted.
  explicit CyclicWord(const Word& w) {
    Word core = cyclic_reduce(w).core;
    rep_ = rotate(core, least_rotation(core.letters()));
  }

  const Word& word() const noexcept { return rep_; }
  std::size_t size() const noexcept { return rep_.size(); }
  bool empty() const noexcept { return rep_.empty(); }

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;
  friend auto operator<=>(const CyclicWord&, const CyclicWord&) = default;

 private:
  Word rep_;
};

inline CyclicWord inverse(const CyclicWord& w) { return CyclicWord(inverse(w.word())); }

inline std::string to_string(const CyclicWord& w) { return to_string(w.word()); }

/// All |w| rotations of the canonical representative, in rotation order.
inline std::vector<Word> cyclic_permutations(const CyclicWord& w) {
  if (w.empty()) {
    throw std::invalid_argument("cyclic_permutations of the empty word");
  }
  std::vector<Word> out;
  out.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.push_back(rotate(w.word(), i));
  return out;
}

struct PowerDecomposition {
  Word root;
  int exponent = 1;
};

/// Returns (u, k) with w = u^k literally and k >= 2 maximal. For a cyclically
/// reduced word, being a literal power is the same as being a proper power in
/// the free group: if w = x^k in F then the cyclically reduced x has
/// x^k reduced without cancellation, so w is conjugate to a literal power,
/// and a rotation of a literal power is again one.
inline std::optional<PowerDecomposition> is_proper_power(const Word& w) {
  const std::size_t n = w.size();
  if (n < 2) return std::nullopt;
  // Smallest period from the prefix function.
  std::vector<std::size_t> pi(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && w[i] != w[k]) k = pi[k - 1];
    if (w[i] == w[k]) ++k;
    pi[i] = k;
  }
  std::size_t period = n - pi[n - 1];
  if (period == n || n % period != 0) return std::nullopt;
  return PowerDecomposition{w.subword(0, period), static_cast<int>(n / period)};
}

inline std::optional<PowerDecomposition> is_proper_power(const CyclicWord& w) {
  return is_proper_power(w.word());
}

namespace detail {

// Transfer matrix for cyclically reduced words, reduced by the symmetry of
// the alphabet to three classes of the current letter c relative to the
// first letter f: c == f, c == f^-1, or any other letter. Entry k counts the
// reduced continuations of k further letters whose final letter is not f^-1.
struct CompletionCounts {
  BigInt same;
  BigInt inverse;
  BigInt other;
};

inline std::vector<CompletionCounts> completion_table(int m, std::size_t t) {
  std::vector<CompletionCounts> table(t);
  table[0] = {1, 0, 1};
  const int spread = 2 * m - 2;
  for (std::size_t k = 1; k < t; ++k) {
    const auto& p = table[k - 1];
    table[k].same = p.same + spread * p.other;
    table[k].inverse = p.inverse + spread * p.other;
    table[k].other = p.same + p.inverse + (spread - 1) * p.other;
  }
  return table;
}

}  // namespace detail

/// Exact number of cyclically reduced words of length t over m generators.
inline BigInt count_cyclically_reduced(int m, std::int64_t t) {
  if (t < 1) throw std::invalid_argument("word length must be at least 1");
  if (m < 1) throw std::invalid_argument("alphabet rank must be positive");
  auto table = detail::completion_table(m, static_cast<std::size_t>(t));
  return BigInt(2 * m) * table.back().same;
}

/// Uniform integer in [0, bound) built from raw 64-bit engine output.
template <class Rng>
BigInt uniform_below(const BigInt& bound, Rng& rng) {
  static_assert(Rng::max() == std::numeric_limits<std::uint64_t>::max() &&
                    Rng::min() == 0,
                "uniform_below needs a full 64-bit generator");
  if (bound <= 0) throw std::invalid_argument("uniform_below: empty range");
  const std::size_t bits = boost::multiprecision::msb(bound) + 1;
  const std::size_t words = (bits + 63) / 64;
  const std::size_t spare = words * 64 - bits;
  for (;;) {
    BigInt x = 0;
    for (std::size_t i = 0; i < words; ++i) {
      x <<= 64;
      std::uint64_t chunk = rng();
      if (i == 0 && spare > 0) chunk >>= spare;
      x += chunk;
    }
    if (x < bound) return x;
  }
}

/// Exact uniform sampler over cyclically reduced words of one length. The
/// completion table is built once and reused across draws.
class CyclicWordSampler {
 public:
  CyclicWordSampler(int m, std::int64_t t) : m_(m), t_(t) {
    if (t < 1) throw std::invalid_argument("word length must be at least 1");
    if (m < 1) throw std::invalid_argument("alphabet rank must be positive");
    table_ = detail::completion_table(m, static_cast<std::size_t>(t));
  }

  int rank() const noexcept { return m_; }
  std::int64_t length() const noexcept { return t_; }
  BigInt count() const { return BigInt(2 * m_) * table_.back().same; }

  template <class Rng>
  Word sample(Rng& rng) const {
    // Every first letter carries the same weight.
    std::uniform_int_distribution<int> first_key(0, 2 * m_ - 1);
    const Letter first = letter_from_key(first_key(rng));
    std::vector<Letter> raw{first};
    raw.reserve(static_cast<std::size_t>(t_));
    Letter current = first;
    for (std::int64_t remaining = t_ - 1; remaining > 0; --remaining) {
      const auto& next = table_[static_cast<std::size_t>(remaining - 1)];
      auto weight = [&](Letter d) -> const BigInt& {
        if (d == first) return next.same;
        if (d == inverse(first)) return next.inverse;
        return next.other;
      };
      BigInt total = 0;
      for (int key = 0; key < 2 * m_; ++key) {
        Letter d = letter_from_key(key);
        if (d != inverse(current)) total += weight(d);
      }
      BigInt pick = uniform_below(total, rng);
      for (int key = 0; key < 2 * m_; ++key) {
        Letter d = letter_from_key(key);
        if (d == inverse(current)) continue;
        const BigInt& w = weight(d);
        if (pick < w) {
          current = d;
          break;
        }
        pick -= w;
      }
      raw.push_back(current);
    }
    return Word::reduce(raw);
  }

 private:
  int m_;
  std::int64_t t_;
  std::vector<detail::CompletionCounts> table_;
};

template <class Rng>
CyclicWord random_cyclically_reduced(int m, std::int64_t t, Rng& rng) {
  return CyclicWord(CyclicWordSampler(m, t).sample(rng));
}

}  // namespace aog
