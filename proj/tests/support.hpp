#pragma once

// Random generators and brute-force helpers shared by the test programs.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "aog/words.hpp"

namespace aog::testing {

using Rng = std::mt19937_64;

inline Letter random_letter(int m, Rng& rng) {
  std::uniform_int_distribution<int> key(0, 2 * m - 1);
  return letter_from_key(key(rng));
}

/// Uniformly random freely reduced word of exactly `len` letters.
inline Word random_reduced(int m, std::size_t len, Rng& rng) {
  std::vector<Letter> raw;
  while (raw.size() < len) {
    Letter x = random_letter(m, rng);
    if (!raw.empty() && x == inverse(raw.back())) continue;
    raw.push_back(x);
  }
  return Word::reduce(raw);
}

/// Random word with arbitrary cancellation, reduced afterwards.
inline Word random_word(int m, std::size_t raw_len, Rng& rng) {
  std::vector<Letter> raw;
  for (std::size_t i = 0; i < raw_len; ++i) raw.push_back(random_letter(m, rng));
  return Word::reduce(raw);
}

inline Word random_cyclic(int m, std::size_t len, Rng& rng) {
  for (;;) {
    Word w = random_reduced(m, len, rng);
    if (is_cyclically_reduced(w)) return w;
  }
}

/// Calls `visit` with every raw letter sequence of length `len` over m
/// generators (not necessarily reduced).
inline void for_each_sequence(int m, std::size_t len,
                              const std::function<void(const std::vector<Letter>&)>& visit) {
  std::vector<int> keys(len, 0);
  std::vector<Letter> seq(len);
  for (;;) {
    for (std::size_t i = 0; i < len; ++i) seq[i] = letter_from_key(keys[i]);
    visit(seq);
    std::size_t i = 0;
    while (i < len && ++keys[i] == 2 * m) keys[i++] = 0;
    if (i == len) return;
  }
}

/// Every freely reduced word of length exactly `len`.
inline std::vector<Word> all_reduced_words(int m, std::size_t len) {
  std::vector<Word> out;
  for_each_sequence(m, len, [&](const std::vector<Letter>& seq) {
    for (std::size_t i = 1; i < seq.size(); ++i)
      if (seq[i] == inverse(seq[i - 1])) return;
    out.push_back(Word::reduce(seq));
  });
  return out;
}

}  // namespace aog::testing
