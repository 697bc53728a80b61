#pragma once

// Whitehead automorphisms acting on cyclic words, greedy length reduction and
// orbit equivalence by search over the minimal-length level set.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aog/words.hpp"

namespace aog {

struct WhiteheadMove {
  enum class Kind { Relabel, Multiplier };

  Kind kind = Kind::Relabel;
  int rank = 0;
  // Relabel: images[g - 1] is the signed image of generator g.
  std::vector<Letter> images;
  // Multiplier: the fixed letter and the cut set (sorted by letter_key).
  Letter multiplier = 0;
  std::vector<Letter> cut;

  static WhiteheadMove relabel(int m, std::vector<Letter> images) {
    WhiteheadMove mv;
    mv.kind = Kind::Relabel;
    mv.rank = m;
    mv.images = std::move(images);
    mv.validate();
    return mv;
  }

  static WhiteheadMove multiply(int m, Letter a, std::vector<Letter> cut) {
    WhiteheadMove mv;
    mv.kind = Kind::Multiplier;
    mv.rank = m;
    mv.multiplier = a;
    std::sort(cut.begin(), cut.end(), [](Letter x, Letter y) { return letter_key(x) < letter_key(y); });
    cut.erase(std::unique(cut.begin(), cut.end()), cut.end());
    mv.cut = std::move(cut);
    mv.validate();
    return mv;
  }

  bool in_cut(Letter x) const { return std::find(cut.begin(), cut.end(), x) != cut.end(); }

  void validate() const {
    if (rank < 1) throw std::invalid_argument("Whitehead move needs a positive rank");
    auto in_alphabet = [&](Letter x) { return x != 0 && generator_of(x) <= rank; };
    if (kind == Kind::Relabel) {
      if (images.size() != static_cast<std::size_t>(rank))
        throw std::invalid_argument("relabel needs one image per generator");
      std::vector<bool> hit(static_cast<std::size_t>(rank) + 1, false);
      for (Letter x : images) {
        if (!in_alphabet(x)) throw std::invalid_argument("relabel image outside the alphabet");
        if (hit[static_cast<std::size_t>(generator_of(x))]) throw std::invalid_argument("relabel is not a bijection");
        hit[static_cast<std::size_t>(generator_of(x))] = true;
      }
      return;
    }
    if (!in_alphabet(multiplier)) throw std::invalid_argument("multiplier outside the alphabet");
    for (Letter x : cut)
      if (!in_alphabet(x)) throw std::invalid_argument("cut set letter outside the alphabet");
    if (!in_cut(multiplier)) throw std::invalid_argument("cut set must contain the multiplier");
    if (in_cut(inverse(multiplier))) throw std::invalid_argument("cut set must not contain the inverse multiplier");
  }

  /// Image of a single letter; images of inverse letters are inverse words.
  Word image(Letter x) const {
    if (kind == Kind::Relabel) {
      const Letter y = images[static_cast<std::size_t>(generator_of(x) - 1)];
      return Word::reduce({x > 0 ? y : inverse(y)});
    }
    const Letter a = multiplier;
    if (generator_of(x) == generator_of(a)) return Word::reduce({x});
    const bool right = in_cut(x);
    const bool left = in_cut(inverse(x));
    std::vector<Letter> out;
    if (left) out.push_back(inverse(a));
    out.push_back(x);
    if (right) out.push_back(a);
    return Word::reduce(out);
  }

  friend bool operator==(const WhiteheadMove&, const WhiteheadMove&) = default;
};

inline std::string to_string(const WhiteheadMove& mv) {
  std::string out;
  if (mv.kind == WhiteheadMove::Kind::Relabel) {
    out = "relabel(";
    for (std::size_t g = 0; g < mv.images.size(); ++g) {
      if (g) out += ' ';
      out += to_string(Word::reduce({static_cast<Letter>(g + 1)})) + "->" + to_string(Word::reduce({mv.images[g]}));
    }
    return out + ")";
  }
  out = "multiply(" + to_string(Word::reduce({mv.multiplier})) + "; {";
  for (std::size_t i = 0; i < mv.cut.size(); ++i) {
    if (i) out += ' ';
    out += to_string(Word::reduce({mv.cut[i]}));
  }
  return out + "})";
}

inline bool is_identity(const WhiteheadMove& mv) {
  if (mv.kind == WhiteheadMove::Kind::Multiplier) return mv.cut.size() == 1;
  for (std::size_t g = 0; g < mv.images.size(); ++g)
    if (mv.images[g] != static_cast<Letter>(g + 1)) return false;
  return true;
}

inline WhiteheadMove inverse(const WhiteheadMove& mv) {
  if (mv.kind == WhiteheadMove::Kind::Relabel) {
    std::vector<Letter> inv(mv.images.size());
    for (std::size_t g = 0; g < mv.images.size(); ++g) {
      const Letter y = mv.images[g];
      const Letter x = static_cast<Letter>(g + 1);
      inv[static_cast<std::size_t>(generator_of(y) - 1)] = y > 0 ? x : inverse(x);
    }
    return WhiteheadMove::relabel(mv.rank, std::move(inv));
  }
  std::vector<Letter> cut;
  for (Letter x : mv.cut)
    if (x != mv.multiplier) cut.push_back(x);
  cut.push_back(inverse(mv.multiplier));
  return WhiteheadMove::multiply(mv.rank, inverse(mv.multiplier), std::move(cut));
}

inline Word apply_move(const Word& w, const WhiteheadMove& mv) {
  if (w.max_generator() > mv.rank) throw std::invalid_argument("word uses a letter outside the move's alphabet");
  std::vector<Letter> raw;
  raw.reserve(w.size() * 3);
  for (Letter x : w) {
    Word img = mv.image(x);
    raw.insert(raw.end(), img.begin(), img.end());
  }
  return Word::reduce(raw);
}

inline CyclicWord apply_move(const CyclicWord& w, const WhiteheadMove& mv) {
  return CyclicWord(apply_move(w.word(), mv));
}

template <class W>
W apply_moves(W w, const std::vector<WhiteheadMove>& moves) {
  for (const auto& mv : moves) w = apply_move(w, mv);
  return w;
}

/// All 2^m m! relabelings, identity first.
inline std::vector<WhiteheadMove> relabel_moves(int m) {
  std::vector<WhiteheadMove> out;
  std::vector<Letter> perm(static_cast<std::size_t>(m));
  for (int g = 0; g < m; ++g) perm[static_cast<std::size_t>(g)] = g + 1;
  do {
    for (unsigned signs = 0; signs < (1u << m); ++signs) {
      std::vector<Letter> images(perm);
      for (int g = 0; g < m; ++g)
        if (signs >> g & 1u) images[static_cast<std::size_t>(g)] = -images[static_cast<std::size_t>(g)];
      out.push_back(WhiteheadMove::relabel(m, std::move(images)));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// Non-identity multiplier moves: by multiplier in letter order, then by the
/// cut set as a bitmask over the other 2m - 2 letters.
inline std::vector<WhiteheadMove> multiplier_moves(int m) {
  std::vector<WhiteheadMove> out;
  for (int key = 0; key < 2 * m; ++key) {
    const Letter a = letter_from_key(key);
    std::vector<Letter> others;
    for (int k = 0; k < 2 * m; ++k)
      if (generator_of(letter_from_key(k)) != generator_of(a)) others.push_back(letter_from_key(k));
    for (unsigned mask = 1; mask < (1u << others.size()); ++mask) {
      std::vector<Letter> cut{a};
      for (std::size_t i = 0; i < others.size(); ++i)
        if (mask >> i & 1u) cut.push_back(others[i]);
      out.push_back(WhiteheadMove::multiply(m, a, std::move(cut)));
    }
  }
  return out;
}

struct MinimizeResult {
  CyclicWord word;
  std::vector<WhiteheadMove> moves;  // applied in order to the input
};

/// Greedy descent: apply the first strictly shortening multiplier move until
/// none exists. Relabels never change length, so the result has minimal
/// length in its Aut(F)-orbit.
inline MinimizeResult minimize(const CyclicWord& w, int m) {
  if (w.empty()) throw std::invalid_argument("minimize needs a nontrivial word");
  if (w.word().max_generator() > m) throw std::invalid_argument("word uses a letter outside the alphabet");
  const auto moves = multiplier_moves(m);
  MinimizeResult out{w, {}};
  for (bool progress = true; progress;) {
    progress = false;
    for (const auto& mv : moves) {
      CyclicWord next = apply_move(out.word, mv);
      if (next.size() < out.word.size()) {
        out.word = std::move(next);
        out.moves.push_back(mv);
        progress = true;
        break;
      }
    }
  }
  return out;
}

struct OrbitCertificate {
  std::vector<WhiteheadMove> moves;
  CyclicWord source;
  CyclicWord target;
  bool inverted = false;  // moves send source to target^-1
};

/// Re-checks a certificate by applying its moves.
inline bool replays(const OrbitCertificate& c) {
  CyclicWord img = apply_moves(c.source, c.moves);
  return img == (c.inverted ? inverse(c.target) : c.target);
}

namespace detail {

struct Canonical {
  CyclicWord word;
  const WhiteheadMove* relabel;  // relabel(w) == word
};

inline Canonical canonical_form(const CyclicWord& w, const std::vector<WhiteheadMove>& relabels) {
  Canonical best{w, &relabels.front()};
  for (const auto& mv : relabels) {
    CyclicWord img = apply_move(w, mv);
    if (img < best.word) best = {std::move(img), &mv};
  }
  return best;
}

// Adjacent relabels fused into one; identities dropped.
inline std::vector<WhiteheadMove> merge_relabels(const std::vector<WhiteheadMove>& moves) {
  std::vector<WhiteheadMove> out;
  for (const auto& mv : moves) {
    if (mv.kind == WhiteheadMove::Kind::Relabel && !out.empty() &&
        out.back().kind == WhiteheadMove::Kind::Relabel) {
      std::vector<Letter> images;
      for (Letter y : out.back().images) images.push_back(mv.image(y)[0]);
      out.back() = WhiteheadMove::relabel(mv.rank, std::move(images));
    } else {
      out.push_back(mv);
    }
    if (is_identity(out.back())) out.pop_back();
  }
  return out;
}

}  // namespace detail

/// Decides whether v or v^-1 lies in the Aut(F)-orbit of u, as cyclic words.
/// Minimal words of one orbit are joined by length-preserving moves, so the
/// search stays on the minimal level set, one node per relabel class.
inline std::optional<OrbitCertificate> same_orbit(const CyclicWord& u, const CyclicWord& v, int m) {
  if (u.empty() || v.empty()) throw std::invalid_argument("orbit test needs nontrivial words");
  // Words one relabel apart get a certificate of at most one move.
  for (const auto& rl : relabel_moves(m)) {
    const CyclicWord img = apply_move(u, rl);
    if (img != v && img != inverse(v)) continue;
    OrbitCertificate cert{{}, u, v, img != v};
    if (!is_identity(rl)) cert.moves.push_back(rl);
    return cert;
  }
  const auto mu = minimize(u, m);
  const auto mv = minimize(v, m);
  if (mu.word.size() != mv.word.size()) return std::nullopt;

  const auto relabels = relabel_moves(m);
  const auto multipliers = multiplier_moves(m);
  const auto target = detail::canonical_form(mv.word, relabels);
  const auto target_inv = detail::canonical_form(inverse(mv.word), relabels);

  struct Parent {
    std::optional<CyclicWord> from;
    const WhiteheadMove* multiplier = nullptr;
    const WhiteheadMove* relabel = nullptr;
  };
  std::map<CyclicWord, Parent> seen;
  std::deque<CyclicWord> queue;
  const auto start = detail::canonical_form(mu.word, relabels);
  seen.emplace(start.word, Parent{std::nullopt, nullptr, start.relabel});
  queue.push_back(start.word);

  std::optional<CyclicWord> hit;
  bool inverted = false;
  auto check = [&](const CyclicWord& c) {
    if (c == target.word) {
      hit = c;
    } else if (c == target_inv.word) {
      hit = c;
      inverted = true;
    }
    return hit.has_value();
  };
  if (!check(start.word)) {
    while (!queue.empty() && !hit) {
      CyclicWord cur = std::move(queue.front());
      queue.pop_front();
      for (const auto& step : multipliers) {
        CyclicWord img = apply_move(cur, step);
        if (img.size() != cur.size()) continue;
        auto canon = detail::canonical_form(img, relabels);
        if (seen.count(canon.word)) continue;
        seen.emplace(canon.word, Parent{cur, &step, canon.relabel});
        queue.push_back(canon.word);
        if (check(canon.word)) break;
      }
    }
  }
  if (!hit) return std::nullopt;

  // u -> min(u) -> canonical chain -> hit -> min(v)^(+-1) -> v^(+-1).
  std::vector<WhiteheadMove> chain;
  for (CyclicWord c = *hit;;) {
    const Parent& p = seen.at(c);
    chain.push_back(*p.relabel);
    if (!p.from) break;
    chain.push_back(*p.multiplier);
    c = *p.from;
  }
  OrbitCertificate cert;
  cert.source = u;
  cert.target = v;
  cert.inverted = inverted;
  cert.moves = mu.moves;
  cert.moves.insert(cert.moves.end(), chain.rbegin(), chain.rend());
  const auto& last = inverted ? target_inv : target;
  cert.moves.push_back(inverse(*last.relabel));
  for (auto it = mv.moves.rbegin(); it != mv.moves.rend(); ++it) cert.moves.push_back(inverse(*it));
  cert.moves = detail::merge_relabels(cert.moves);
  if (!replays(cert)) throw std::logic_error("orbit certificate does not replay");
  return cert;
}

}  // namespace aog
