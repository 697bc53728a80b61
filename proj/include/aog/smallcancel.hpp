#pragma once

// Symmetrized relator sets, pieces, the C'(lambda) test, Dehn's algorithm
// and the scan for long relator subwords readable in a folded graph.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "aog/fgraph.hpp"
#include "aog/rational.hpp"
#include "aog/words.hpp"

namespace aog {

struct Presentation {
  int rank = 2;
  std::vector<CyclicWord> relators;

  Presentation() = default;
  Presentation(int m, std::vector<CyclicWord> rels) : rank(m), relators(std::move(rels)) {
    validate();
  }
  Presentation(int m, const std::vector<Word>& rels) : rank(m) {
    for (const Word& r : rels) relators.emplace_back(r);
    validate();
  }

  void validate() const {
    if (rank < 1) throw std::invalid_argument("presentation needs at least one generator");
    for (const CyclicWord& r : relators) {
      if (r.empty()) throw std::invalid_argument("trivial relator");
      if (r.word().max_generator() > rank)
        throw std::invalid_argument("relator uses a letter outside the alphabet");
    }
  }

  std::size_t max_relator_length() const {
    std::size_t n = 0;
    for (const auto& r : relators) n = std::max(n, r.size());
    return n;
  }
};

/// The word r_i^{sign} as stored; rotation offsets refer to it.
inline Word signed_relator(const Presentation& p, std::size_t index, int sign) {
  const Word& r = p.relators.at(index).word();
  return sign > 0 ? r : inverse(r);
}

// ---------------------------------------------------------------------------
// Symmetrized set

/// Every cyclic permutation of every r_i and r_i^-1, deduplicated and kept in
/// lexicographic order (letters compared by a < A < b < B < ...). Elements
/// are stored as (relator, sign, offset) references into doubled copies of
/// the relators, so the set costs O(sum |r_i|) memory.
class SymmetrizedSet {
 public:
  struct Ref {
    std::uint32_t relator = 0;
    std::int8_t sign = 1;
    std::uint32_t offset = 0;
  };

  explicit SymmetrizedSet(const Presentation& p) {
    for (std::size_t i = 0; i < p.relators.size(); ++i) {
      for (int sign : {1, -1}) {
        Word w = signed_relator(p, i, sign);
        Block b;
        b.length = w.size();
        b.keys.reserve(2 * w.size());
        for (int pass = 0; pass < 2; ++pass)
          for (Letter x : w) b.keys.push_back(letter_key(x));
        blocks_.push_back(std::move(b));
        const std::size_t block = blocks_.size() - 1;
        for (std::size_t off = 0; off < w.size(); ++off)
          refs_.push_back({static_cast<std::uint32_t>(i), static_cast<std::int8_t>(sign),
                           static_cast<std::uint32_t>(off)});
        block_of_.push_back(block);
      }
    }
    std::stable_sort(refs_.begin(), refs_.end(),
                     [&](const Ref& a, const Ref& b) { return compare(a, b) < 0; });
    std::vector<Ref> unique;
    for (const Ref& r : refs_)
      if (unique.empty() || compare(unique.back(), r) != 0) unique.push_back(r);
    refs_ = std::move(unique);
  }

  std::size_t size() const noexcept { return refs_.size(); }
  const Ref& ref(std::size_t i) const { return refs_.at(i); }
  std::size_t length(std::size_t i) const { return block(refs_.at(i)).length; }

  Word element(std::size_t i) const {
    const Ref& r = refs_.at(i);
    const Block& b = block(r);
    std::vector<Letter> out;
    out.reserve(b.length);
    for (std::size_t k = 0; k < b.length; ++k) out.push_back(letter_from_key(b.keys[r.offset + k]));
    return Word::reduce(out);
  }

  std::vector<Word> elements() const {
    std::vector<Word> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(element(i));
    return out;
  }

  /// Length of the common prefix of elements i and j.
  std::size_t common_prefix(std::size_t i, std::size_t j) const {
    return lcp(refs_.at(i), refs_.at(j));
  }

  /// Longest piece that is a prefix of element i; by sortedness it is shared
  /// with a lexicographic neighbour.
  std::size_t longest_piece_at(std::size_t i) const {
    std::size_t best = 0;
    if (i > 0) best = std::max(best, common_prefix(i - 1, i));
    if (i + 1 < size()) best = std::max(best, common_prefix(i, i + 1));
    return best;
  }

 private:
  struct Block {
    std::size_t length = 0;
    std::vector<int> keys;  // the word written twice
  };

  const Block& block(const Ref& r) const {
    return blocks_[block_of_[r.relator * 2 + (r.sign > 0 ? 0 : 1)]];
  }

  std::size_t lcp(const Ref& a, const Ref& b) const {
    const Block& ba = block(a);
    const Block& bb = block(b);
    const std::size_t n = std::min(ba.length, bb.length);
    const int* pa = ba.keys.data() + a.offset;
    const int* pb = bb.keys.data() + b.offset;
    std::size_t k = 0;
    while (k < n && pa[k] == pb[k]) ++k;
    return k;
  }

  int compare(const Ref& a, const Ref& b) const {
    const Block& ba = block(a);
    const Block& bb = block(b);
    const std::size_t k = lcp(a, b);
    const std::size_t n = std::min(ba.length, bb.length);
    if (k < n) return ba.keys[a.offset + k] < bb.keys[b.offset + k] ? -1 : 1;
    if (ba.length == bb.length) return 0;
    return ba.length < bb.length ? -1 : 1;
  }

  std::vector<Block> blocks_;
  std::vector<std::size_t> block_of_;
  std::vector<Ref> refs_;
};

inline SymmetrizedSet symmetrize(const Presentation& p) { return SymmetrizedSet(p); }

// ---------------------------------------------------------------------------
// Pieces

struct PieceSummary {
  std::size_t length = 0;   // longest piece
  Rational ratio{0};        // max |piece| / |r| over elements r with that piece as prefix
};

inline PieceSummary max_piece(const SymmetrizedSet& s) {
  PieceSummary out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::size_t k = s.longest_piece_at(i);
    out.length = std::max(out.length, k);
    if (k == 0) continue;
    Rational r(static_cast<std::int64_t>(k), static_cast<std::int64_t>(s.length(i)));
    if (r > out.ratio) out.ratio = r;
  }
  return out;
}

inline PieceSummary max_piece(const Presentation& p) { return max_piece(SymmetrizedSet(p)); }

struct CPrimeResult {
  bool holds = true;
  std::optional<Word> piece;    // offending piece
  std::optional<Word> element;  // symmetrized element it is a prefix of
};

/// C'(lambda): every piece q that is a prefix of an element r has
/// |q| < lambda |r|. Reports the first violation in lexicographic order.
inline CPrimeResult check_Cprime(const SymmetrizedSet& s, const Rational& lambda) {
  if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::size_t k = s.longest_piece_at(i);
    if (k == 0) continue;
    if (!less_than_times(static_cast<std::int64_t>(k), lambda, static_cast<std::int64_t>(s.length(i)))) {
      Word e = s.element(i);
      return {false, e.subword(0, k), e};
    }
  }
  return {};
}

inline CPrimeResult check_Cprime(const Presentation& p, const Rational& lambda) {
  return check_Cprime(SymmetrizedSet(p), lambda);
}

// ---------------------------------------------------------------------------
// Dehn's algorithm

/// Word-problem oracle for C'(1/6) presentations: a subword matching more
/// than half of a symmetrized element r = v z is replaced by z^-1 until no
/// such subword remains. The result is empty iff the input is trivial in G.
class DehnReducer {
 public:
  explicit DehnReducer(const Presentation& p) : presentation_(p) {
    SymmetrizedSet s(p);
    if (!check_Cprime(s, Rational(1, 6)).holds)
      throw std::invalid_argument("Dehn's algorithm needs a C'(1/6) presentation");
    elements_ = s.elements();
    key_length_ = 0;
    for (const Word& e : elements_) {
      const std::size_t need = e.size() / 2 + 1;
      key_length_ = key_length_ == 0 ? need : std::min(key_length_, need);
    }
    for (std::size_t i = 0; i < elements_.size(); ++i)
      index_[hash_prefix(elements_[i].letters(), key_length_)].push_back(i);
  }

  const Presentation& presentation() const noexcept { return presentation_; }

  Word reduce(const Word& input) const {
    if (elements_.empty()) return input;
    std::vector<Letter> w(input.begin(), input.end());
    std::size_t start = 0;
    for (;;) {
      auto match = find_match(w, start);
      if (!match) return Word::reduce(w);
      const auto [pos, elem, len] = *match;
      const Word& r = elements_[elem];
      std::vector<Letter> next(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
      for (std::size_t k = r.size(); k > len; --k) next.push_back(inverse(r[k - 1]));
      next.insert(next.end(), w.begin() + static_cast<std::ptrdiff_t>(pos + len), w.end());
      const Word reduced_word = Word::reduce(next);
      std::vector<Letter> reduced(reduced_word.begin(), reduced_word.end());
      // Only windows reaching into the rewritten part can match now.
      std::size_t same = 0;
      while (same < w.size() && same < reduced.size() && w[same] == reduced[same]) ++same;
      w = std::move(reduced);
      const std::size_t back = max_length();
      start = same > back ? same - back : 0;
    }
  }

  bool is_trivial(const Word& w) const { return reduce(w).empty(); }
  bool equal(const Word& u, const Word& v) const { return is_trivial(u * inverse(v)); }

 private:
  struct Match {
    std::size_t pos;
    std::size_t element;
    std::size_t length;
  };

  static constexpr std::uint64_t kBase = 1000003ULL;

  static std::uint64_t hash_prefix(std::span<const Letter> w, std::size_t k) {
    std::uint64_t h = 0;
    for (std::size_t i = 0; i < k && i < w.size(); ++i)
      h = h * kBase + static_cast<std::uint64_t>(letter_key(w[i]) + 1);
    return h;
  }

  std::size_t max_length() const {
    std::size_t n = 0;
    for (const Word& e : elements_) n = std::max(n, e.size());
    return n;
  }

  // First position >= start (then longest match there) where some element
  // agrees with w on more than half its length.
  std::optional<Match> find_match(const std::vector<Letter>& w, std::size_t start) const {
    const std::size_t k = key_length_;
    if (w.size() < k) return std::nullopt;
    std::uint64_t power = 1;
    for (std::size_t i = 0; i + 1 < k; ++i) power *= kBase;
    std::uint64_t h = 0;
    for (std::size_t i = start; i < start + k && i < w.size(); ++i)
      h = h * kBase + static_cast<std::uint64_t>(letter_key(w[i]) + 1);
    for (std::size_t pos = start; pos + k <= w.size(); ++pos) {
      if (pos > start) {
        h -= power * static_cast<std::uint64_t>(letter_key(w[pos - 1]) + 1);
        h = h * kBase + static_cast<std::uint64_t>(letter_key(w[pos + k - 1]) + 1);
      }
      auto it = index_.find(h);
      if (it == index_.end()) continue;
      std::optional<Match> best;
      for (std::size_t e : it->second) {
        const Word& r = elements_[e];
        std::size_t c = 0;
        while (c < r.size() && pos + c < w.size() && w[pos + c] == r[c]) ++c;
        if (2 * c > r.size() && (!best || c > best->length)) best = Match{pos, e, c};
      }
      if (best) return best;
    }
    return std::nullopt;
  }

  Presentation presentation_;
  std::vector<Word> elements_;
  std::size_t key_length_ = 0;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> index_;
};

inline Word dehn_reduce(const Word& w, const Presentation& p) { return DehnReducer(p).reduce(w); }

inline bool is_equal_in_G(const Word& u, const Word& v, const Presentation& p) {
  return DehnReducer(p).equal(u, v);
}

// ---------------------------------------------------------------------------
// Long relator paths

/// A maximal run of a path whose interior vertices all have degree two.
struct Segment {
  std::size_t begin = 0;  // step index in the path
  std::size_t end = 0;    // one past the last step
  long arc = -1;          // index into maximal_arcs(g)
};

struct LongRelatorPath {
  Path path;
  std::size_t relator = 0;
  int sign = 1;
  std::size_t offset = 0;
  Word v;  // label of path
  Word y;  // complement: v y is the rotation of r^sign at offset
  std::vector<Segment> segments;
};

/// Splits p at every vertex of degree other than two.
inline std::vector<Segment> split_into_segments(const FGraph& g, const Path& p,
                                                std::span<const Arc> arcs) {
  auto arc_of = arc_index_of_edges(g, arcs);
  std::vector<Segment> out;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    bool fresh = out.empty() || g.degree(g.tail(p.steps[i])) != 2 ||
                 arc_of[p.steps[i].edge] != out.back().arc;
    if (fresh) out.push_back({i, i, arc_of[p.steps[i].edge]});
    out.back().end = i + 1;
  }
  return out;
}

/// Longest subword of a cyclic permutation of some r_i^{+-1} that labels a
/// path in the folded graph g, among those with |v| > (1 - 3 lambda)|r|.
/// |v| is capped at |r| - 1 so the complement y is never empty. Ties go to
/// the lower relator index, then sign + before -, then offset, then vertex.
inline std::optional<LongRelatorPath> find_long_relator_path(const FGraph& g, const Presentation& p,
                                                             const Rational& lambda) {
  if (!is_folded(g)) throw std::invalid_argument("find_long_relator_path needs a folded graph");
  if (!g.is_connected()) throw std::invalid_argument("find_long_relator_path needs a connected graph");
  const Transitions delta(g);
  const auto verts = g.vertices();
  const std::size_t cap = g.vertex_capacity();

  struct Best {
    std::size_t length = 0;
    std::size_t relator = 0;
    int sign = 1;
    std::size_t offset = 0;
    VertexId vertex = 0;
  };
  std::optional<Best> best;

  std::vector<std::uint32_t> run(cap), next_run(cap);
  for (std::size_t i = 0; i < p.relators.size(); ++i) {
    for (int sign : {1, -1}) {
      const Word w = signed_relator(p, i, sign);
      const std::size_t n = w.size();
      if (n < 2) continue;
      const std::size_t limit = n - 1;
      // Length of the threshold-meeting run must exceed (1 - 3 lambda) n.
      auto long_enough = [&](std::size_t len) {
        return less_than_times(static_cast<std::int64_t>(n - len), 3 * lambda,
                               static_cast<std::int64_t>(n));
      };
      std::optional<Best> local;
      // run[v] = readable length from v starting at position j of w w.
      std::fill(run.begin(), run.end(), 0);
      for (std::size_t j = 2 * n; j-- > 0;) {
        const Letter x = w[j % n];
        for (VertexId v : verts) {
          auto mv = delta.next(v, x);
          next_run[v] = mv ? std::min<std::uint32_t>(run[mv->target] + 1, static_cast<std::uint32_t>(limit)) : 0;
        }
        std::swap(run, next_run);
        if (j >= n) continue;
        for (VertexId v : verts) {
          const std::size_t len = run[v];
          if (len == 0 || !long_enough(len)) continue;
          if (!local || len > local->length ||
              (len == local->length && (j < local->offset || (j == local->offset && v < local->vertex))))
            local = Best{len, i, sign, j, v};
        }
      }
      if (local && (!best || local->length > best->length)) best = local;
    }
  }
  if (!best) return std::nullopt;

  LongRelatorPath out;
  out.relator = best->relator;
  out.sign = best->sign;
  out.offset = best->offset;
  const Word rot = rotate(signed_relator(p, best->relator, best->sign), best->offset);
  out.v = rot.subword(0, best->length);
  out.y = rot.subword(best->length, rot.size() - best->length);
  auto traced = trace_word(g, best->vertex, out.v);
  if (!traced) throw std::logic_error("long relator path failed to retrace");
  out.path = std::move(*traced);
  out.segments = split_into_segments(g, out.path, maximal_arcs(g));
  return out;
}

}  // namespace aog
