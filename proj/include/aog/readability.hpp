#pragma once

// Exact readability decisions: is there a connected labeled graph with few
// edges, bounded rank and (optionally) a vertex of degree < 2m that carries
// a path spelling w?
//
// It suffices to search the folded quotients of the interval graph of w: a
// witness can be cut down to the image of its path and then folded, and
// neither step raises the edge count, the rank or any degree. The quotients
// are generated by reading w one letter at a time. A letter already readable
// from the current vertex must be followed; otherwise the new edge goes to
// a fresh vertex (rank unchanged) or to an existing vertex with no incoming
// edge of that letter (rank + 1). Each folded quotient is produced exactly
// once, edges only accumulate along a branch and rank never drops, so both
// budgets prune soundly.
//
// The low-degree requirement has one subtlety: if the best quotient is
// 2m-regular, a pendant edge gives a witness with one more edge. Any witness
// whose folded image is 2m-regular has at least that many edges, so the
// test "E + 1 within budget" is exact.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aog/fgraph.hpp"
#include "aog/rational.hpp"
#include "aog/words.hpp"

namespace aog {

struct ReadabilityQuery {
  Word word;
  int alphabet_rank = 2;
  Rational edge_budget{1};           // E <= edge_budget * |word|
  std::size_t rank_bound = 0;
  bool require_low_degree = false;   // some vertex of degree < 2m
  std::optional<std::uint64_t> node_budget;

  void validate() const {
    if (word.empty()) throw std::invalid_argument("readability of the empty word");
    if (edge_budget <= 0 || edge_budget > 1)
      throw std::invalid_argument("edge budget must lie in (0, 1]");
    if (alphabet_rank < 1 || word.max_generator() > alphabet_rank)
      throw std::invalid_argument("word uses a letter outside the alphabet");
  }

  /// Largest admissible edge count, floor(budget * |w|).
  std::size_t max_edges() const {
    const auto l = static_cast<std::int64_t>(word.size());
    return static_cast<std::size_t>((edge_budget.numerator() * l) / edge_budget.denominator());
  }
};

enum class Readability { Readable, NotReadable, Unknown };

inline const char* to_string(Readability r) {
  switch (r) {
    case Readability::Readable: return "Readable";
    case Readability::NotReadable: return "NotReadable";
    case Readability::Unknown: return "Unknown";
  }
  return "?";
}

struct ReadabilityAnswer {
  Readability verdict = Readability::NotReadable;
  std::optional<FGraph> graph;  // present iff Readable
  std::optional<Path> path;
  std::uint64_t nodes = 0;      // search nodes visited
};

/// Re-checks a witness against the query from scratch.
inline bool check_witness(const ReadabilityQuery& q, const FGraph& g, const Path& p) {
  if (g.vertex_count() == 0 || !g.is_connected()) return false;
  if (!at_most_times(static_cast<std::int64_t>(g.edge_count()), q.edge_budget,
                     static_cast<std::int64_t>(q.word.size())))
    return false;
  if (rank(g) > q.rank_bound) return false;
  if (q.require_low_degree) {
    bool low = false;
    for (VertexId v : g.vertices())
      low = low || g.degree(v) < 2 * static_cast<std::size_t>(q.alphabet_rank);
    if (!low) return false;
  }
  if (!is_valid_path(g, p)) return false;
  return Word::reduce(raw_label(g, p.steps)) == q.word && p.size() == q.word.size();
}

namespace detail {

class QuotientSearch {
 public:
  explicit QuotientSearch(const ReadabilityQuery& q)
      : q_(q),
        width_(2 * static_cast<std::size_t>(q.alphabet_rank)),
        max_edges_(q.max_edges()),
        full_degree_(2 * static_cast<std::size_t>(q.alphabet_rank)) {
    // suffix_generators_[i][g]: generator g + 1 occurs at or after position i.
    const std::size_t l = q.word.size();
    suffix_generators_.assign(l + 1, {});
    for (std::size_t i = l; i-- > 0;) {
      suffix_generators_[i] = suffix_generators_[i + 1];
      const auto g = static_cast<std::size_t>(generator_of(q.word[i]) - 1);
      if (suffix_generators_[i].size() <= g) suffix_generators_[i].resize(g + 1, false);
      suffix_generators_[i][g] = true;
    }
  }

  ReadabilityAnswer run() {
    ReadabilityAnswer out;
    if (lower_bound_edges() > max_edges_) {
      out.verdict = Readability::NotReadable;
      return out;
    }
    add_vertex();
    path_.push_back(0);
    const bool found = search(0, 0);
    out.nodes = nodes_;
    if (found) {
      out.verdict = Readability::Readable;
      build_witness(out);
    } else {
      out.verdict = exhausted_ ? Readability::Unknown : Readability::NotReadable;
    }
    return out;
  }

 private:
  static constexpr std::uint32_t kNone = static_cast<std::uint32_t>(-1);

  std::size_t lower_bound_edges() const {
    std::size_t distinct = 0;
    for (bool b : suffix_generators_[0]) distinct += b;
    return distinct;
  }

  std::uint32_t add_vertex() {
    out_.resize(out_.size() + width_, kNone);
    return vertex_count_++;
  }

  void pop_vertex() {
    out_.resize(out_.size() - width_);
    --vertex_count_;
  }

  std::uint32_t& slot(std::uint32_t v, Letter x) {
    return out_[v * width_ + static_cast<std::size_t>(letter_key(x))];
  }

  std::size_t degree(std::uint32_t v) const {
    std::size_t d = 0;
    for (std::size_t k = 0; k < width_; ++k) d += out_[v * width_ + k] != kNone;
    return d;
  }

  bool accept() {
    const std::size_t rank = edge_log_.size() + 1 - vertex_count_;
    if (rank > q_.rank_bound || edge_log_.size() > max_edges_) return false;
    if (!q_.require_low_degree) return true;
    for (std::uint32_t v = 0; v < vertex_count_; ++v)
      if (degree(v) < full_degree_) return true;
    if (edge_log_.size() + 1 <= max_edges_) {
      pendant_ = true;
      return true;
    }
    return false;
  }

  // Generators still to be read that no edge carries yet.
  std::size_t missing_generators(std::size_t pos) const {
    std::size_t missing = 0;
    const auto& gens = suffix_generators_[pos];
    for (std::size_t g = 0; g < gens.size(); ++g)
      if (gens[g] && !label_used(static_cast<int>(g) + 1)) ++missing;
    return missing;
  }

  bool label_used(int g) const {
    return static_cast<std::size_t>(g) < label_count_.size() && label_count_[g] > 0;
  }

  void push_edge(std::uint32_t from, Letter x, std::uint32_t to) {
    slot(from, x) = to;
    slot(to, inverse(x)) = from;
    edge_log_.push_back({from, x, to});
    const auto g = static_cast<std::size_t>(generator_of(x));
    if (label_count_.size() <= g) label_count_.resize(g + 1, 0);
    ++label_count_[g];
  }

  void pop_edge() {
    const auto [from, x, to] = edge_log_.back();
    edge_log_.pop_back();
    slot(from, x) = kNone;
    slot(to, inverse(x)) = kNone;
    --label_count_[static_cast<std::size_t>(generator_of(x))];
  }

  bool search(std::size_t pos, std::uint32_t cur) {
    if (q_.node_budget && nodes_ >= *q_.node_budget) {
      exhausted_ = true;
      return false;
    }
    ++nodes_;
    const std::size_t rank = edge_log_.size() + 1 - vertex_count_;
    if (rank > q_.rank_bound) return false;
    if (edge_log_.size() + missing_generators(pos) > max_edges_) return false;
    if (pos == q_.word.size()) return accept();

    const Letter x = q_.word[pos];
    if (std::uint32_t next = slot(cur, x); next != kNone) {
      path_.push_back(next);
      if (search(pos + 1, next)) return true;
      path_.pop_back();
      return false;
    }
    if (edge_log_.size() + 1 > max_edges_) return false;

    // Close onto an existing vertex (raises the rank).
    if (rank + 1 <= q_.rank_bound) {
      for (std::uint32_t u = 0; u < vertex_count_; ++u) {
        if (slot(u, inverse(x)) != kNone) continue;
        push_edge(cur, x, u);
        path_.push_back(u);
        if (search(pos + 1, u)) return true;
        path_.pop_back();
        pop_edge();
        if (exhausted_) return false;
      }
    }
    // Open a fresh vertex.
    const std::uint32_t fresh = add_vertex();
    push_edge(cur, x, fresh);
    path_.push_back(fresh);
    if (search(pos + 1, fresh)) return true;
    path_.pop_back();
    pop_edge();
    pop_vertex();
    return false;
  }

  void build_witness(ReadabilityAnswer& out) const {
    FGraph g(q_.alphabet_rank);
    for (std::uint32_t v = 0; v < vertex_count_; ++v) g.add_vertex();
    std::vector<Step> steps;
    for (const auto& [from, x, to] : edge_log_) g.add_edge(from, to, x);
    for (std::size_t i = 0; i < q_.word.size(); ++i) {
      const Letter x = q_.word[i];
      const VertexId a = path_[i];
      const VertexId b = path_[i + 1];
      std::optional<Step> step;
      for (EdgeId id : g.incident(a)) {
        const Edge& e = g.edge(id);
        if (x > 0 && e.label == x && e.origin == a && e.terminus == b) step = Step{id, Direction::Forward};
        if (x < 0 && e.label == -x && e.terminus == a && e.origin == b) step = Step{id, Direction::Backward};
        if (step) break;
      }
      if (!step) throw std::logic_error("readability witness path is broken");
      steps.push_back(*step);
    }
    if (pendant_) {
      VertexId leaf = g.add_vertex();
      g.add_edge(0, leaf, 1);
    }
    g.set_base(0);
    out.graph = std::move(g);
    out.path = Path{0, std::move(steps)};
  }

  struct LoggedEdge {
    std::uint32_t from;
    Letter letter;
    std::uint32_t to;
  };

  const ReadabilityQuery& q_;
  std::size_t width_;
  std::size_t max_edges_;
  std::size_t full_degree_;
  std::vector<std::vector<bool>> suffix_generators_;
  std::vector<std::uint32_t> out_;
  std::uint32_t vertex_count_ = 0;
  std::vector<LoggedEdge> edge_log_;
  std::vector<std::uint32_t> label_count_;
  std::vector<std::uint32_t> path_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  bool pendant_ = false;
};

}  // namespace detail

inline ReadabilityAnswer is_readable(const ReadabilityQuery& q) {
  q.validate();
  return detail::QuotientSearch(q).run();
}

/// mu-readability: rank at most m - 1, no degree requirement.
inline ReadabilityQuery mu_readability_query(const Word& w, int m, const Rational& mu,
                                             std::optional<std::uint64_t> node_budget = {}) {
  return ReadabilityQuery{w, m, mu, static_cast<std::size_t>(m - 1), false, node_budget};
}

/// (mu, L)-readability: rank at most L and a vertex of degree < 2m.
inline ReadabilityQuery mu_L_readability_query(const Word& w, int m, const Rational& mu,
                                               std::size_t rank_bound,
                                               std::optional<std::uint64_t> node_budget = {}) {
  return ReadabilityQuery{w, m, mu, rank_bound, true, node_budget};
}

}  // namespace aog
