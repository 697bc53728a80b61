#pragma once

// Labeled graphs over the free group (F-graphs) and the moves on them:
// folds, removal of degree-one vertices (R), attaching a path (M1), removing
// an arc (M2) and the combined attach-then-remove surgery (AO).
//
// Edges are stored with a positive label; traversing an edge backwards reads
// the inverse letter. Vertex and edge ids are never reused, so every
// ordering decision below ("lowest id first") is reproducible.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aog/words.hpp"

namespace aog {

using VertexId = std::size_t;
using EdgeId = std::size_t;

struct Edge {
  EdgeId id = 0;
  VertexId origin = 0;
  VertexId terminus = 0;
  int label = 1;  // generator index, always positive

  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class Direction : unsigned char { Forward, Backward };

constexpr Direction flip(Direction d) noexcept {
  return d == Direction::Forward ? Direction::Backward : Direction::Forward;
}

struct Step {
  EdgeId edge = 0;
  Direction dir = Direction::Forward;

  friend bool operator==(const Step&, const Step&) = default;
};

constexpr Step reversed(Step s) noexcept { return {s.edge, flip(s.dir)}; }

inline std::vector<Step> reversed(std::span<const Step> steps) {
  std::vector<Step> out;
  out.reserve(steps.size());
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) out.push_back(reversed(*it));
  return out;
}

/// Cancels adjacent e, e^-1 pairs.
inline std::vector<Step> reduce_walk(std::span<const Step> steps) {
  std::vector<Step> out;
  out.reserve(steps.size());
  for (Step s : steps) {
    if (!out.empty() && out.back() == reversed(s)) {
      out.pop_back();
    } else {
      out.push_back(s);
    }
  }
  return out;
}

struct Path {
  VertexId start = 0;
  std::vector<Step> steps;

  std::size_t size() const noexcept { return steps.size(); }
  bool empty() const noexcept { return steps.empty(); }

  friend bool operator==(const Path&, const Path&) = default;
};

class FGraph {
 public:
  explicit FGraph(int alphabet_rank = 2) : rank_(alphabet_rank) {
    if (alphabet_rank < 1) throw std::invalid_argument("alphabet rank must be positive");
  }

  int alphabet_rank() const noexcept { return rank_; }

  VertexId add_vertex() {
    VertexId v = alive_.size();
    alive_.push_back(true);
    incident_.emplace_back();
    ++vertex_count_;
    return v;
  }

  /// Re-creates a vertex with a known id (used when replaying move records).
  void add_vertex_with_id(VertexId v) {
    if (v < alive_.size() && alive_[v]) throw std::invalid_argument("vertex id in use");
    if (v >= alive_.size()) {
      alive_.resize(v + 1, false);
      incident_.resize(v + 1);
    }
    alive_[v] = true;
    ++vertex_count_;
  }

  /// Adds an edge reading `label` from `from` to `to`; a negative label is
  /// stored as the reversed positive edge.
  EdgeId add_edge(VertexId from, VertexId to, Letter label) {
    if (label == 0 || generator_of(label) > rank_) {
      throw std::out_of_range("edge label outside alphabet");
    }
    Edge e{edges_.size(), from, to, label};
    if (label < 0) e = Edge{edges_.size(), to, from, -label};
    insert_edge(e);
    return e.id;
  }

  void add_edge_with_id(const Edge& e) {
    if (e.id < edges_.size() && edges_[e.id]) throw std::invalid_argument("edge id in use");
    if (e.label < 1 || e.label > rank_) throw std::out_of_range("edge label outside alphabet");
    insert_edge(e);
  }

  void remove_edge(EdgeId id) {
    const Edge e = edge(id);
    erase_incidence(e.origin, id);
    erase_incidence(e.terminus, id);
    edges_[id].reset();
    --edge_count_;
  }

  void remove_vertex(VertexId v) {
    require_vertex(v);
    if (!incident_[v].empty()) throw std::logic_error("removing a vertex that still has edges");
    alive_[v] = false;
    --vertex_count_;
    if (base_ == v) base_.reset();
  }

  /// Moves every edge end at `gone` to `keep` and deletes `gone`.
  void merge_vertices(VertexId keep, VertexId gone) {
    require_vertex(keep);
    require_vertex(gone);
    if (keep == gone) return;
    std::vector<EdgeId> moving = incident_[gone];
    moving.erase(std::unique(moving.begin(), moving.end()), moving.end());
    for (EdgeId id : moving) {
      Edge e = edge(id);
      remove_edge(id);
      if (e.origin == gone) e.origin = keep;
      if (e.terminus == gone) e.terminus = keep;
      insert_edge(e);
    }
    bool was_base = base_ == gone;
    remove_vertex(gone);
    if (was_base) base_ = keep;
  }

  bool has_vertex(VertexId v) const noexcept { return v < alive_.size() && alive_[v]; }
  bool has_edge(EdgeId e) const noexcept { return e < edges_.size() && edges_[e].has_value(); }

  const Edge& edge(EdgeId id) const {
    if (!has_edge(id)) throw std::out_of_range("no edge " + std::to_string(id));
    return *edges_[id];
  }

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t vertex_capacity() const noexcept { return alive_.size(); }
  std::size_t edge_capacity() const noexcept { return edges_.size(); }

  std::vector<VertexId> vertices() const {
    std::vector<VertexId> out;
    out.reserve(vertex_count_);
    for (VertexId v = 0; v < alive_.size(); ++v)
      if (alive_[v]) out.push_back(v);
    return out;
  }

  std::vector<EdgeId> edges() const {
    std::vector<EdgeId> out;
    out.reserve(edge_count_);
    for (EdgeId e = 0; e < edges_.size(); ++e)
      if (edges_[e]) out.push_back(e);
    return out;
  }

  /// Incident edge ids in ascending order; a loop is listed twice.
  std::span<const EdgeId> incident(VertexId v) const {
    require_vertex(v);
    return incident_[v];
  }

  /// Loops count twice.
  std::size_t degree(VertexId v) const { return incident(v).size(); }

  std::optional<VertexId> base() const noexcept { return base_; }
  void set_base(VertexId v) {
    require_vertex(v);
    base_ = v;
  }

  VertexId tail(Step s) const {
    const Edge& e = edge(s.edge);
    return s.dir == Direction::Forward ? e.origin : e.terminus;
  }
  VertexId head(Step s) const {
    const Edge& e = edge(s.edge);
    return s.dir == Direction::Forward ? e.terminus : e.origin;
  }
  Letter label(Step s) const {
    const Edge& e = edge(s.edge);
    return s.dir == Direction::Forward ? e.label : -e.label;
  }

  /// Step along `id` leaving `from`.
  Step step_from(EdgeId id, VertexId from) const {
    const Edge& e = edge(id);
    if (e.origin == from) return {id, Direction::Forward};
    if (e.terminus == from) return {id, Direction::Backward};
    throw std::logic_error("edge is not incident to vertex");
  }

  bool is_connected() const {
    if (vertex_count_ == 0) return false;
    std::vector<char> seen(alive_.size(), false);
    VertexId start = vertices().front();
    std::vector<VertexId> stack{start};
    seen[start] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (EdgeId id : incident_[v]) {
        const Edge& e = *edges_[id];
        VertexId w = e.origin == v ? e.terminus : e.origin;
        if (!seen[w]) {
          seen[w] = true;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    return reached == vertex_count_;
  }

  void require_vertex(VertexId v) const {
    if (!has_vertex(v)) throw std::out_of_range("no vertex " + std::to_string(v));
  }

 private:
  void insert_edge(const Edge& e) {
    require_vertex(e.origin);
    require_vertex(e.terminus);
    if (e.id >= edges_.size()) edges_.resize(e.id + 1);
    edges_[e.id] = e;
    insert_incidence(e.origin, e.id);
    insert_incidence(e.terminus, e.id);
    ++edge_count_;
  }

  void insert_incidence(VertexId v, EdgeId id) {
    auto& list = incident_[v];
    list.insert(std::upper_bound(list.begin(), list.end(), id), id);
  }

  void erase_incidence(VertexId v, EdgeId id) {
    auto& list = incident_[v];
    auto it = std::lower_bound(list.begin(), list.end(), id);
    if (it != list.end() && *it == id) list.erase(it);
  }

  int rank_;
  std::vector<char> alive_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<std::optional<Edge>> edges_;
  std::optional<VertexId> base_;
  std::size_t vertex_count_ = 0;
  std::size_t edge_count_ = 0;
};

// ---------------------------------------------------------------------------
// Paths and labels

inline VertexId path_end(const FGraph& g, const Path& p) {
  VertexId v = p.start;
  for (Step s : p.steps) {
    if (g.tail(s) != v) throw std::invalid_argument("path steps are not consecutive");
    v = g.head(s);
  }
  return v;
}

inline bool is_valid_path(const FGraph& g, const Path& p) {
  if (!g.has_vertex(p.start)) return false;
  VertexId v = p.start;
  for (Step s : p.steps) {
    if (!g.has_edge(s.edge) || g.tail(s) != v) return false;
    v = g.head(s);
  }
  return true;
}

inline bool is_reduced_path(const Path& p) {
  for (std::size_t i = 1; i < p.steps.size(); ++i)
    if (p.steps[i] == reversed(p.steps[i - 1])) return false;
  return true;
}

inline std::vector<Letter> raw_label(const FGraph& g, std::span<const Step> steps) {
  std::vector<Letter> out;
  out.reserve(steps.size());
  for (Step s : steps) out.push_back(g.label(s));
  return out;
}

/// Freely reduced label of a path.
inline Word path_label(const FGraph& g, const Path& p) {
  return Word::reduce(raw_label(g, p.steps));
}

/// Rank of the fundamental group, E - V + 1.
inline std::size_t rank(const FGraph& g) {
  if (!g.is_connected()) throw std::invalid_argument("rank of a disconnected graph");
  return g.edge_count() + 1 - g.vertex_count();
}

inline bool is_folded(const FGraph& g) {
  for (VertexId v : g.vertices()) {
    std::set<int> seen;
    auto inc = g.incident(v);
    for (std::size_t i = 0; i < inc.size(); ++i) {
      const EdgeId id = inc[i];
      if (i > 0 && inc[i - 1] == id) continue;  // loops are listed twice
      const Edge& e = g.edge(id);
      if (e.origin == v && !seen.insert(e.label).second) return false;
      if (e.terminus == v && !seen.insert(-e.label).second) return false;
    }
  }
  return true;
}

/// One line per edge, "origin→terminus:label", by ascending edge id.
inline std::string dump(const FGraph& g) {
  std::ostringstream out;
  for (EdgeId id : g.edges()) {
    const Edge& e = g.edge(id);
    out << e.origin << "→" << e.terminus << ':' << letter_char(e.label) << '\n';
  }
  return out.str();
}

/// Attaches a fresh path spelling `w` from `from` to `to`; returns its steps.
inline std::vector<Step> attach_path(FGraph& g, VertexId from, VertexId to, const Word& w) {
  if (w.empty()) {
    if (from != to) throw std::invalid_argument("empty path between distinct vertices");
    return {};
  }
  std::vector<Step> steps;
  VertexId v = from;
  for (std::size_t i = 0; i < w.size(); ++i) {
    VertexId next = (i + 1 == w.size()) ? to : g.add_vertex();
    EdgeId id = g.add_edge(v, next, w[i]);
    steps.push_back(w[i] > 0 ? Step{id, Direction::Forward} : Step{id, Direction::Backward});
    v = next;
  }
  return steps;
}

/// Wedge of loop-paths at a single base vertex, one per word.
inline FGraph bouquet(std::span<const Word> words, int alphabet_rank) {
  FGraph g(alphabet_rank);
  VertexId base = g.add_vertex();
  g.set_base(base);
  for (const Word& w : words) {
    if (w.empty()) throw std::invalid_argument("bouquet of an empty word");
    attach_path(g, base, base, w);
  }
  return g;
}

inline FGraph bouquet(std::span<const Word> words) {
  int m = 2;
  for (const Word& w : words) m = std::max(m, w.max_generator());
  return bouquet(words, m);
}

/// The wedge of the m alphabet loops, in any id order.
inline bool is_alphabet_bouquet(const FGraph& g) {
  if (g.vertex_count() != 1 || g.edge_count() != static_cast<std::size_t>(g.alphabet_rank()))
    return false;
  std::set<int> labels;
  for (EdgeId id : g.edges()) labels.insert(g.edge(id).label);
  return labels.size() == static_cast<std::size_t>(g.alphabet_rank());
}

// ---------------------------------------------------------------------------
// Deterministic tracing

inline std::optional<Step> find_step(const FGraph& g, VertexId v, Letter x) {
  for (EdgeId id : g.incident(v)) {
    const Edge& e = g.edge(id);
    if (x > 0 && e.origin == v && e.label == x) return Step{id, Direction::Forward};
    if (x < 0 && e.terminus == v && e.label == -x) return Step{id, Direction::Backward};
  }
  return std::nullopt;
}

/// The path from `start` spelling `w`, if tracing never dies. Deterministic
/// on folded graphs (on unfolded ones the lowest edge id wins).
inline std::optional<Path> trace_word(const FGraph& g, VertexId start, const Word& w) {
  g.require_vertex(start);
  Path p{start, {}};
  VertexId v = start;
  for (Letter x : w) {
    auto s = find_step(g, v, x);
    if (!s) return std::nullopt;
    p.steps.push_back(*s);
    v = g.head(*s);
  }
  return p;
}

/// Dense transition table for repeated tracing in a folded graph.
class Transitions {
 public:
  explicit Transitions(const FGraph& g)
      : width_(2 * static_cast<std::size_t>(g.alphabet_rank())),
        table_(g.vertex_capacity() * width_, kNone) {
    for (EdgeId id : g.edges()) {
      const Edge& e = g.edge(id);
      set(e.origin, e.label, Step{id, Direction::Forward}, e.terminus);
      set(e.terminus, -e.label, Step{id, Direction::Backward}, e.origin);
    }
  }

  struct Move {
    Step step;
    VertexId target;
  };

  std::optional<Move> next(VertexId v, Letter x) const {
    const Entry& en = table_[v * width_ + static_cast<std::size_t>(letter_key(x))];
    if (en.target == kNoVertex) return std::nullopt;
    return Move{en.step, en.target};
  }

  bool has(VertexId v, Letter x) const {
    return table_[v * width_ + static_cast<std::size_t>(letter_key(x))].target != kNoVertex;
  }

 private:
  static constexpr VertexId kNoVertex = static_cast<VertexId>(-1);
  struct Entry {
    Step step;
    VertexId target;
  };
  static constexpr Entry kNone{Step{}, kNoVertex};

  void set(VertexId v, Letter x, Step s, VertexId target) {
    Entry& en = table_[v * width_ + static_cast<std::size_t>(letter_key(x))];
    if (en.target == kNoVertex) en = Entry{s, target};
  }

  std::size_t width_;
  std::vector<Entry> table_;
};

// ---------------------------------------------------------------------------
// Spanning-tree bases

/// Free basis of pi_1(g, base) from a breadth-first spanning tree (edges
/// scanned by ascending id); one generator per non-tree edge, in ascending
/// edge-id order.
struct SpanningBasis {
  VertexId base = 0;
  std::vector<int> symbol_of_edge;  // 1-based generator index, 0 for tree edges
  std::vector<EdgeId> generators;
  std::vector<Path> loops;
  std::vector<Word> labels;

  std::size_t rank() const noexcept { return generators.size(); }

  /// Expresses a closed walk at `base` in this basis as a word over the
  /// symbols 1..rank.
  Word express(std::span<const Step> walk) const {
    std::vector<Letter> raw;
    for (Step s : walk) {
      int sym = s.edge < symbol_of_edge.size() ? symbol_of_edge[s.edge] : 0;
      if (sym > 0) raw.push_back(s.dir == Direction::Forward ? sym : -sym);
    }
    return Word::reduce(raw);
  }
};

inline SpanningBasis spanning_basis(const FGraph& g, VertexId x0) {
  g.require_vertex(x0);
  if (!g.is_connected()) throw std::invalid_argument("basis of a disconnected graph");
  SpanningBasis b;
  b.base = x0;
  std::vector<char> seen(g.vertex_capacity(), false);
  std::vector<char> tree_edge(g.edge_capacity(), false);
  std::vector<std::optional<Step>> parent(g.vertex_capacity());  // step arriving from parent
  std::queue<VertexId> queue;
  queue.push(x0);
  seen[x0] = true;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop();
    for (EdgeId id : g.incident(v)) {
      const Edge& e = g.edge(id);
      VertexId w = e.origin == v ? e.terminus : e.origin;
      if (seen[w]) continue;
      seen[w] = true;
      tree_edge[id] = true;
      parent[w] = g.step_from(id, v);
      queue.push(w);
    }
  }
  auto tree_path = [&](VertexId v) {
    std::vector<Step> rev;
    while (parent[v]) {
      rev.push_back(*parent[v]);
      v = g.tail(*parent[v]);
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
  };
  b.symbol_of_edge.assign(g.edge_capacity(), 0);
  for (EdgeId id : g.edges()) {
    if (tree_edge[id]) continue;
    b.generators.push_back(id);
    b.symbol_of_edge[id] = static_cast<int>(b.generators.size());
    const Edge& e = g.edge(id);
    std::vector<Step> steps = tree_path(e.origin);
    steps.push_back({id, Direction::Forward});
    std::vector<Step> back = tree_path(e.terminus);
    auto back_rev = reversed(back);
    steps.insert(steps.end(), back_rev.begin(), back_rev.end());
    Path loop{x0, reduce_walk(steps)};
    b.labels.push_back(path_label(g, loop));
    b.loops.push_back(std::move(loop));
  }
  return b;
}

inline std::vector<Word> free_basis(const FGraph& g, VertexId x0) {
  return spanning_basis(g, x0).labels;
}

/// Substitutes words for the basis symbols of `w`.
inline Word substitute(const Word& w, std::span<const Word> images) {
  std::vector<Letter> raw;
  for (Letter x : w) {
    std::size_t i = static_cast<std::size_t>(generator_of(x)) - 1;
    if (i >= images.size()) throw std::out_of_range("basis symbol out of range");
    const Word& img = images[i];
    if (x > 0) {
      raw.insert(raw.end(), img.begin(), img.end());
    } else {
      for (auto it = img.end(); it != img.begin();) raw.push_back(inverse(*--it));
    }
  }
  return Word::reduce(raw);
}

// ---------------------------------------------------------------------------
// Maximal arcs

struct Arc {
  Path path;
  bool closed = false;
};

/// Partition of the edges into maximal arcs: simple paths whose interior
/// vertices have degree two. A graph that is a single cycle of degree-two
/// vertices comes back as one closed arc.
inline std::vector<Arc> maximal_arcs(const FGraph& g) {
  std::vector<Arc> arcs;
  std::vector<char> used(g.edge_capacity(), false);
  auto walk_from = [&](VertexId start, EdgeId first) {
    Arc arc;
    arc.path.start = start;
    VertexId v = start;
    EdgeId id = first;
    for (;;) {
      Step s = g.step_from(id, v);
      const Edge& e = g.edge(id);
      if (e.origin == e.terminus && e.origin == v) s = {id, Direction::Forward};
      used[id] = true;
      arc.path.steps.push_back(s);
      v = g.head(s);
      if (g.degree(v) != 2 || v == start) break;
      auto inc = g.incident(v);
      EdgeId nxt = inc[0] == id ? inc[1] : inc[0];
      if (used[nxt]) break;
      id = nxt;
    }
    arc.closed = (v == start);
    return arc;
  };
  for (VertexId v : g.vertices()) {
    if (g.degree(v) == 2) continue;
    for (EdgeId id : g.incident(v)) {
      if (!used[id]) arcs.push_back(walk_from(v, id));
    }
  }
  for (VertexId v : g.vertices()) {
    for (EdgeId id : g.incident(v)) {
      if (!used[id]) arcs.push_back(walk_from(v, id));
    }
  }
  return arcs;
}

/// Arc index of every edge (indexed by edge id; unused ids map to -1).
inline std::vector<long> arc_index_of_edges(const FGraph& g, std::span<const Arc> arcs) {
  std::vector<long> idx(g.edge_capacity(), -1);
  for (std::size_t i = 0; i < arcs.size(); ++i)
    for (Step s : arcs[i].path.steps) idx[s.edge] = static_cast<long>(i);
  return idx;
}

// ---------------------------------------------------------------------------
// Moves

enum class MoveKind { Fold, R, M1, M2, AO };

inline const char* to_string(MoveKind k) {
  switch (k) {
    case MoveKind::Fold: return "Fold";
    case MoveKind::R: return "R";
    case MoveKind::M1: return "M1";
    case MoveKind::M2: return "M2";
    case MoveKind::AO: return "AO";
  }
  return "?";
}

/// One move together with the data needed to replay it and to check that
/// the generating tuples before and after are related.
///
/// Replay order: merges, edge removals, vertex removals, vertex additions,
/// edge additions.
///
/// Witnesses: with alpha the pre-move basis labels, beta the post-move basis
/// labels and c the conjugator,
///   c * beta_j * c^-1  =_G  post_in_pre[j](alpha)
///   alpha_i            =_G  c * pre_in_post[i](beta) * c^-1
/// For folds and R moves these hold already in the free group.
struct MoveRecord {
  MoveKind kind = MoveKind::Fold;

  std::vector<std::pair<VertexId, VertexId>> merged_vertices;  // (gone, keep)
  std::vector<Edge> removed_edges;
  std::vector<VertexId> removed_vertices;
  std::vector<VertexId> added_vertices;
  std::vector<Edge> added_edges;
  std::optional<VertexId> base_before;
  std::optional<VertexId> base_after;

  std::vector<Word> pre_basis;
  std::vector<Word> post_basis;
  std::vector<Word> post_in_pre;
  std::vector<Word> pre_in_post;
  Word conjugator;

  std::size_t edges_before = 0;
  std::size_t edges_after = 0;
};

/// Rebuilds the post-move graph from the pre-move graph and a record.
inline FGraph replay(const FGraph& pre, const MoveRecord& rec) {
  FGraph g = pre;
  for (auto [gone, keep] : rec.merged_vertices) g.merge_vertices(keep, gone);
  for (const Edge& e : rec.removed_edges) g.remove_edge(e.id);
  for (VertexId v : rec.removed_vertices) g.remove_vertex(v);
  for (VertexId v : rec.added_vertices) g.add_vertex_with_id(v);
  for (const Edge& e : rec.added_edges) g.add_edge_with_id(e);
  if (rec.base_after) g.set_base(*rec.base_after);
  return g;
}

/// Checks both witness directions of a record with the supplied equality
/// predicate (free equality by default).
template <class Equal>
bool verify_witnesses(const MoveRecord& rec, Equal&& equal) {
  if (rec.post_in_pre.size() != rec.post_basis.size() ||
      rec.pre_in_post.size() != rec.pre_basis.size())
    return false;
  const Word c_inv = inverse(rec.conjugator);
  for (std::size_t j = 0; j < rec.post_basis.size(); ++j) {
    if (!equal(rec.conjugator * rec.post_basis[j] * c_inv,
               substitute(rec.post_in_pre[j], rec.pre_basis)))
      return false;
  }
  for (std::size_t i = 0; i < rec.pre_basis.size(); ++i) {
    if (!equal(rec.pre_basis[i],
               rec.conjugator * substitute(rec.pre_in_post[i], rec.post_basis) * c_inv))
      return false;
  }
  return true;
}

inline bool verify_witnesses(const MoveRecord& rec) {
  return verify_witnesses(rec, [](const Word& u, const Word& v) { return u == v; });
}

namespace detail {

using WalkMap = std::function<std::vector<Step>(const std::vector<Step>&)>;

inline std::vector<Step> identity_walk(const std::vector<Step>& w) { return w; }

// How a move relates closed walks of the two graphs. `anchor` is the pre-move
// vertex standing for the post-move base and `conj` a pre-move walk from the
// old base to it.
struct WalkCorrespondence {
  std::vector<Step> conj;
  WalkMap to_post = identity_walk;
  WalkMap to_pre = identity_walk;
};

/// Replaces whole traversals of `block` (either direction) inside `walk`.
inline std::vector<Step> substitute_block(const std::vector<Step>& walk,
                                          const std::vector<Step>& block,
                                          const std::vector<Step>& replacement) {
  if (block.empty()) return walk;
  std::set<EdgeId> in_block;
  for (Step s : block) in_block.insert(s.edge);
  const auto block_rev = reversed(block);
  const auto repl_rev = reversed(replacement);
  std::vector<Step> out;
  std::size_t i = 0;
  while (i < walk.size()) {
    if (!in_block.count(walk[i].edge)) {
      out.push_back(walk[i++]);
      continue;
    }
    auto matches = [&](const std::vector<Step>& b) {
      if (i + b.size() > walk.size()) return false;
      return std::equal(b.begin(), b.end(), walk.begin() + static_cast<std::ptrdiff_t>(i));
    };
    if (matches(block)) {
      out.insert(out.end(), replacement.begin(), replacement.end());
    } else if (matches(block_rev)) {
      out.insert(out.end(), repl_rev.begin(), repl_rev.end());
    } else {
      throw std::logic_error("closed walk traverses an arc only partially");
    }
    i += block.size();
  }
  return out;
}

inline void fill_witnesses(MoveRecord& rec, const FGraph& pre, const SpanningBasis& pre_b,
                           const FGraph& post, const WalkCorrespondence& corr) {
  if (!post.base()) return;
  SpanningBasis post_b = spanning_basis(post, *post.base());
  rec.pre_basis = pre_b.labels;
  rec.post_basis = post_b.labels;
  rec.conjugator = Word::reduce(raw_label(pre, corr.conj));
  const auto conj_rev = reversed(corr.conj);
  for (const Path& loop : post_b.loops) {
    std::vector<Step> lifted = corr.conj;
    auto mid = corr.to_pre(loop.steps);
    lifted.insert(lifted.end(), mid.begin(), mid.end());
    lifted.insert(lifted.end(), conj_rev.begin(), conj_rev.end());
    rec.post_in_pre.push_back(pre_b.express(reduce_walk(lifted)));
  }
  for (const Path& loop : pre_b.loops) {
    std::vector<Step> at_anchor = conj_rev;
    at_anchor.insert(at_anchor.end(), loop.steps.begin(), loop.steps.end());
    at_anchor.insert(at_anchor.end(), corr.conj.begin(), corr.conj.end());
    auto pushed = corr.to_post(reduce_walk(at_anchor));
    rec.pre_in_post.push_back(post_b.express(reduce_walk(pushed)));
  }
}

inline void begin_record(MoveRecord& rec, MoveKind kind, const FGraph& g) {
  rec.kind = kind;
  rec.base_before = g.base();
  rec.edges_before = g.edge_count();
}

inline void end_record(MoveRecord& rec, const FGraph& g) {
  rec.base_after = g.base();
  rec.edges_after = g.edge_count();
}

struct FoldCandidate {
  EdgeId first;
  EdgeId second;
  Letter letter;  // read by both edges when leaving the vertex
};

// Lowest-id pair of distinct edges leaving `v` with the same signed label.
inline std::optional<FoldCandidate> fold_candidate(const FGraph& g, VertexId v) {
  std::map<int, EdgeId> first_with;
  std::optional<FoldCandidate> best;
  for (EdgeId id : g.incident(v)) {
    const Edge& e = g.edge(id);
    for (int signed_label : {e.origin == v ? e.label : 0, e.terminus == v ? -e.label : 0}) {
      if (signed_label == 0) continue;
      auto [it, fresh] = first_with.emplace(signed_label, id);
      if (!fresh && it->second != id) {
        FoldCandidate c{it->second, id, signed_label};
        if (!best || std::pair(c.first, c.second) < std::pair(best->first, best->second)) best = c;
      }
    }
  }
  return best;
}

// Folds e2 onto e1; both read `letter` when leaving their common vertex x.
inline void fold_pair(FGraph& g, EdgeId e1, EdgeId e2, Letter letter,
                      MoveRecord* rec) {
  auto far_end = [&](EdgeId id) {
    const Edge& e = g.edge(id);
    return letter > 0 ? e.terminus : e.origin;
  };
  const VertexId y1 = far_end(e1);
  const VertexId y2 = far_end(e2);

  std::optional<FGraph> pre;
  std::optional<SpanningBasis> pre_b;
  if (rec && g.base()) {
    pre = g;
    pre_b = spanning_basis(g, *g.base());
    begin_record(*rec, MoveKind::Fold, g);
  }

  const VertexId keep = std::min(y1, y2);
  const VertexId gone = std::max(y1, y2);
  if (y1 != y2) g.merge_vertices(keep, gone);
  const Edge removed = g.edge(e2);
  g.remove_edge(e2);

  if (!pre) return;
  if (y1 != y2) rec->merged_vertices.push_back({gone, keep});
  rec->removed_edges.push_back(removed);
  end_record(*rec, g);

  WalkCorrespondence corr;
  const FGraph& P = *pre;
  // y1 -> x -> y2 along e1 backwards then e2, reading letter^-1 letter.
  const Direction out = letter > 0 ? Direction::Forward : Direction::Backward;
  const std::vector<Step> bridge{reversed(Step{e1, out}), Step{e2, out}};
  auto connector = [bridge, y1](VertexId a, VertexId) {
    return a == y1 ? bridge : reversed(bridge);
  };
  const VertexId pre_base = *P.base();
  corr.to_pre = [&P, connector, pre_base, y1, y2](const std::vector<Step>& walk) {
    std::vector<Step> out;
    VertexId cur = pre_base;
    auto join = [&](VertexId target) {
      if (cur == target) return;
      bool ok = (cur == y1 || cur == y2) && (target == y1 || target == y2);
      if (!ok) throw std::logic_error("fold lift: walk breaks outside the merged pair");
      auto c = connector(cur, target);
      out.insert(out.end(), c.begin(), c.end());
      cur = target;
    };
    for (Step s : walk) {
      join(P.tail(s));
      out.push_back(s);
      cur = P.head(s);
    }
    join(pre_base);
    return out;
  };
  corr.to_post = [e1, e2](const std::vector<Step>& walk) {
    std::vector<Step> out = walk;
    for (Step& s : out)
      if (s.edge == e2) s.edge = e1;
    return out;
  };
  fill_witnesses(*rec, P, *pre_b, g, corr);
}

}  // namespace detail

/// Folds until no vertex carries two edges reading the same letter. Vertices
/// are processed lowest id first and, at a vertex, the lowest pair of edge
/// ids is folded first. Records are appended to `records` when given.
inline void fold_all_in_place(FGraph& g, std::vector<MoveRecord>* records = nullptr) {
  if (!g.is_connected()) throw std::invalid_argument("fold_all needs a connected graph");
  std::set<VertexId> pending;
  for (VertexId v : g.vertices()) pending.insert(v);
  while (!pending.empty()) {
    VertexId v = *pending.begin();
    if (!g.has_vertex(v)) {
      pending.erase(pending.begin());
      continue;
    }
    auto cand = detail::fold_candidate(g, v);
    if (!cand) {
      pending.erase(pending.begin());
      continue;
    }
    const Edge E1 = g.edge(cand->first);
    const Edge E2 = g.edge(cand->second);
    MoveRecord rec;
    detail::fold_pair(g, cand->first, cand->second, cand->letter, records ? &rec : nullptr);
    if (records) records->push_back(std::move(rec));
    for (VertexId w : {E1.origin, E1.terminus, E2.origin, E2.terminus}) {
      if (g.has_vertex(w)) pending.insert(w);
    }
  }
}

inline std::pair<FGraph, std::vector<MoveRecord>> fold_all(FGraph g) {
  std::vector<MoveRecord> records;
  fold_all_in_place(g, &records);
  return {std::move(g), std::move(records)};
}

/// Removes degree-one vertices (lowest id first) until none is left or a
/// single vertex remains. When the base goes, it moves to the neighbour and
/// the record carries the label of the removed edge as conjugator.
inline void remove_degree_one_in_place(FGraph& g, std::vector<MoveRecord>* records = nullptr) {
  if (g.vertex_count() == 0) throw std::invalid_argument("graph would become empty");
  if (!g.is_connected()) throw std::invalid_argument("remove_degree_one needs a connected graph");
  std::set<VertexId> leaves;
  for (VertexId v : g.vertices())
    if (g.degree(v) == 1) leaves.insert(v);
  while (!leaves.empty() && g.vertex_count() > 1) {
    VertexId w = *leaves.begin();
    leaves.erase(leaves.begin());
    if (!g.has_vertex(w) || g.degree(w) != 1) continue;
    const EdgeId id = g.incident(w)[0];
    const Edge e = g.edge(id);
    const VertexId u = e.origin == w ? e.terminus : e.origin;

    MoveRecord rec;
    std::optional<FGraph> pre;
    std::optional<SpanningBasis> pre_b;
    if (records && g.base()) {
      pre = g;
      pre_b = spanning_basis(g, *g.base());
      detail::begin_record(rec, MoveKind::R, g);
    }
    const bool base_moves = g.base() == w;
    g.remove_edge(id);
    g.remove_vertex(w);
    if (base_moves) g.set_base(u);
    if (g.degree(u) == 1) leaves.insert(u);

    if (pre) {
      rec.removed_edges.push_back(e);
      rec.removed_vertices.push_back(w);
      detail::end_record(rec, g);
      detail::WalkCorrespondence corr;
      if (base_moves) corr.conj = {pre->step_from(id, w)};
      corr.to_post = [id](const std::vector<Step>& walk) {
        for (Step s : walk)
          if (s.edge == id) throw std::logic_error("closed walk uses a removed hanging edge");
        return walk;
      };
      detail::fill_witnesses(rec, *pre, *pre_b, g, corr);
      records->push_back(std::move(rec));
    }
  }
}

inline std::pair<FGraph, std::vector<MoveRecord>> remove_degree_one(FGraph g) {
  std::vector<MoveRecord> records;
  remove_degree_one_in_place(g, &records);
  return {std::move(g), std::move(records)};
}

namespace detail {

// Interior vertices of a path, in order.
inline std::vector<VertexId> interior_vertices(const FGraph& g, const Path& p) {
  std::vector<VertexId> out;
  VertexId v = p.start;
  for (std::size_t i = 0; i + 1 < p.steps.size(); ++i) {
    v = g.head(p.steps[i]);
    out.push_back(v);
  }
  return out;
}

// p is nonempty, simple, and runs through degree-two vertices only, hence
// lies inside one maximal arc.
inline void require_inside_arc(const FGraph& g, const Path& p, const char* what) {
  if (p.steps.empty()) throw std::invalid_argument(std::string(what) + " is empty");
  if (!is_valid_path(g, p)) throw std::invalid_argument(std::string(what) + " is not a path");
  std::set<EdgeId> edges;
  for (Step s : p.steps)
    if (!edges.insert(s.edge).second)
      throw std::invalid_argument(std::string(what) + " repeats an edge");
  std::set<VertexId> seen;
  for (VertexId v : interior_vertices(g, p)) {
    if (g.degree(v) != 2)
      throw std::invalid_argument(std::string(what) + " leaves its maximal arc");
    if (!seen.insert(v).second || v == p.start)
      throw std::invalid_argument(std::string(what) + " is not simple");
  }
}

// If the base is an interior vertex of `p`, the walk from the base back to
// the start of p; empty otherwise.
inline std::vector<Step> rebase_out_of(const FGraph& g, const Path& p) {
  if (!g.base()) return {};
  auto inner = interior_vertices(g, p);
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner[i] == *g.base()) {
      std::vector<Step> head(p.steps.begin(), p.steps.begin() + static_cast<std::ptrdiff_t>(i + 1));
      return reversed(head);
    }
  }
  return {};
}

// Deletes the edges of p and its interior vertices, recording both.
inline void remove_path(FGraph& g, const Path& p, MoveRecord& rec) {
  const auto inner = interior_vertices(g, p);
  for (Step s : p.steps) {
    rec.removed_edges.push_back(g.edge(s.edge));
    g.remove_edge(s.edge);
  }
  for (VertexId v : inner) {
    rec.removed_vertices.push_back(v);
    g.remove_vertex(v);
  }
}

inline void record_additions(const FGraph& g, const std::vector<Step>& steps, MoveRecord& rec) {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    rec.added_edges.push_back(g.edge(steps[i].edge));
    if (i + 1 < steps.size()) rec.added_vertices.push_back(g.head(steps[i]));
  }
}

}  // namespace detail

/// Move M1: attaches a new path spelling `replacement` from o(p) to t(p).
/// The caller certifies label(p) =_G replacement.
inline MoveRecord apply_M1_in_place(FGraph& g, const Path& p, const Word& replacement) {
  if (!is_valid_path(g, p)) throw std::invalid_argument("M1: p is not a path in the graph");
  if (replacement.empty()) throw std::invalid_argument("M1: empty replacement word");
  if (!g.is_connected()) throw std::invalid_argument("M1 needs a connected graph");
  MoveRecord rec;
  detail::begin_record(rec, MoveKind::M1, g);
  std::optional<SpanningBasis> pre_b;
  std::optional<FGraph> pre;
  if (g.base()) {
    pre = g;
    pre_b = spanning_basis(g, *g.base());
  }
  const VertexId to = path_end(g, p);
  auto added = attach_path(g, p.start, to, replacement);
  detail::record_additions(g, added, rec);
  detail::end_record(rec, g);
  if (pre) {
    detail::WalkCorrespondence corr;
    corr.to_pre = [added, p](const std::vector<Step>& walk) {
      return detail::substitute_block(walk, added, p.steps);
    };
    detail::fill_witnesses(rec, *pre, *pre_b, g, corr);
  }
  return rec;
}

inline std::pair<FGraph, MoveRecord> apply_M1(FGraph g, const Path& p, const Word& replacement) {
  MoveRecord rec = apply_M1_in_place(g, p, replacement);
  return {std::move(g), std::move(rec)};
}

/// Move M2: removes the simple path p (inside a maximal arc), given an
/// edge-disjoint path `alt` with the same endpoints. The caller certifies
/// label(alt) =_G label(p).
inline MoveRecord apply_M2_in_place(FGraph& g, const Path& p, const Path& alt) {
  detail::require_inside_arc(g, p, "M2 path");
  if (!is_valid_path(g, alt)) throw std::invalid_argument("M2: alternative is not a path");
  if (alt.start != p.start || path_end(g, alt) != path_end(g, p))
    throw std::invalid_argument("M2: alternative has different endpoints");
  std::set<EdgeId> in_p;
  for (Step s : p.steps) in_p.insert(s.edge);
  for (Step s : alt.steps)
    if (in_p.count(s.edge)) throw std::invalid_argument("M2: alternative shares an edge with p");

  FGraph pre = g;
  std::optional<SpanningBasis> pre_b;
  if (g.base()) pre_b = spanning_basis(g, *g.base());

  FGraph work = g;
  MoveRecord rec;
  detail::begin_record(rec, MoveKind::M2, work);
  auto conj = detail::rebase_out_of(work, p);
  if (!conj.empty()) work.set_base(p.start);
  detail::remove_path(work, p, rec);
  if (!work.is_connected()) throw std::invalid_argument("M2: removal disconnects the graph");
  detail::end_record(rec, work);
  g = std::move(work);
  if (pre_b) {
    detail::WalkCorrespondence corr;
    corr.conj = conj;
    corr.to_post = [p, alt](const std::vector<Step>& walk) {
      return detail::substitute_block(walk, p.steps, alt.steps);
    };
    detail::fill_witnesses(rec, pre, *pre_b, g, corr);
  }
  return rec;
}

inline std::pair<FGraph, MoveRecord> apply_M2(FGraph g, const Path& p, const Path& alt) {
  MoveRecord rec = apply_M2_in_place(g, p, alt);
  return {std::move(g), std::move(rec)};
}

/// Move AO: attaches a path f spelling `y` from t(p2) to o(p1), then removes
/// p'. The caller certifies label(p1) label(p') label(p2) y =_G 1.
/// Requires |p'| > |y| so the edge count strictly drops.
inline MoveRecord apply_AO_in_place(FGraph& g, const Path& p1, const Path& mid, const Path& p2,
                                    const Word& y) {
  detail::require_inside_arc(g, mid, "AO middle path");
  if (!is_valid_path(g, p1) || !is_valid_path(g, p2))
    throw std::invalid_argument("AO: side paths are not paths in the graph");
  if (path_end(g, p1) != mid.start || path_end(g, mid) != p2.start)
    throw std::invalid_argument("AO: p1, p', p2 are not consecutive");
  std::vector<Step> whole = p1.steps;
  whole.insert(whole.end(), mid.steps.begin(), mid.steps.end());
  whole.insert(whole.end(), p2.steps.begin(), p2.steps.end());
  if (!is_reduced_path(Path{p1.start, whole})) throw std::invalid_argument("AO: p1 p' p2 is not reduced");
  std::set<EdgeId> in_mid;
  for (Step s : mid.steps) in_mid.insert(s.edge);
  for (const Path* side : {&p1, &p2})
    for (Step s : side->steps)
      if (in_mid.count(s.edge)) throw std::invalid_argument("AO: p1 or p2 overlaps p'");
  if (mid.size() <= y.size()) throw std::invalid_argument("AO: |p'| must exceed |y|");
  const VertexId f_from = path_end(g, p2);
  const VertexId f_to = p1.start;
  if (y.empty() && f_from != f_to)
    throw std::invalid_argument("AO: empty y between distinct vertices");

  FGraph pre = g;
  std::optional<SpanningBasis> pre_b;
  if (g.base()) pre_b = spanning_basis(g, *g.base());

  MoveRecord rec;
  detail::begin_record(rec, MoveKind::AO, g);
  auto conj = detail::rebase_out_of(g, mid);
  if (!conj.empty()) g.set_base(mid.start);
  auto f = attach_path(g, f_from, f_to, y);
  detail::record_additions(g, f, rec);
  detail::remove_path(g, mid, rec);
  if (!g.is_connected()) throw std::logic_error("AO left the graph disconnected");
  detail::end_record(rec, g);

  if (pre_b) {
    detail::WalkCorrespondence corr;
    corr.conj = conj;
    std::vector<Step> detour = reversed(p1.steps);
    auto f_rev = reversed(f);
    detour.insert(detour.end(), f_rev.begin(), f_rev.end());
    auto p2_rev = reversed(p2.steps);
    detour.insert(detour.end(), p2_rev.begin(), p2_rev.end());
    corr.to_post = [mid, detour](const std::vector<Step>& walk) {
      return detail::substitute_block(walk, mid.steps, detour);
    };
    const auto whole_rev = reversed(whole);
    corr.to_pre = [f, whole_rev](const std::vector<Step>& walk) {
      return detail::substitute_block(walk, f, whole_rev);
    };
    detail::fill_witnesses(rec, pre, *pre_b, g, corr);
  }
  return rec;
}

inline std::pair<FGraph, MoveRecord> apply_AO(FGraph g, const Path& p1, const Path& mid,
                                              const Path& p2, const Word& y) {
  MoveRecord rec = apply_AO_in_place(g, p1, mid, p2, y);
  return {std::move(g), std::move(rec)};
}

}  // namespace aog
