#pragma once

// Reduction of generating tuples: fold, strip hanging trees, and shorten the
// graph with AO moves along long relator paths until the alphabet bouquet or
// an injectivity certificate is reached. Every move is logged with its two-way
// basis witnesses, so the whole run is checkable afterwards.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "aog/fgraph.hpp"
#include "aog/genericity.hpp"
#include "aog/smallcancel.hpp"
#include "aog/words.hpp"

namespace aog {

struct TraceStep {
  MoveRecord record;
  std::vector<Word> tuple;  // labels of the free basis after the move
};

struct NielsenTrace {
  std::vector<Word> initial_tuple;
  // Basis of the starting wedge and the letter-for-letter dictionary between
  // it and the input tuple (each entry is one basis symbol, possibly inverted).
  std::vector<Word> start_basis;
  std::vector<Word> tuple_in_basis;
  std::vector<Word> basis_in_tuple;
  std::vector<TraceStep> steps;
  std::vector<Word> final_tuple;
  Word conjugator;  // product of the per-move conjugators
};

struct NotInClassWitness {
  FGraph graph;  // union of the maximal arcs met by the path
  Path path;
  Word subword;
  std::size_t relator = 0;
  int sign = 1;
};

enum class ReductionKind { WholeGroup, CertifiedFree, NotInClass };

inline const char* to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::WholeGroup: return "WholeGroup";
    case ReductionKind::CertifiedFree: return "CertifiedFree";
    case ReductionKind::NotInClass: return "NotInClass";
  }
  return "?";
}

struct ReductionVerdict {
  ReductionKind kind = ReductionKind::WholeGroup;
  NielsenTrace trace;
  std::size_t ao_moves = 0;
  // CertifiedFree: free basis of the terminal graph, conjugated back by the
  // accumulated conjugator.
  std::size_t rank = 0;
  std::vector<Word> basis;
  std::string reason;
  std::optional<NotInClassWitness> witness;
  FGraph terminal{2};
};

/// A folded graph without hanging vertices whose vertices all have degree 2m
/// covers the alphabet bouquet, so its rank is V(m - 1) + 1. Anything else is
/// an internal inconsistency.
inline std::optional<std::string> rank_guard(const FGraph& g, int m) {
  if (g.vertex_count() == 0) return std::nullopt;
  for (VertexId v : g.vertices())
    if (g.degree(v) != 2 * static_cast<std::size_t>(m)) return std::nullopt;
  if (is_alphabet_bouquet(g) || rank(g) > static_cast<std::size_t>(m)) return std::nullopt;
  return "2m-regular folded graph of rank " + std::to_string(rank(g)) + " is not the alphabet bouquet";
}

namespace detail {

struct Subpath {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

// Longest run inside one segment whose edges occur exactly once in the whole
// path (so it is simple and meets no other part of the path). Ties go to the
// lower segment, then the earlier start.
inline std::optional<Subpath> pick_isolated_run(const LongRelatorPath& lp) {
  std::map<EdgeId, std::size_t> uses;
  for (Step s : lp.path.steps) ++uses[s.edge];
  std::optional<Subpath> best;
  for (const Segment& seg : lp.segments) {
    std::size_t i = seg.begin;
    while (i < seg.end) {
      if (uses[lp.path.steps[i].edge] != 1) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < seg.end && uses[lp.path.steps[j].edge] == 1) ++j;
      if (!best || j - i > best->size()) best = Subpath{i, j};
      i = j;
    }
  }
  return best;
}

inline Path slice(const FGraph& g, const Path& p, std::size_t begin, std::size_t end) {
  Path out;
  out.start = p.start;
  for (std::size_t i = 0; i < begin; ++i) out.start = g.head(p.steps[i]);
  out.steps.assign(p.steps.begin() + static_cast<std::ptrdiff_t>(begin),
                   p.steps.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

inline FGraph arc_union(const FGraph& g, const LongRelatorPath& lp) {
  const auto arcs = maximal_arcs(g);
  std::set<EdgeId> keep;
  for (const Segment& seg : lp.segments)
    for (Step s : arcs[static_cast<std::size_t>(seg.arc)].path.steps) keep.insert(s.edge);
  FGraph out = g;
  for (EdgeId id : g.edges())
    if (!keep.count(id)) out.remove_edge(id);
  for (VertexId v : g.vertices())
    if (out.degree(v) == 0 && v != lp.path.start) out.remove_vertex(v);
  out.set_base(lp.path.start);
  return out;
}

// Builds the wedge of the tuple's petals and the dictionary between the
// tuple and the wedge's spanning basis. Each basis loop crosses exactly one
// petal's non-tree edge, once, so every entry is a single symbol.
inline FGraph wedge_with_dictionary(const std::vector<Word>& tuple, int m, NielsenTrace& trace) {
  FGraph wedge(m);
  const VertexId base = wedge.add_vertex();
  wedge.set_base(base);
  std::vector<std::vector<Step>> petals;
  for (const Word& w : tuple) petals.push_back(attach_path(wedge, base, base, w));
  const SpanningBasis basis = spanning_basis(wedge, base);
  trace.start_basis = basis.labels;
  trace.basis_in_tuple.assign(basis.labels.size(), Word{});
  for (std::size_t i = 0; i < petals.size(); ++i) {
    Word sym = basis.express(petals[i]);
    if (sym.size() != 1) throw std::logic_error("petal is not a single basis symbol");
    trace.tuple_in_basis.push_back(sym);
    const Letter s = sym[0];
    const Letter t = static_cast<Letter>(i + 1);
    trace.basis_in_tuple[static_cast<std::size_t>(generator_of(s) - 1)] = Word::reduce({s > 0 ? t : -t});
  }
  return wedge;
}

}  // namespace detail

struct ReduceOptions {
  // Refuse presentations failing C1 or C2. Turning this off lets the driver
  // run on anything; a stuck arc analysis then surfaces as NotInClass.
  bool require_conditions = true;
};

/// Runs the reduction on an m-tuple of nontrivial words. C1 and C2 are checked
/// first; C3 is never checked, because a failure of the arc analysis is itself
/// reported as a readable-subword witness.
inline ReductionVerdict reduce_tuple(const std::vector<Word>& tuple, const Presentation& p,
                                     const ClassParams& params, const ReduceOptions& opts = {}) {
  const int m = p.rank;
  if (static_cast<int>(tuple.size()) != m)
    throw std::invalid_argument("tuple must have exactly m = " + std::to_string(m) + " words");
  for (const Word& w : tuple) {
    if (w.empty()) throw std::invalid_argument("tuple contains the trivial word");
    if (w.max_generator() > m) throw std::invalid_argument("tuple word uses a letter outside the alphabet");
  }
  if (auto chk = validate_params(params, m); !chk.valid)
    throw std::invalid_argument("invalid class parameters: " + chk.violated);
  if (opts.require_conditions && !check_Cprime(p, params.lambda).holds)
    throw std::invalid_argument("presentation fails C'(lambda)");
  if (opts.require_conditions && !check_condition_c2(p).holds) throw std::invalid_argument("presentation has a proper-power relator");

  ReductionVerdict out;
  NielsenTrace& trace = out.trace;
  trace.initial_tuple = tuple;
  FGraph g = detail::wedge_with_dictionary(tuple, m, trace);

  auto log = [&](std::vector<MoveRecord>& recs) {
    for (auto& rec : recs) {
      trace.conjugator = trace.conjugator * rec.conjugator;
      auto tuple_now = rec.post_basis;
      trace.steps.push_back({std::move(rec), std::move(tuple_now)});
    }
    recs.clear();
  };
  auto current_basis = [&]() { return spanning_basis(g, *g.base()).labels; };

  for (;;) {
    std::vector<MoveRecord> recs;
    fold_all_in_place(g, &recs);
    log(recs);
    remove_degree_one_in_place(g, &recs);
    log(recs);

    if (is_alphabet_bouquet(g)) {
      out.kind = ReductionKind::WholeGroup;
      for (int i = 1; i <= m; ++i) trace.final_tuple.push_back(Word::reduce({i}));
      break;
    }
    if (auto bad = rank_guard(g, m)) throw std::logic_error(*bad);

    auto lp = find_long_relator_path(g, p, params.lambda);
    if (!lp) {
      out.kind = ReductionKind::CertifiedFree;
      out.rank = rank(g);
      out.reason = "no long relator path, so the label map is injective";
      const Word c_inv = inverse(trace.conjugator);
      for (const Word& b : current_basis()) out.basis.push_back(trace.conjugator * b * c_inv);
      trace.final_tuple = current_basis();
      break;
    }
    const std::size_t r_len = lp->v.size() + lp->y.size();
    auto run = detail::pick_isolated_run(*lp);
    if (!run || less_than_times(static_cast<std::int64_t>(run->size()), 3 * params.lambda,
                                static_cast<std::int64_t>(r_len))) {
      out.kind = ReductionKind::NotInClass;
      out.reason = "every isolated run of the relator path is shorter than 3 lambda |r|";
      out.witness = NotInClassWitness{detail::arc_union(g, *lp), lp->path, lp->v, lp->relator, lp->sign};
      trace.final_tuple = current_basis();
      break;
    }
    if (!less_than_times(static_cast<std::int64_t>(lp->y.size()), 3 * params.lambda,
                         static_cast<std::int64_t>(r_len)) ||
        lp->y.size() >= run->size())
      throw std::logic_error("AO precondition |y| < 3 lambda |r| <= |p'| fails");

    const Path p1 = detail::slice(g, lp->path, 0, run->begin);
    const Path mid = detail::slice(g, lp->path, run->begin, run->end);
    const Path p2 = detail::slice(g, lp->path, run->end, lp->path.size());
    const std::size_t before = g.edge_count();
    recs.push_back(apply_AO_in_place(g, p1, mid, p2, lp->y));
    if (g.edge_count() >= before) throw std::logic_error("AO move did not shorten the graph");
    log(recs);
    ++out.ao_moves;
  }
  out.terminal = g;
  return out;
}

/// Checks a trace: the input-to-wedge dictionary, every move's two-way
/// witnesses in G, the chaining of consecutive bases, the accumulated
/// conjugator and, for WholeGroup runs, that the last basis is the alphabet.
inline bool verify_trace(const NielsenTrace& t, const Presentation& p, ReductionKind kind) {
  DehnReducer dehn(p);
  auto equal = [&](const Word& u, const Word& v) { return dehn.equal(u, v); };
  const std::size_t m = t.initial_tuple.size();
  if (t.tuple_in_basis.size() != m || t.basis_in_tuple.size() != t.start_basis.size()) return false;
  for (std::size_t i = 0; i < m; ++i)
    if (!equal(t.initial_tuple[i], substitute(t.tuple_in_basis[i], t.start_basis))) return false;
  for (std::size_t j = 0; j < t.start_basis.size(); ++j)
    if (!equal(t.start_basis[j], substitute(t.basis_in_tuple[j], t.initial_tuple))) return false;

  std::vector<Word> basis = t.start_basis;
  Word conj;
  for (const TraceStep& step : t.steps) {
    if (step.record.pre_basis != basis) return false;
    if (!verify_witnesses(step.record, equal)) return false;
    if (step.tuple != step.record.post_basis) return false;
    basis = step.tuple;
    conj = conj * step.record.conjugator;
  }
  if (conj != t.conjugator) return false;
  if (kind == ReductionKind::WholeGroup) {
    if (t.final_tuple.size() != m || basis.size() != m) return false;
    std::set<Word> letters(basis.begin(), basis.end());
    for (std::size_t i = 0; i < m; ++i) {
      const Word gen = Word::reduce({static_cast<Letter>(i + 1)});
      if (t.final_tuple[i] != gen || !letters.count(gen)) return false;
    }
  } else if (t.final_tuple != basis) {
    return false;
  }
  return true;
}

inline bool verify_trace(const ReductionVerdict& v, const Presentation& p) {
  return verify_trace(v.trace, p, v.kind);
}

}  // namespace aog
