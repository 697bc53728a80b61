#pragma once

// Text and JSON formats: presentation files, reports, traces and
// certificates. Key order is fixed, so equal values serialize to equal bytes.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aog/genericity.hpp"
#include "aog/iso.hpp"
#include "aog/nielsen.hpp"
#include "aog/readability.hpp"
#include "aog/smallcancel.hpp"
#include "aog/whitehead.hpp"

namespace aog::io {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Presentation files
//
//   rank: 2
//   relators:
//   abAB
//
// Blank lines and lines starting with '#' are ignored.

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline Presentation parse_presentation(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::optional<int> rank;
  bool in_relators = false;
  std::vector<Word> relators;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (!rank) {
      const std::string key = "rank:";
      if (line.rfind(key, 0) != 0) throw ParseError(line_no, "expected 'rank: <m>'");
      const std::string value = detail::trim(line.substr(key.size()));
      std::size_t used = 0;
      int m = 0;
      try {
        m = std::stoi(value, &used);
      } catch (const std::exception&) {
        throw ParseError(line_no, "rank is not an integer: '" + value + "'");
      }
      if (used != value.size() || m < 1) throw ParseError(line_no, "rank must be a positive integer");
      if (m > 26) throw ParseError(line_no, "rank above 26 has no letters");
      rank = m;
      continue;
    }
    if (!in_relators) {
      if (line != "relators:") throw ParseError(line_no, "expected 'relators:'");
      in_relators = true;
      continue;
    }
    Word w;
    try {
      w = parse_word(line, *rank);
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (CyclicWord(w).empty()) throw ParseError(line_no, "relator '" + line + "' is trivial");
    relators.push_back(w);
  }
  if (!rank) throw ParseError(line_no, "missing 'rank:' line");
  if (!in_relators) throw ParseError(line_no, "missing 'relators:' line");
  return Presentation(*rank, relators);
}

inline Presentation read_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_presentation(buf.str());
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ":" + e.what());
  }
}

inline std::string format_presentation(const Presentation& p) {
  std::string out = "rank: " + std::to_string(p.rank) + "\nrelators:\n";
  for (const auto& r : p.relators) out += to_string(r) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Words, graphs and paths

inline Json to_json(const Word& w) { return to_string(w); }

inline Json words_to_json(const std::vector<Word>& ws) {
  Json a = Json::array();
  for (const auto& w : ws) a.push_back(to_string(w));
  return a;
}

inline Word word_from_json(const Json& j) { return parse_word(j.get<std::string>()); }

inline std::vector<Word> words_from_json(const Json& j) {
  std::vector<Word> out;
  for (const auto& x : j) out.push_back(word_from_json(x));
  return out;
}

inline Json edge_to_json(const Edge& e) {
  return Json{{"id", e.id}, {"origin", e.origin}, {"terminus", e.terminus}, {"label", e.label}};
}

inline Edge edge_from_json(const Json& j) {
  Edge e;
  e.id = j.at("id").get<EdgeId>();
  e.origin = j.at("origin").get<VertexId>();
  e.terminus = j.at("terminus").get<VertexId>();
  e.label = j.at("label").get<int>();
  return e;
}

inline Json to_json(const FGraph& g) {
  Json j;
  j["alphabet_rank"] = g.alphabet_rank();
  j["base"] = g.base() ? Json(*g.base()) : Json(nullptr);
  Json vs = Json::array();
  for (VertexId v : g.vertices()) vs.push_back(v);
  j["vertices"] = vs;
  Json es = Json::array();
  for (EdgeId id : g.edges()) es.push_back(edge_to_json(g.edge(id)));
  j["edges"] = es;
  return j;
}

inline FGraph graph_from_json(const Json& j) {
  FGraph g(j.at("alphabet_rank").get<int>());
  for (const auto& v : j.at("vertices")) g.add_vertex_with_id(v.get<VertexId>());
  for (const auto& e : j.at("edges")) g.add_edge_with_id(edge_from_json(e));
  if (!j.at("base").is_null()) g.set_base(j.at("base").get<VertexId>());
  return g;
}

inline Json to_json(const Path& p) {
  Json steps = Json::array();
  for (Step s : p.steps) steps.push_back(Json{{"edge", s.edge}, {"dir", s.dir == Direction::Forward ? "+" : "-"}});
  return Json{{"start", p.start}, {"steps", steps}};
}

inline Path path_from_json(const Json& j) {
  Path p;
  p.start = j.at("start").get<VertexId>();
  for (const auto& s : j.at("steps")) {
    const std::string dir = s.at("dir").get<std::string>();
    if (dir != "+" && dir != "-") throw std::invalid_argument("step direction must be '+' or '-'");
    p.steps.push_back({s.at("edge").get<EdgeId>(), dir == "+" ? Direction::Forward : Direction::Backward});
  }
  return p;
}

// ---------------------------------------------------------------------------
// Membership and sampling

inline Json to_json(const ClassParams& p) {
  return Json{{"lambda", to_string(p.lambda)}, {"mu", to_string(p.mu)}, {"L", p.L}};
}

inline Json to_json(const MembershipReport& r) {
  Json c1{{"id", "C1"}, {"evaluated", r.c1.evaluated}, {"holds", r.c1.holds}};
  if (r.c1.piece) c1["witness"] = Json{{"piece", to_string(*r.c1.piece)}, {"element", to_string(*r.c1.element)}};
  Json c2{{"id", "C2"}, {"evaluated", r.c2.evaluated}, {"holds", r.c2.holds}};
  if (r.c2.root)
    c2["witness"] = Json{{"relator", *r.c2.relator}, {"root", to_string(*r.c2.root)}, {"exponent", r.c2.exponent}};
  Json c3{{"id", "C3"},
          {"evaluated", r.c3.evaluated},
          {"holds", r.c3.holds},
          {"checked", r.c3.checked},
          {"unknown", r.c3.unknown}};
  if (r.c3.subword) {
    c3["witness"] = Json{{"relator", *r.c3.relator},
                         {"subword", to_string(*r.c3.subword)},
                         {"kind", r.c3.kind},
                         {"graph", to_json(*r.c3.graph)},
                         {"path", to_json(*r.c3.path)}};
  }
  Json j{{"verdict", to_string(r.verdict)}};
  j["failed"] = r.failed.empty() ? Json(nullptr) : Json(r.failed);
  j["conditions"] = Json::array({c1, c2, c3});
  return j;
}

inline Json to_json(const SampleTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back(Json{{"t", r.t},
                        {"samples", r.samples},
                        {"pass_c1", r.pass_c1},
                        {"pass_c2", r.pass_c2},
                        {"pass_c3_checked", r.pass_c3_checked},
                        {"pass_all", r.pass_all},
                        {"unknown", r.unknown},
                        {"fraction_num", r.fraction_num},
                        {"fraction_den", r.fraction_den}});
  }
  Json j{{"rows", rows}};
  if (t.decay_rate) {
    std::ostringstream s;
    s.precision(6);
    s << *t.decay_rate;
    j["decay_rate"] = s.str();
  } else {
    j["decay_rate"] = nullptr;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Readability

inline Json to_json(const ReadabilityQuery& q, const ReadabilityAnswer& a) {
  Json j{{"word", to_string(q.word)},
         {"alphabet_rank", q.alphabet_rank},
         {"edge_budget", to_string(q.edge_budget)},
         {"rank_bound", q.rank_bound},
         {"require_low_degree", q.require_low_degree},
         {"verdict", to_string(a.verdict)},
         {"nodes", a.nodes}};
  if (a.graph) {
    j["graph"] = to_json(*a.graph);
    j["path"] = to_json(*a.path);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Move records and traces

inline Json to_json(const MoveRecord& r) {
  Json merged = Json::array();
  for (auto [gone, keep] : r.merged_vertices) merged.push_back(Json{{"gone", gone}, {"keep", keep}});
  auto edges = [](const std::vector<Edge>& es) {
    Json a = Json::array();
    for (const auto& e : es) a.push_back(edge_to_json(e));
    return a;
  };
  auto opt_vertex = [](const std::optional<VertexId>& v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"kind", to_string(r.kind)},
              {"merged_vertices", merged},
              {"removed_edges", edges(r.removed_edges)},
              {"removed_vertices", r.removed_vertices},
              {"added_vertices", r.added_vertices},
              {"added_edges", edges(r.added_edges)},
              {"base_before", opt_vertex(r.base_before)},
              {"base_after", opt_vertex(r.base_after)},
              {"pre_basis", words_to_json(r.pre_basis)},
              {"post_basis", words_to_json(r.post_basis)},
              {"post_in_pre", words_to_json(r.post_in_pre)},
              {"pre_in_post", words_to_json(r.pre_in_post)},
              {"conjugator", to_string(r.conjugator)},
              {"edges_before", r.edges_before},
              {"edges_after", r.edges_after}};
}

inline MoveKind move_kind_from_string(const std::string& s) {
  for (MoveKind k : {MoveKind::Fold, MoveKind::R, MoveKind::M1, MoveKind::M2, MoveKind::AO})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown move kind '" + s + "'");
}

inline MoveRecord move_record_from_json(const Json& j) {
  MoveRecord r;
  r.kind = move_kind_from_string(j.at("kind").get<std::string>());
  for (const auto& m : j.at("merged_vertices"))
    r.merged_vertices.emplace_back(m.at("gone").get<VertexId>(), m.at("keep").get<VertexId>());
  for (const auto& e : j.at("removed_edges")) r.removed_edges.push_back(edge_from_json(e));
  r.removed_vertices = j.at("removed_vertices").get<std::vector<VertexId>>();
  r.added_vertices = j.at("added_vertices").get<std::vector<VertexId>>();
  for (const auto& e : j.at("added_edges")) r.added_edges.push_back(edge_from_json(e));
  if (!j.at("base_before").is_null()) r.base_before = j.at("base_before").get<VertexId>();
  if (!j.at("base_after").is_null()) r.base_after = j.at("base_after").get<VertexId>();
  r.pre_basis = words_from_json(j.at("pre_basis"));
  r.post_basis = words_from_json(j.at("post_basis"));
  r.post_in_pre = words_from_json(j.at("post_in_pre"));
  r.pre_in_post = words_from_json(j.at("pre_in_post"));
  r.conjugator = word_from_json(j.at("conjugator"));
  r.edges_before = j.at("edges_before").get<std::size_t>();
  r.edges_after = j.at("edges_after").get<std::size_t>();
  return r;
}

inline Json to_json(const NielsenTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) steps.push_back(Json{{"record", to_json(s.record)}, {"tuple", words_to_json(s.tuple)}});
  return Json{{"initial_tuple", words_to_json(t.initial_tuple)},
              {"start_basis", words_to_json(t.start_basis)},
              {"tuple_in_basis", words_to_json(t.tuple_in_basis)},
              {"basis_in_tuple", words_to_json(t.basis_in_tuple)},
              {"steps", steps},
              {"final_tuple", words_to_json(t.final_tuple)},
              {"conjugator", to_string(t.conjugator)}};
}

inline NielsenTrace trace_from_json(const Json& j) {
  NielsenTrace t;
  t.initial_tuple = words_from_json(j.at("initial_tuple"));
  t.start_basis = words_from_json(j.at("start_basis"));
  t.tuple_in_basis = words_from_json(j.at("tuple_in_basis"));
  t.basis_in_tuple = words_from_json(j.at("basis_in_tuple"));
  for (const auto& s : j.at("steps"))
    t.steps.push_back({move_record_from_json(s.at("record")), words_from_json(s.at("tuple"))});
  t.final_tuple = words_from_json(j.at("final_tuple"));
  t.conjugator = word_from_json(j.at("conjugator"));
  return t;
}

inline ReductionKind reduction_kind_from_string(const std::string& s) {
  for (ReductionKind k : {ReductionKind::WholeGroup, ReductionKind::CertifiedFree, ReductionKind::NotInClass})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown reduction verdict '" + s + "'");
}

inline Json to_json(const ReductionVerdict& v) {
  Json ao = Json::array();
  for (std::size_t i = 0; i < v.trace.steps.size(); ++i)
    if (v.trace.steps[i].record.kind == MoveKind::AO) ao.push_back(i);
  Json j{{"verdict", to_string(v.kind)}, {"reason", v.reason}, {"ao_moves", ao}};
  if (v.kind == ReductionKind::CertifiedFree) {
    j["rank"] = v.rank;
    j["basis"] = words_to_json(v.basis);
  }
  if (v.witness) {
    j["witness"] = Json{{"subword", to_string(v.witness->subword)},
                        {"relator", v.witness->relator},
                        {"sign", v.witness->sign},
                        {"graph", to_json(v.witness->graph)},
                        {"path", to_json(v.witness->path)}};
  }
  j["trace"] = to_json(v.trace);
  return j;
}

// ---------------------------------------------------------------------------
// Whitehead moves, certificates and isomorphism verdicts

inline Json to_json(const WhiteheadMove& mv) {
  if (mv.kind == WhiteheadMove::Kind::Relabel) {
    Json perm = Json::array();
    Json flags = Json::array();
    for (Letter y : mv.images) {
      perm.push_back(generator_of(y));
      flags.push_back(y < 0);
    }
    return Json{{"kind", "Relabel"}, {"rank", mv.rank}, {"permutation", perm}, {"inverted", flags}};
  }
  Json cut = Json::array();
  for (Letter x : mv.cut) cut.push_back(to_string(Word::reduce({x})));
  return Json{{"kind", "Multiplier"}, {"rank", mv.rank}, {"multiplier", to_string(Word::reduce({mv.multiplier}))},
              {"cut", cut}};
}

inline Letter letter_from_json(const Json& j) {
  Word w = word_from_json(j);
  if (w.size() != 1) throw std::invalid_argument("expected a single letter");
  return w[0];
}

inline WhiteheadMove whitehead_move_from_json(const Json& j) {
  const int m = j.at("rank").get<int>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "Relabel") {
    const auto perm = j.at("permutation").get<std::vector<int>>();
    const auto flags = j.at("inverted").get<std::vector<bool>>();
    if (perm.size() != flags.size()) throw std::invalid_argument("permutation and flags differ in length");
    std::vector<Letter> images;
    for (std::size_t i = 0; i < perm.size(); ++i) images.push_back(flags[i] ? -perm[i] : perm[i]);
    return WhiteheadMove::relabel(m, std::move(images));
  }
  if (kind == "Multiplier") {
    std::vector<Letter> cut;
    for (const auto& x : j.at("cut")) cut.push_back(letter_from_json(x));
    return WhiteheadMove::multiply(m, letter_from_json(j.at("multiplier")), std::move(cut));
  }
  throw std::invalid_argument("unknown Whitehead move kind '" + kind + "'");
}

inline Json to_json(const OrbitCertificate& c) {
  Json moves = Json::array();
  for (const auto& mv : c.moves) moves.push_back(to_json(mv));
  return Json{{"source", to_string(c.source)},
              {"target", to_string(c.target)},
              {"inverted", c.inverted},
              {"moves", moves}};
}

inline OrbitCertificate certificate_from_json(const Json& j) {
  OrbitCertificate c;
  c.source = CyclicWord(word_from_json(j.at("source")));
  c.target = CyclicWord(word_from_json(j.at("target")));
  c.inverted = j.at("inverted").get<bool>();
  for (const auto& mv : j.at("moves")) c.moves.push_back(whitehead_move_from_json(mv));
  return c;
}

inline Json to_json(const MinimizeResult& r, const CyclicWord& input) {
  Json moves = Json::array();
  for (const auto& mv : r.moves) moves.push_back(to_json(mv));
  return Json{{"input", to_string(input)},
              {"minimal", to_string(r.word)},
              {"length", r.word.size()},
              {"moves", moves}};
}

inline Json to_json(const IsoVerdict& v) {
  Json j{{"verdict", to_string(v.kind)}, {"reason", v.reason}, {"conditional", v.conditional}};
  j["certificate"] = v.certificate ? to_json(*v.certificate) : Json(nullptr);
  j["first_membership"] = v.first_membership ? to_json(*v.first_membership) : Json(nullptr);
  j["second_membership"] = v.second_membership ? to_json(*v.second_membership) : Json(nullptr);
  return j;
}

}  // namespace aog::io
