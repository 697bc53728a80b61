// Command-line front end. Every command prints JSON (or CSV for `sample`) to
// stdout; diagnostics go to stderr. Exit codes are per command, with 4 for
// usage and input errors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "aog/io.hpp"

using namespace aog;
using io::Json;

namespace {

constexpr int kUsageError = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParamFlags {
  std::string lambda, mu;
  std::optional<int> L;
  std::optional<std::uint64_t> budget;

  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda", lambda, "small cancellation bound, p/q");
    cmd->add_option("--mu", mu, "readability bound, p/q");
    cmd->add_option("--L", L, "rank bound for the degree-restricted test");
    cmd->add_option("--budget", budget, "node budget for readability searches");
  }

  // Unset flags fall back to ClassParams::defaults(m).
  ClassParams resolve(int m) const {
    ClassParams p = ClassParams::defaults(m);
    if (!mu.empty()) p.mu = parse_rational(mu);
    if (!lambda.empty()) p.lambda = parse_rational(lambda);
    if (L) p.L = *L;
    const auto chk = validate_params(p, m);
    if (!chk.valid) throw UsageError("invalid class parameters: " + chk.violated);
    return p;
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<Word> parse_words(const std::vector<std::string>& texts, int m) {
  std::vector<Word> out;
  for (const auto& t : texts) out.push_back(parse_word(t, m));
  return out;
}

CyclicWord parse_cyclic(const std::string& text, int m) {
  CyclicWord w(parse_word(text, m));
  if (w.size() == 0) throw UsageError("word '" + text + "' is trivial");
  return w;
}

int exit_code(Membership v) {
  switch (v) {
    case Membership::InClass: return 0;
    case Membership::NotInClass: return 1;
    case Membership::Undetermined: return 2;
  }
  return kUsageError;
}

int exit_code(ReductionKind k) {
  switch (k) {
    case ReductionKind::WholeGroup: return 0;
    case ReductionKind::CertifiedFree: return 1;
    case ReductionKind::NotInClass: return 3;
  }
  return kUsageError;
}

int exit_code(IsoKind k) {
  switch (k) {
    case IsoKind::Isomorphic: return 0;
    case IsoKind::NotIsomorphic: return 1;
    case IsoKind::Inapplicable: return 2;
  }
  return kUsageError;
}

std::string text_report(const MembershipReport& r) {
  std::ostringstream s;
  s << "verdict: " << to_string(r.verdict) << '\n';
  if (!r.failed.empty()) s << "failed: " << r.failed << '\n';
  auto line = [&](const char* id, bool evaluated, bool holds, bool unknown = false) {
    const char* state = !evaluated ? "not evaluated" : holds ? "holds" : unknown ? "undetermined" : "fails";
    s << id << ": " << state << '\n';
  };
  line("C1", r.c1.evaluated, r.c1.holds);
  line("C2", r.c2.evaluated, r.c2.holds);
  line("C3", r.c3.evaluated, r.c3.holds, !r.c3.subword && r.c3.unknown > 0);
  if (r.c3.evaluated) s << "C3 subwords checked: " << r.c3.checked << ", unknown: " << r.c3.unknown << '\n';
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-minimization tools for generic group presentations"};
  app.require_subcommand(1);

  // check
  std::string pres_file;
  bool as_json = false;
  ParamFlags check_flags;
  auto* check = app.add_subcommand("check", "test membership in the generic class");
  check->add_option("presentation", pres_file)->required();
  check->add_flag("--json", as_json, "print the full JSON report");
  check_flags.attach(check);

  // reduce
  std::vector<std::string> tuple_text;
  std::string trace_out;
  bool no_precheck = false;
  ParamFlags reduce_flags;
  auto* reduce = app.add_subcommand("reduce", "Nielsen-reduce an m-tuple by folds and AO moves");
  reduce->add_option("presentation", pres_file)->required();
  reduce->add_option("words", tuple_text)->required();
  reduce->add_option("--trace", trace_out, "write the verdict and full move trace as JSON");
  reduce->add_flag("--no-precheck", no_precheck, "skip the C1/C2 precondition check");
  reduce_flags.attach(reduce);

  // verify
  std::string trace_in;
  auto* verify = app.add_subcommand("verify", "replay a trace written by `reduce --trace`");
  verify->add_option("presentation", pres_file)->required();
  verify->add_option("trace", trace_in)->required();

  // iso
  std::string second_file;
  bool assume = false;
  ParamFlags iso_flags;
  auto* iso = app.add_subcommand("iso", "decide isomorphism of two one-relator presentations");
  iso->add_option("first", pres_file)->required();
  iso->add_option("second", second_file)->required();
  iso->add_flag("--assume-in-class", assume, "skip membership checks");
  iso_flags.attach(iso);

  // sample
  int sample_m = 2, sample_n = 1;
  std::vector<std::int64_t> lengths;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  std::string csv_out;
  bool up_to = false;
  std::int64_t c3_max = 14;
  ParamFlags sample_flags;
  auto* sample = app.add_subcommand("sample", "estimate class fractions over random presentations");
  sample->add_option("--m", sample_m, "generator count")->check(CLI::Range(1, 26));
  sample->add_option("--n", sample_n, "relator count")->check(CLI::PositiveNumber);
  sample->add_option("--t", lengths, "relator lengths")->required()->delimiter(',')->check(CLI::PositiveNumber);
  sample->add_option("--samples", samples, "presentations per length")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed)->required();
  sample->add_option("--csv", csv_out, "write the table here instead of stdout");
  sample->add_flag("--up-to-length", up_to, "draw relator lengths from 1..t by count");
  sample->add_option("--c3-max-length", c3_max, "longest relator whose C3 is checked");
  sample_flags.attach(sample);

  // readable
  std::string word_text;
  int rd_m = 2;
  std::string rd_mu = "1/2";
  std::size_t rd_rank = 1;
  bool rd_low = false;
  std::optional<std::uint64_t> rd_budget;
  auto* readable = app.add_subcommand("readable", "decide readability of a word");
  readable->add_option("word", word_text)->required();
  readable->add_option("--m", rd_m, "generator count")->check(CLI::Range(1, 26));
  readable->add_option("--mu", rd_mu, "edge budget as a fraction of |w|, p/q");
  readable->add_option("--rank", rd_rank, "rank bound");
  readable->add_flag("--low-degree", rd_low, "require a vertex of degree < 2m");
  readable->add_option("--budget", rd_budget, "node budget");

  // whitehead-min
  int wh_m = 2;
  auto* whmin = app.add_subcommand("whitehead-min", "minimize a cyclic word under Whitehead moves");
  whmin->add_option("word", word_text)->required();
  whmin->add_option("--m", wh_m, "generator count")->check(CLI::Range(1, 26));

  // orbit
  std::string other_text;
  auto* orbit = app.add_subcommand("orbit", "test whether two cyclic words share an Aut(F)-orbit");
  orbit->add_option("u", word_text)->required();
  orbit->add_option("v", other_text)->required();
  orbit->add_option("--m", wh_m, "generator count")->check(CLI::Range(1, 26));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*check) {
      const auto p = io::read_presentation(pres_file);
      const auto report = check_membership(p, check_flags.resolve(p.rank), check_flags.budget);
      if (as_json)
        print(io::to_json(report));
      else
        std::cout << text_report(report);
      return exit_code(report.verdict);
    }

    if (*reduce) {
      const auto p = io::read_presentation(pres_file);
      if (static_cast<int>(tuple_text.size()) != p.rank)
        throw UsageError("expected " + std::to_string(p.rank) + " words, got " + std::to_string(tuple_text.size()));
      ReduceOptions opts;
      opts.require_conditions = !no_precheck;
      const auto v = reduce_tuple(parse_words(tuple_text, p.rank), p, reduce_flags.resolve(p.rank), opts);
      Json full = io::to_json(v);
      if (!trace_out.empty()) write_file(trace_out, full.dump(2) + "\n");
      Json summary = full;
      summary.erase("trace");
      summary["final_tuple"] = io::words_to_json(v.trace.final_tuple);
      summary["steps"] = v.trace.steps.size();
      print(summary);
      return exit_code(v.kind);
    }

    if (*verify) {
      const auto p = io::read_presentation(pres_file);
      Json j;
      try {
        j = Json::parse(read_file(trace_in));
      } catch (const Json::parse_error& e) {
        throw UsageError(std::string("malformed trace JSON: ") + e.what());
      }
      bool ok = false;
      std::string why;
      try {
        const auto kind = io::reduction_kind_from_string(j.at("verdict").get<std::string>());
        ok = verify_trace(io::trace_from_json(j.at("trace")), p, kind);
        if (!ok) why = "trace does not replay";
      } catch (const std::exception& e) {
        why = e.what();
      }
      Json out{{"verified", ok}};
      if (!ok) out["reason"] = why;
      print(out);
      return ok ? 0 : 1;
    }

    if (*iso) {
      const auto p1 = io::read_presentation(pres_file);
      const auto p2 = io::read_presentation(second_file);
      if (p1.rank != p2.rank) throw UsageError("presentations have different generator counts");
      const auto v = decide_isomorphic(p1, p2, iso_flags.resolve(p1.rank), iso_flags.budget, assume);
      print(io::to_json(v));
      return exit_code(v.kind);
    }

    if (*sample) {
      SampleOptions opt;
      opt.m = sample_m;
      opt.n = sample_n;
      opt.lengths = lengths;
      opt.samples_per_length = samples;
      opt.params = sample_flags.resolve(sample_m);
      opt.node_budget = sample_flags.budget;
      opt.seed = seed;
      opt.up_to_length = up_to;
      opt.c3_max_length = c3_max;
      const std::string csv = to_csv(sample_genericity(opt));
      if (csv_out.empty())
        std::cout << csv;
      else
        write_file(csv_out, csv);
      return 0;
    }

    if (*readable) {
      ReadabilityQuery q{parse_word(word_text, rd_m), rd_m, parse_rational(rd_mu), rd_rank, rd_low, rd_budget};
      const auto a = is_readable(q);
      print(io::to_json(q, a));
      return 0;
    }

    if (*whmin) {
      const CyclicWord w = parse_cyclic(word_text, wh_m);
      print(io::to_json(minimize(w, wh_m), w));
      return 0;
    }

    if (*orbit) {
      const CyclicWord u = parse_cyclic(word_text, wh_m);
      const CyclicWord v = parse_cyclic(other_text, wh_m);
      const auto cert = same_orbit(u, v, wh_m);
      Json out{{"u", to_string(u)}, {"v", to_string(v)}, {"equivalent", cert.has_value()}};
      out["certificate"] = cert ? io::to_json(*cert) : Json(nullptr);
      print(out);
      return cert ? 0 : 1;
    }
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}
