#pragma once

// Class parameters (lambda, mu, L), class membership of a presentation, and
// Monte Carlo estimates of how often random presentations belong.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aog/rational.hpp"
#include "aog/readability.hpp"
#include "aog/smallcancel.hpp"
#include "aog/words.hpp"

namespace aog {

struct ClassParams {
  Rational lambda{1, 63};
  Rational mu{1, 2};
  int L = 2;

  /// mu = 1/2, L = m and the largest admissible lambda, 1/(30m + 3).
  static ClassParams defaults(int m) {
    ClassParams p;
    p.mu = Rational(1, 2);
    p.L = m;
    p.lambda = p.mu / (Rational(15 * m) + 3 * p.mu);
    return p;
  }
};

struct ParamCheck {
  bool valid = true;
  std::string violated;  // human-readable first failing inequality
};

/// lambda <= mu/(15L + 3mu) <= mu/(15m + 3mu) < 1/6 and 0 < mu <= 1.
inline ParamCheck validate_params(const ClassParams& p, int m) {
  if (p.lambda <= 0) throw std::invalid_argument("lambda must be positive");
  if (p.mu <= 0) throw std::invalid_argument("mu must be positive");
  if (p.L < 0) return {false, "L must be non-negative"};
  if (p.mu > 1) return {false, "mu must be at most 1"};
  const Rational by_L = p.mu / (Rational(15 * p.L) + 3 * p.mu);
  const Rational by_m = p.mu / (Rational(15 * m) + 3 * p.mu);
  if (p.lambda > by_L)
    return {false, "lambda <= mu/(15L + 3mu) fails: " + to_string(p.lambda) + " > " + to_string(by_L)};
  if (by_L > by_m)
    return {false, "mu/(15L + 3mu) <= mu/(15m + 3mu) fails (needs L >= m): " + to_string(by_L) + " > " +
                       to_string(by_m)};
  if (!(by_m < Rational(1, 6)))
    return {false, "mu/(15m + 3mu) < 1/6 fails: " + to_string(by_m)};
  return {};
}

/// Cyclic subwords w of r with |r|/2 <= |w| <= |r|, first occurrence order
/// (by length, then offset), duplicates dropped.
inline std::vector<Word> relevant_subwords(const CyclicWord& r) {
  const std::size_t n = r.size();
  if (n == 0) throw std::invalid_argument("relevant subwords of the empty word");
  std::vector<Letter> doubled;
  for (int pass = 0; pass < 2; ++pass)
    for (Letter x : r.word()) doubled.push_back(x);
  std::vector<Word> out;
  std::set<Word> seen;
  for (std::size_t len = (n + 1) / 2; len <= n; ++len) {
    for (std::size_t off = 0; off < n; ++off) {
      Word w = Word::reduce(std::span<const Letter>(doubled).subspan(off, len));
      if (seen.insert(w).second) out.push_back(std::move(w));
    }
  }
  return out;
}

enum class Membership { InClass, NotInClass, Undetermined };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::InClass: return "InClass";
    case Membership::NotInClass: return "NotInClass";
    case Membership::Undetermined: return "Undetermined";
  }
  return "?";
}

struct SmallCancellationReport {
  bool evaluated = false;
  bool holds = false;
  std::optional<Word> piece;
  std::optional<Word> element;
};

struct ProperPowerReport {
  bool evaluated = false;
  bool holds = false;  // no relator is a proper power
  std::optional<std::size_t> relator;
  std::optional<Word> root;
  int exponent = 0;
};

struct ReadabilityReport {
  bool evaluated = false;
  bool holds = false;  // certified: no relevant subword readable
  std::size_t checked = 0;
  std::size_t unknown = 0;
  // First violation, when found.
  std::optional<std::size_t> relator;
  std::optional<Word> subword;
  std::string kind;  // "mu" or "mu_L"
  std::optional<FGraph> graph;
  std::optional<Path> path;
};

struct MembershipReport {
  Membership verdict = Membership::Undetermined;
  std::string failed;  // "C1", "C2", "C3" when NotInClass
  SmallCancellationReport c1;
  ProperPowerReport c2;
  ReadabilityReport c3;
};

inline SmallCancellationReport check_condition_c1(const Presentation& p, const ClassParams& params) {
  SmallCancellationReport r;
  r.evaluated = true;
  auto res = check_Cprime(p, params.lambda);
  r.holds = res.holds;
  r.piece = res.piece;
  r.element = res.element;
  return r;
}

inline ProperPowerReport check_condition_c2(const Presentation& p) {
  ProperPowerReport r;
  r.evaluated = true;
  r.holds = true;
  for (std::size_t i = 0; i < p.relators.size(); ++i) {
    if (auto pw = is_proper_power(p.relators[i])) {
      r.holds = false;
      r.relator = i;
      r.root = pw->root;
      r.exponent = pw->exponent;
      break;
    }
  }
  return r;
}

/// Every relevant subword must be neither mu-readable nor (mu, L)-readable.
/// Subwords of r_i^-1 are covered by inversion symmetry of readability.
inline ReadabilityReport check_condition_c3(const Presentation& p, const ClassParams& params,
                                           std::optional<std::uint64_t> node_budget) {
  ReadabilityReport r;
  r.evaluated = true;
  const int m = p.rank;
  for (std::size_t i = 0; i < p.relators.size(); ++i) {
    for (const Word& sub : relevant_subwords(p.relators[i])) {
      const ReadabilityQuery queries[2] = {
          mu_readability_query(sub, m, params.mu, node_budget),
          mu_L_readability_query(sub, m, params.mu, static_cast<std::size_t>(params.L), node_budget)};
      const char* kinds[2] = {"mu", "mu_L"};
      for (int k = 0; k < 2; ++k) {
        auto ans = is_readable(queries[k]);
        ++r.checked;
        if (ans.verdict == Readability::Unknown) {
          ++r.unknown;
        } else if (ans.verdict == Readability::Readable) {
          r.holds = false;
          r.relator = i;
          r.subword = sub;
          r.kind = kinds[k];
          r.graph = std::move(ans.graph);
          r.path = std::move(ans.path);
          return r;
        }
      }
    }
  }
  r.holds = r.unknown == 0;
  return r;
}

/// Membership in the class: C1 = C'(lambda), C2 = no proper powers, C3 = no
/// readable half-relator subword. Stops at the first definite violation.
inline MembershipReport check_membership(const Presentation& p, const ClassParams& params,
                                         std::optional<std::uint64_t> node_budget = {}) {
  if (auto chk = validate_params(params, p.rank); !chk.valid)
    throw std::invalid_argument("invalid class parameters: " + chk.violated);
  MembershipReport rep;
  rep.c1 = check_condition_c1(p, params);
  if (!rep.c1.holds) {
    rep.verdict = Membership::NotInClass;
    rep.failed = "C1";
    return rep;
  }
  rep.c2 = check_condition_c2(p);
  if (!rep.c2.holds) {
    rep.verdict = Membership::NotInClass;
    rep.failed = "C2";
    return rep;
  }
  rep.c3 = check_condition_c3(p, params, node_budget);
  if (rep.c3.subword) {
    rep.verdict = Membership::NotInClass;
    rep.failed = "C3";
  } else {
    rep.verdict = rep.c3.unknown == 0 ? Membership::InClass : Membership::Undetermined;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Sampling

struct SampleOptions {
  int m = 2;
  int n = 1;
  std::vector<std::int64_t> lengths;
  std::size_t samples_per_length = 100;
  ClassParams params;
  std::optional<std::uint64_t> node_budget;
  std::uint64_t seed = 0;
  bool up_to_length = false;          // relator lengths drawn from 1..t by count
  std::int64_t c3_max_length = 14;    // longer relators leave C3 unchecked
};

struct SampleRow {
  std::int64_t t = 0;
  std::size_t samples = 0;
  std::size_t pass_c1 = 0;
  std::size_t pass_c2 = 0;
  std::size_t pass_c12 = 0;
  std::size_t pass_c3_checked = 0;
  std::size_t pass_all = 0;
  std::size_t unknown = 0;
  // pass_all / (samples - unknown); 0/0 when every sample is unknown.
  std::int64_t fraction_num = 0;
  std::int64_t fraction_den = 0;
};

struct SampleTable {
  std::vector<SampleRow> rows;
  std::optional<double> decay_rate;  // fitted c with 1 - fraction ~ c^t
};

/// Per-sample generator derived from (seed, t, sample index).
inline std::mt19937_64 sample_stream(std::uint64_t seed, std::int64_t t, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(static_cast<std::uint64_t>(t) >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
  return std::mt19937_64(seq);
}

namespace detail {

// Draws relator lengths for the "at most t" regime in proportion to the
// number of cyclically reduced words of each length.
class LengthMixer {
 public:
  LengthMixer(int m, std::int64_t t) {
    BigInt total = 0;
    for (std::int64_t s = 1; s <= t; ++s) {
      total += count_cyclically_reduced(m, s);
      cumulative_.push_back(total);
    }
  }
  template <class Rng>
  std::int64_t draw(Rng& rng) const {
    BigInt x = uniform_below(cumulative_.back(), rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    return static_cast<std::int64_t>(it - cumulative_.begin()) + 1;
  }

 private:
  std::vector<BigInt> cumulative_;
};

inline std::optional<double> fit_decay(const std::vector<SampleRow>& rows) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (r.fraction_den == 0) continue;
    const double miss = 1.0 - static_cast<double>(r.fraction_num) / static_cast<double>(r.fraction_den);
    if (miss <= 0.0 || miss >= 1.0) continue;
    pts.emplace_back(static_cast<double>(r.t), std::log(miss));
  }
  if (pts.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(pts.size());
  const double denom = k * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return std::exp((k * sxy - sx * sy) / denom);
}

}  // namespace detail

/// Monte Carlo estimate of the fraction of random presentations in the
/// class, one row per relator length. Deterministic for a given seed.
inline SampleTable sample_genericity(const SampleOptions& opt) {
  if (auto chk = validate_params(opt.params, opt.m); !chk.valid)
    throw std::invalid_argument("invalid class parameters: " + chk.violated);
  if (opt.m < 2) throw std::invalid_argument("sampling needs m >= 2");
  if (opt.n < 1) throw std::invalid_argument("sampling needs n >= 1");
  SampleTable table;
  for (std::int64_t t : opt.lengths) {
    if (t < 1) throw std::invalid_argument("relator length must be at least 1");
    std::optional<detail::LengthMixer> mixer;
    if (opt.up_to_length) mixer.emplace(opt.m, t);
    std::map<std::int64_t, CyclicWordSampler> samplers;
    auto sampler_for = [&](std::int64_t len) -> const CyclicWordSampler& {
      auto it = samplers.find(len);
      if (it == samplers.end()) it = samplers.emplace(len, CyclicWordSampler(opt.m, len)).first;
      return it->second;
    };
    SampleRow row;
    row.t = t;
    row.samples = opt.samples_per_length;
    for (std::size_t idx = 0; idx < opt.samples_per_length; ++idx) {
      auto rng = sample_stream(opt.seed, t, idx);
      std::vector<Word> rels;
      std::int64_t longest = 0;
      for (int k = 0; k < opt.n; ++k) {
        const std::int64_t len = mixer ? mixer->draw(rng) : t;
        longest = std::max(longest, len);
        rels.push_back(sampler_for(len).sample(rng));
      }
      Presentation p(opt.m, rels);
      const bool c1 = check_condition_c1(p, opt.params).holds;
      const bool c2 = check_condition_c2(p).holds;
      row.pass_c1 += c1;
      row.pass_c2 += c2;
      if (!(c1 && c2)) continue;
      ++row.pass_c12;
      if (longest > opt.c3_max_length) {
        ++row.unknown;
        continue;
      }
      auto c3 = check_condition_c3(p, opt.params, opt.node_budget);
      if (c3.subword) continue;
      if (c3.unknown > 0) {
        ++row.unknown;
      } else {
        ++row.pass_c3_checked;
        ++row.pass_all;
      }
    }
    if (row.unknown < row.samples) {
      Rational f(static_cast<std::int64_t>(row.pass_all), static_cast<std::int64_t>(row.samples - row.unknown));
      row.fraction_num = f.numerator();
      row.fraction_den = f.denominator();
    }
    table.rows.push_back(row);
  }
  table.decay_rate = detail::fit_decay(table.rows);
  return table;
}

inline std::string to_csv(const SampleTable& table) {
  std::ostringstream out;
  out << "t,samples,pass_c1,pass_c2,pass_c3_checked,pass_all,unknown,fraction_num,fraction_den\n";
  for (const auto& r : table.rows) {
    out << r.t << ',' << r.samples << ',' << r.pass_c1 << ',' << r.pass_c2 << ',' << r.pass_c3_checked << ','
        << r.pass_all << ',' << r.unknown << ',' << r.fraction_num << ',' << r.fraction_den << '\n';
  }
  return out.str();
}

}  // namespace aog
