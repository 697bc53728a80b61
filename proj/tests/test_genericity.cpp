#include <catch_amalgamated.hpp>

#include <map>
#include <set>

#include "aog/genericity.hpp"
#include "readability_oracle.hpp"
#include "support.hpp"

using namespace aog;
using aog::testing::Rng;

namespace {

Word w(std::string_view text) { return parse_word(text); }

Presentation pres(int m, std::initializer_list<const char*> rels) {
  std::vector<Word> ws;
  for (const char* r : rels) ws.push_back(w(r));
  return Presentation(m, ws);
}

ClassParams params(Rational lambda, Rational mu, int L) {
  ClassParams p;
  p.lambda = lambda;
  p.mu = mu;
  p.L = L;
  return p;
}

// Every window of every rotation, by brute force.
std::set<Word> oracle_relevant(const Word& r) {
  std::set<Word> out;
  for (std::size_t k = 0; k < r.size(); ++k) {
    Word rot = rotate(r, k);
    for (std::size_t len = 1; len <= r.size(); ++len)
      if (2 * len >= r.size()) out.insert(rot.subword(0, len));
  }
  return out;
}

// C3 from the partition oracle over the brute-force subword list.
bool oracle_c3(const Presentation& p, const ClassParams& cp) {
  for (const auto& r : p.relators) {
    for (const Word& sub : oracle_relevant(r.word())) {
      if (testing::oracle_is_readable(mu_readability_query(sub, p.rank, cp.mu)) == Readability::Readable) return false;
      if (testing::oracle_is_readable(
              mu_L_readability_query(sub, p.rank, cp.mu, static_cast<std::size_t>(cp.L))) == Readability::Readable)
        return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("parameter validation is exact", "[genericity]") {
  CHECK(validate_params(params(Rational(1, 63), Rational(1, 2), 2), 2).valid);
  auto tight = validate_params(params(Rational(1, 40), Rational(1, 2), 2), 2);
  CHECK_FALSE(tight.valid);
  CHECK_FALSE(tight.violated.empty());
  CHECK_FALSE(validate_params(params(Rational(1, 100), Rational(1, 2), 1), 2).valid);
  CHECK_FALSE(validate_params(params(Rational(1, 1000), Rational(3, 2), 2), 2).valid);
  // One step past the equality case fails.
  CHECK_FALSE(validate_params(params(Rational(1, 63) + Rational(1, 100000), Rational(1, 2), 2), 2).valid);
  CHECK_THROWS(validate_params(params(Rational(0), Rational(1, 2), 2), 2));
  CHECK_THROWS(validate_params(params(Rational(1, 63), Rational(-1, 2), 2), 2));

  for (int m = 2; m <= 6; ++m) {
    auto d = ClassParams::defaults(m);
    CHECK(validate_params(d, m).valid);
    CHECK(d.lambda == Rational(1, 30 * m + 3));
  }
  CHECK(ClassParams::defaults(2).lambda == Rational(1, 63));
}

TEST_CASE("relevant subwords", "[genericity]") {
  auto got = relevant_subwords(CyclicWord(w("ab")));
  CHECK(std::set<Word>(got.begin(), got.end()) == std::set<Word>{w("a"), w("b"), w("ab"), w("ba")});
  CHECK(got.size() == 4);
  got = relevant_subwords(CyclicWord(w("aa")));
  CHECK(got == std::vector<Word>{w("a"), w("aa")});

  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    Word r = testing::random_cyclic(2 + trial % 2, 1 + rng() % 20, rng);
    auto subs = relevant_subwords(CyclicWord(r));
    std::set<Word> uniq(subs.begin(), subs.end());
    CHECK(uniq.size() == subs.size());
    CHECK(uniq == oracle_relevant(r));
    CHECK(subs.size() <= r.size() * ((r.size() + 1) / 2 + 1));
  }
}

TEST_CASE("membership examples", "[genericity]") {
  const auto d = ClassParams::defaults(2);

  auto pw = check_membership(pres(2, {"ababab"}), d);
  CHECK(pw.verdict == Membership::NotInClass);
  CHECK(pw.failed == "C2");
  REQUIRE(pw.c2.root);
  CHECK(*pw.c2.root == w("ab"));
  CHECK(pw.c2.exponent == 3);
  CHECK_FALSE(pw.c3.evaluated);

  auto sc = check_membership(pres(2, {"aabb"}), d);
  CHECK(sc.verdict == Membership::NotInClass);
  CHECK(sc.failed == "C1");
  REQUIRE(sc.c1.piece);
  CHECK(sc.c1.piece->size() == 1);
  CHECK_FALSE(sc.c2.evaluated);

  // abAB: every relevant subword fails both readability tests, so C3 holds;
  // the verdict is decided by the piece "a".
  auto c3 = check_condition_c3(pres(2, {"abAB"}), d, std::nullopt);
  CHECK(c3.holds);
  CHECK(c3.unknown == 0);
  CHECK(oracle_c3(pres(2, {"abAB"}), d));
  CHECK(check_membership(pres(2, {"abAB"}), d).failed == "C1");

  // ab has no pieces at all and nothing readable within budget.
  auto in = check_membership(pres(2, {"ab"}), d);
  CHECK(in.verdict == Membership::InClass);
  CHECK(in.c3.checked > 0);

  CHECK_THROWS(check_membership(pres(2, {"ab"}), params(Rational(1, 40), Rational(1, 2), 2)));
}

TEST_CASE("C3 violation carries a checkable witness", "[genericity]") {
  // At mu = 1 every subword reads on its own interval graph (rank 0).
  const auto p = pres(2, {"aabbaB"});
  auto cp = params(Rational(1, 1000), Rational(1), 2);
  REQUIRE(validate_params(cp, 2).valid);
  auto rep = check_condition_c3(p, cp, std::nullopt);
  CHECK_FALSE(rep.holds);
  REQUIRE(rep.subword);
  REQUIRE(rep.graph);
  const auto q = rep.kind == "mu" ? mu_readability_query(*rep.subword, 2, cp.mu)
                                  : mu_L_readability_query(*rep.subword, 2, cp.mu, 2);
  CHECK(check_witness(q, *rep.graph, *rep.path));
}

TEST_CASE("C3 agrees with the partition oracle", "[genericity][property]") {
  Rng rng(99);
  const std::vector<ClassParams> grid{ClassParams::defaults(2), params(Rational(1, 200), Rational(3, 4), 3),
                                      params(Rational(1, 200), Rational(1, 3), 2)};
  for (int trial = 0; trial < 120; ++trial) {
    Presentation p(2, std::vector<Word>{testing::random_cyclic(2, 2 + rng() % 9, rng)});
    for (const auto& cp : grid) {
      REQUIRE(validate_params(cp, 2).valid);
      auto rep = check_condition_c3(p, cp, std::nullopt);
      CHECK(rep.unknown == 0);
      CHECK(rep.holds == oracle_c3(p, cp));
      // Inverting the relator does not change the answer.
      Presentation inv(2, std::vector<Word>{inverse(p.relators[0].word())});
      CHECK(check_condition_c3(inv, cp, std::nullopt).holds == rep.holds);
    }
  }
}

TEST_CASE("Unknown never certifies membership", "[genericity][property]") {
  Rng rng(3);
  const auto d = ClassParams::defaults(2);
  for (int trial = 0; trial < 60; ++trial) {
    Presentation p(2, std::vector<Word>{testing::random_cyclic(2, 2 + rng() % 8, rng)});
    auto rep = check_membership(p, d, std::uint64_t{2});
    if (rep.c3.unknown > 0) CHECK(rep.verdict != Membership::InClass);
    if (rep.verdict == Membership::InClass) {
      CHECK(rep.c1.holds);
      CHECK(rep.c2.holds);
      CHECK(rep.c3.holds);
      CHECK(rep.c3.unknown == 0);
    }
  }
}

TEST_CASE("sampling table", "[genericity]") {
  SampleOptions opt;
  opt.m = 2;
  opt.n = 1;
  opt.lengths = {1, 2, 6, 10, 40};
  opt.samples_per_length = 40;
  opt.params = ClassParams::defaults(2);
  opt.seed = 2024;
  auto table = sample_genericity(opt);
  REQUIRE(table.rows.size() == 5);
  for (const auto& r : table.rows) {
    CHECK(r.samples == 40);
    CHECK(r.pass_c12 <= std::min(r.pass_c1, r.pass_c2));
    CHECK(r.pass_all + r.unknown <= r.pass_c12);
    CHECK(r.pass_c3_checked == r.pass_all);
    if (r.unknown < r.samples) {
      CHECK(Rational(r.fraction_num, r.fraction_den) ==
            Rational(static_cast<std::int64_t>(r.pass_all), static_cast<std::int64_t>(r.samples - r.unknown)));
    } else {
      CHECK(r.fraction_den == 0);
    }
  }
  // t = 1: no pieces, no powers, and the single letter is never readable at mu < 1.
  CHECK(table.rows[0].pass_all == 40);
  // Beyond the C3 length cap every C1 and C2 pass is Unknown.
  CHECK(table.rows[4].unknown == table.rows[4].pass_c12);

  auto again = sample_genericity(opt);
  CHECK(to_csv(again) == to_csv(table));
  opt.seed = 2025;
  CHECK(to_csv(sample_genericity(opt)) != to_csv(table));

  const auto csv = to_csv(table);
  CHECK(csv.rfind("t,samples,pass_c1,pass_c2,pass_c3_checked,pass_all,unknown,fraction_num,fraction_den\n", 0) == 0);
}

TEST_CASE("unknowns in the table match Undetermined verdicts", "[genericity][property]") {
  SampleOptions opt;
  opt.lengths = {8, 12};
  opt.samples_per_length = 15;
  opt.params = ClassParams::defaults(2);
  opt.node_budget = 50;
  opt.seed = 11;
  auto table = sample_genericity(opt);
  for (const auto& row : table.rows) {
    std::size_t undetermined = 0;
    std::size_t in_class = 0;
    for (std::size_t idx = 0; idx < opt.samples_per_length; ++idx) {
      auto rng = sample_stream(opt.seed, row.t, idx);
      CyclicWordSampler sampler(opt.m, row.t);
      Presentation p(opt.m, std::vector<Word>{sampler.sample(rng)});
      auto rep = check_membership(p, opt.params, opt.node_budget);
      undetermined += rep.verdict == Membership::Undetermined;
      in_class += rep.verdict == Membership::InClass;
    }
    CHECK(row.unknown == undetermined);
    CHECK(row.pass_all == in_class);
  }
}

TEST_CASE("the at-most-t regime mixes lengths by count", "[genericity][property]") {
  // Exhaustive counts of cyclically reduced words with m = 2, lengths 1..4.
  std::map<std::int64_t, std::size_t> exact;
  std::size_t total = 0;
  for (std::size_t len = 1; len <= 4; ++len) {
    for (const Word& x : testing::all_reduced_words(2, len)) {
      if (is_cyclically_reduced(x)) {
        ++exact[static_cast<std::int64_t>(len)];
        ++total;
      }
    }
  }
  detail::LengthMixer mixer(2, 4);
  Rng rng(77);
  std::map<std::int64_t, std::size_t> seen;
  const std::size_t draws = 40000;
  for (std::size_t i = 0; i < draws; ++i) ++seen[mixer.draw(rng)];
  double chi2 = 0;
  for (auto [len, count] : exact) {
    const double expect = static_cast<double>(draws) * static_cast<double>(count) / static_cast<double>(total);
    const double diff = static_cast<double>(seen[len]) - expect;
    chi2 += diff * diff / expect;
  }
  CHECK(chi2 < 11.34);  // 3 degrees of freedom, 99%
}
