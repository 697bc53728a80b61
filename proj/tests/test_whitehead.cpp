#include <catch_amalgamated.hpp>

#include <map>
#include <numeric>
#include <set>

#include "aog/whitehead.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace aog;
using aog::testing::Rng;
using aog::testing::OrbitOracle;

namespace {

CyclicWord cw(std::string_view text) { return CyclicWord(parse_word(text)); }

WhiteheadMove random_move(int m, Rng& rng) {
  if (rng() % 3 == 0) {
    auto all = relabel_moves(m);
    return all[rng() % all.size()];
  }
  auto all = multiplier_moves(m);
  return all[rng() % all.size()];
}

}  // namespace

TEST_CASE("Whitehead move examples", "[whitehead]") {
  auto swap = WhiteheadMove::relabel(2, {2, 1});
  CHECK(apply_move(cw("a"), swap) == cw("b"));
  auto mult = WhiteheadMove::multiply(2, 1, {1, 2});
  CHECK(apply_move(parse_word("b"), mult) == parse_word("ba"));
  CHECK(apply_move(cw("aab"), mult) == cw("aaba"));
  CHECK(apply_move(parse_word("B"), mult) == parse_word("AB"));
  auto both = WhiteheadMove::multiply(2, 1, {1, 2, -2});
  CHECK(apply_move(parse_word("b"), both) == parse_word("Aba"));
  CHECK(apply_move(cw("b"), both) == cw("b"));

  CHECK_THROWS(WhiteheadMove::multiply(2, 1, {2}));
  CHECK_THROWS(WhiteheadMove::multiply(2, 1, {1, -1}));
  CHECK_THROWS(WhiteheadMove::multiply(2, 1, {1, 3}));
  CHECK_THROWS(WhiteheadMove::relabel(2, {1, 1}));
  CHECK_THROWS(WhiteheadMove::relabel(2, {1}));
  CHECK_THROWS(apply_move(cw("c"), swap));

  CHECK(relabel_moves(2).size() == 8);
  CHECK(relabel_moves(3).size() == 48);
  CHECK(multiplier_moves(2).size() == 4 * 3);
  CHECK(multiplier_moves(3).size() == 6 * 15);
}

TEST_CASE("moves are invertible", "[whitehead][property]") {
  Rng rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = 2 + trial % 3;
    auto mv = random_move(m, rng);
    Word w = testing::random_reduced(m, 1 + rng() % 25, rng);
    CHECK(apply_move(apply_move(w, mv), inverse(mv)) == w);
    CHECK(inverse(inverse(mv)) == mv);
    CyclicWord c(testing::random_cyclic(m, 1 + rng() % 25, rng));
    CHECK(apply_move(apply_move(c, mv), inverse(mv)) == c);
  }
}

TEST_CASE("minimize examples", "[whitehead]") {
  CHECK(minimize(cw("aab"), 2).word.size() == 1);
  auto comm = minimize(cw("abAB"), 2);
  CHECK(comm.word == cw("abAB"));
  CHECK(comm.moves.empty());
  CHECK(minimize(cw("a"), 2).word == cw("a"));
  CHECK_THROWS(minimize(CyclicWord(), 2));

  auto r = minimize(cw("aabaBBAb"), 2);
  CHECK(apply_moves(cw("aabaBBAb"), r.moves) == r.word);
  for (const auto& mv : multiplier_moves(2)) CHECK(apply_move(r.word, mv).size() >= r.word.size());
}

TEST_CASE("minimal length and orbits agree with exhaustive search", "[whitehead][property]") {
  OrbitOracle oracle(8);
  std::vector<CyclicWord> small;
  for (const auto& w : oracle.words)
    if (w.size() <= 6) small.push_back(w);

  for (const auto& w : small) {
    auto res = minimize(w, 2);
    CHECK(res.word.size() == oracle.min_length.at(oracle.component(w)));
    CHECK(apply_moves(w, res.moves) == res.word);
  }

  Rng rng(6);
  std::size_t positives = 0;
  for (const auto& u : small) {
    for (int k = 0; k < 12; ++k) {
      const auto& v = small[rng() % small.size()];
      const bool expect = oracle.component(u) == oracle.component(v) ||
                          oracle.component(u) == oracle.component(inverse(v));
      auto cert = same_orbit(u, v, 2);
      CHECK(cert.has_value() == expect);
      if (cert) {
        ++positives;
        CHECK(replays(*cert));
      }
    }
    // Every member of the component is found.
    const auto cu = oracle.component(u);
    for (const auto& v : small)
      if (oracle.component(v) == cu && rng() % 8 == 0) CHECK(same_orbit(u, v, 2).has_value());
  }
  CHECK(positives > 0);
}

TEST_CASE("same_orbit is an equivalence with replaying certificates", "[whitehead][property]") {
  CHECK(same_orbit(cw("a"), cw("b"), 2)->moves.size() == 1);
  CHECK_FALSE(same_orbit(cw("abAB"), cw("a"), 2));

  Rng rng(55);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 2 + trial % 2;
    CyclicWord r(testing::random_cyclic(m, 8 + rng() % 20, rng));
    CyclicWord img = r;
    for (int k = 0; k < 5; ++k) img = apply_move(img, random_move(m, rng));
    if (rng() % 2) img = inverse(img);
    auto cert = same_orbit(r, img, m);
    REQUIRE(cert);
    CHECK(replays(*cert));
    CHECK(cert->source == r);
    CHECK(cert->target == img);
    auto back = same_orbit(img, r, m);
    REQUIRE(back);
    CHECK(replays(*back));
    auto self = same_orbit(r, r, m);
    REQUIRE(self);
    CHECK(replays(*self));
  }
}
