#include <catch_amalgamated.hpp>

#include "aog/iso.hpp"
#include "support.hpp"

using namespace aog;
using aog::testing::Rng;

namespace {

Presentation one(int m, const Word& r) { return Presentation(m, std::vector<Word>{r}); }
Presentation one(int m, std::string_view r) { return one(m, parse_word(r)); }

const ClassParams kParams = ClassParams::defaults(2);

}  // namespace

TEST_CASE("isomorphism examples", "[iso]") {
  const auto r = parse_word("aabaBBAbbbaBAbab");
  auto rot = decide_isomorphic(one(2, r), one(2, rotate(r, 5)), kParams, std::nullopt, true);
  CHECK(rot.kind == IsoKind::Isomorphic);
  REQUIRE(rot.certificate);
  CHECK(rot.certificate->moves.empty());
  CHECK(rot.conditional);

  auto swapped = apply_move(CyclicWord(r), WhiteheadMove::relabel(2, {2, 1}));
  auto sw = decide_isomorphic(one(2, r), one(2, swapped.word()), kParams, std::nullopt, true);
  CHECK(sw.kind == IsoKind::Isomorphic);
  REQUIRE(sw.certificate);
  CHECK(sw.certificate->moves.size() == 1);
  CHECK(replays(*sw.certificate));

  // ab is in the class (no pieces, nothing readable); abAB has minimal length 4.
  auto certified = decide_isomorphic(one(2, "ab"), one(2, "abAB"), kParams, std::nullopt, false);
  CHECK(certified.kind == IsoKind::NotIsomorphic);
  CHECK_FALSE(certified.conditional);
  REQUIRE(certified.first_membership);
  CHECK(certified.first_membership->verdict == Membership::InClass);
  CHECK_FALSE(certified.second_membership);

  // The second presentation can supply membership too.
  auto second = decide_isomorphic(one(2, "abAB"), one(2, "ab"), kParams, std::nullopt, false);
  CHECK(second.kind == IsoKind::NotIsomorphic);
  REQUIRE(second.second_membership);
  CHECK(second.second_membership->verdict == Membership::InClass);

  auto neither = decide_isomorphic(one(2, "aabb"), one(2, "abAB"), kParams, std::nullopt, false);
  CHECK(neither.kind == IsoKind::Inapplicable);
  CHECK_FALSE(neither.certificate);

  CHECK_THROWS(decide_isomorphic(one(2, "ab"), one(3, "ab"), kParams, std::nullopt, true));
  CHECK_THROWS(decide_isomorphic(Presentation(2, std::vector<Word>{parse_word("ab"), parse_word("aab")}),
                                 one(2, "ab"), kParams, std::nullopt, true));
}

TEST_CASE("isomorphism is reflexive and symmetric", "[iso][property]") {
  Rng rng(40);
  const auto relabels = relabel_moves(2);
  const auto mults = multiplier_moves(2);
  for (int trial = 0; trial < 40; ++trial) {
    const Word r = testing::random_cyclic(2, 12 + rng() % 20, rng);
    CyclicWord img(r);
    for (int k = 0; k < 5; ++k)
      img = apply_move(img, rng() % 3 ? mults[rng() % mults.size()] : relabels[rng() % relabels.size()]);
    if (rng() % 2) img = inverse(img);
    const Word s = testing::random_cyclic(2, r.size(), rng);

    auto self = decide_isomorphic(one(2, r), one(2, r), kParams, std::nullopt, true);
    CHECK(self.kind == IsoKind::Isomorphic);

    for (const Word& other : {img.word(), s}) {
      auto fwd = decide_isomorphic(one(2, r), one(2, other), kParams, std::nullopt, true);
      auto bwd = decide_isomorphic(one(2, other), one(2, r), kParams, std::nullopt, true);
      CHECK(fwd.kind == bwd.kind);
      if (fwd.certificate) {
        CHECK(replays(*fwd.certificate));
        CHECK(replays(*bwd.certificate));
      }
    }
    auto pair = decide_isomorphic(one(2, r), one(2, img.word()), kParams, std::nullopt, true);
    CHECK(pair.kind == IsoKind::Isomorphic);
  }
}
