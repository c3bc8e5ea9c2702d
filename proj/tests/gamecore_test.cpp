#include "bwnim/gamecore.hpp"

#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

namespace bwnim {
namespace {

std::vector<Position> targets(const std::vector<Move>& moves) {
  std::vector<Position> out;
  for (const auto& m : moves) out.push_back(m.to);
  return out;
}

GameSpec bw(const std::string& coloring, int k) { return GameSpec::parse(coloring, k); }

TEST(Position, CanonicalSortedMultiset) {
  EXPECT_EQ(Position({3, 0, 2}), Position({0, 2, 3}));
  EXPECT_EQ(Position::parse("4,3").to_string(), "3,4");
  EXPECT_EQ(Position::parse("0,5,5").total(), 10);
  EXPECT_THROW(Position::parse("1,,2"), std::invalid_argument);
  EXPECT_THROW(Position::parse("1,-2"), std::invalid_argument);
  EXPECT_THROW(Position::parse(""), std::invalid_argument);
}

TEST(Position, Lowered) {
  const Position p{1, 5, 5};
  EXPECT_EQ(p.lowered(5, 0), Position({0, 1, 5}));
  EXPECT_THROW(p.lowered(5, 5), std::invalid_argument);
  EXPECT_THROW(p.lowered(4, 1), std::invalid_argument);
}

TEST(HeapColor, WorkedExample) {
  const auto s = ColoringSet::explicit_set({2});
  EXPECT_TRUE(heap_is_black(s, 0));
  EXPECT_TRUE(heap_is_black(s, 2));
  EXPECT_FALSE(heap_is_black(s, 3));
}

TEST(IsLegal, Examples) {
  EXPECT_TRUE(is_legal(bw("explicit:2", 3), Position({0, 2, 3})));
  EXPECT_FALSE(is_legal(bw("modular:2", 2), Position({1, 1})));
  EXPECT_TRUE(is_legal(bw("modular:2", 2), Position({0, 0})));
  EXPECT_TRUE(is_legal(GameSpec::parse("spectrum:3:all", 4), Position({0, 0, 0, 0})));
  EXPECT_FALSE(is_legal(bw("modular:2", 3), Position({0, 0})));  // wrong k
}

TEST(LegalMoves, WorkedExample) {
  const auto moves = legal_moves(bw("explicit:2", 2), Position({1, 2}));
  EXPECT_EQ(targets(moves), (std::vector<Position>{{0, 1}, {0, 2}}));
  for (const auto& m : moves) EXPECT_EQ(m.from, Position({1, 2}));
}

TEST(LegalMoves, WorkedExampleOnlyOneTokenFromSecondHeapIsBanned) {
  // From (0,2,3) with S = {2}, every Nim move except 2 -> 1 would be legal in
  // general, but the empty heap keeps every target legal.
  const auto spec = bw("explicit:2", 3);
  EXPECT_EQ(legal_moves(spec, Position({0, 2, 3})).size(), nim_moves(Position({0, 2, 3})).size());
  // Without the empty heap: (1,2,3) -> (1,1,3) leaves only white heaps.
  const auto moves = targets(legal_moves(spec, Position({1, 2, 3})));
  EXPECT_EQ(std::count(moves.begin(), moves.end(), Position({1, 1, 3})), 0);
  EXPECT_EQ(moves.size(), nim_moves(Position({1, 2, 3})).size() - 1);
}

TEST(LegalMoves, TerminalAndModular) {
  EXPECT_TRUE(legal_moves(bw("modular:2", 2), Position({0, 0})).empty());
  EXPECT_EQ(targets(legal_moves(bw("modular:2", 2), Position({2, 2}))),
            (std::vector<Position>{{0, 2}, {1, 2}}));
}

TEST(LegalMoves, RejectsIllegalPosition) {
  try {
    legal_moves(bw("modular:2", 2), Position({1, 3}));
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "position violates color rule");
  }
  EXPECT_THROW(legal_moves(GameSpec::parse("partizan:modular:2", 2), Position({1, 2})), std::invalid_argument);
}

TEST(Colors, ColorOfHeap) {
  EXPECT_EQ(color_of_heap(3, 7), 1);
  EXPECT_EQ(color_of_heap(3, 0), kEmptyColor);
  EXPECT_EQ(color_of_heap(2, 4), 0);
}

TEST(Colors, SpectrumPredicate) {
  using I = SpectrumInterpretation;
  const std::vector<HeapSize> a{1, 2, 5};
  EXPECT_TRUE(spectrum_legal(2, I::AllColorsWhenFeasible, a));
  EXPECT_FALSE(spectrum_legal(2, I::DistinctColors, a));
  const std::vector<HeapSize> b{1, 2};
  EXPECT_TRUE(spectrum_legal(3, I::AllColorsWhenFeasible, b));
  EXPECT_TRUE(spectrum_legal(3, I::DistinctColors, b));
  const std::vector<HeapSize> c{1, 4};  // both color 1 mod 3
  EXPECT_FALSE(spectrum_legal(3, I::AllColorsWhenFeasible, c));
  const std::vector<HeapSize> d{0, 1, 3};  // l = 2 <= k = 3 needs both colors
  EXPECT_FALSE(spectrum_legal(2, I::AllColorsWhenFeasible, d));
  const std::vector<HeapSize> empty{0, 0, 0};
  EXPECT_TRUE(spectrum_legal(2, I::AllColorsWhenFeasible, empty));
  EXPECT_TRUE(spectrum_legal(5, I::DistinctColors, empty));
}

TEST(Colors, BichromaticPredicate) {
  using M = BichromaticMode;
  const std::vector<HeapSize> two{1, 2, 4};
  for (const auto mode : {M::AtMost, M::Exactly, M::AtLeast}) EXPECT_TRUE(bichromatic_legal(3, mode, two));
  const std::vector<HeapSize> one{3, 6};
  EXPECT_TRUE(bichromatic_legal(3, M::AtMost, one));
  EXPECT_FALSE(bichromatic_legal(3, M::Exactly, one));
  EXPECT_FALSE(bichromatic_legal(3, M::AtLeast, one));
  const std::vector<HeapSize> none{0, 0};
  EXPECT_TRUE(bichromatic_legal(3, M::AtMost, none));
  EXPECT_FALSE(bichromatic_legal(3, M::Exactly, none));
  EXPECT_FALSE(bichromatic_legal(3, M::AtLeast, none));
  const std::vector<HeapSize> three{1, 2, 3};
  EXPECT_FALSE(bichromatic_legal(3, M::AtMost, three));
  EXPECT_TRUE(bichromatic_legal(3, M::AtLeast, three));
}

TEST(Partizan, Examples) {
  const auto evens = ColoringSet::modular(2);
  EXPECT_TRUE(partizan_legal_moves(evens, Position({0, 0}), Player::Left).empty());
  EXPECT_TRUE(partizan_legal_moves(evens, Position({0, 0}), Player::Right).empty());
  EXPECT_EQ(targets(partizan_legal_moves(evens, Position({2, 1}), Player::Left)),
            (std::vector<Position>{{0, 1}, {1, 1}}));
  EXPECT_EQ(targets(partizan_legal_moves(evens, Position({2, 1}), Player::Right)),
            (std::vector<Position>{{0, 1}, {0, 2}}));
}

TEST(GameSpec, GrammarRoundTrip) {
  for (const std::string text : {"modular:2", "partizan:beatty:(1+1*sqrt(2))/1", "spectrum:3:all", "spectrum:2:distinct",
                                 "bichromatic:3:atmost", "bichromatic:3:exactly", "bichromatic:4:atleast"}) {
    EXPECT_EQ(GameSpec::parse(text, 3).rules_string(), text);
  }
  EXPECT_THROW(GameSpec::parse("spectrum:1:all", 2), std::invalid_argument);
  EXPECT_THROW(GameSpec::parse("spectrum:3:some", 2), std::invalid_argument);
  EXPECT_THROW(GameSpec::parse("bichromatic:3:atmost", 1), std::invalid_argument);
  EXPECT_THROW(GameSpec::parse("modular:2", 0), std::invalid_argument);
}

// Properties over random positions and all rule families.

std::vector<GameSpec> impartial_specs(int k) {
  return {bw("modular:2", k),           bw("modular:3", k),          bw("beatty:(1+1*sqrt(2))/1", k),
          bw("rational:5/2", k),        bw("explicit:2,5,9", k),     GameSpec::parse("spectrum:2:all", k),
          GameSpec::parse("spectrum:3:distinct", k), GameSpec::parse("bichromatic:3:atleast", k)};
}

TEST(LegalMovesProperty, PermutationInvariantClosedAndDecreasing) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<HeapSize> size(0, 14);
  for (int k = 2; k <= 4; ++k) {
    for (const auto& spec : impartial_specs(k)) {
      for (int trial = 0; trial < 150; ++trial) {
        std::vector<HeapSize> heaps(k);
        for (auto& h : heaps) h = size(rng);
        const Position pos(heaps);
        if (!is_legal(spec, pos)) continue;
        const auto moves = legal_moves(spec, pos);
        std::shuffle(heaps.begin(), heaps.end(), rng);
        EXPECT_EQ(legal_moves(spec, Position(heaps)), moves);
        std::set<Position> seen;
        for (const auto& m : moves) {
          EXPECT_TRUE(is_legal(spec, m.to));
          EXPECT_LT(m.to.total(), pos.total());
          EXPECT_LT(m.lowered_heap_new, m.lowered_heap_old);
          EXPECT_TRUE(seen.insert(m.to).second) << "duplicate target";
        }
      }
    }
  }
}

TEST(LegalMovesProperty, EmptyHeapOpensEveryNimMove) {
  std::mt19937 rng(23);
  std::uniform_int_distribution<HeapSize> size(0, 20);
  for (const auto& coloring : {"modular:3", "beatty:(0+1*sqrt(5))/1", "rational:7/3", "explicit:4"}) {
    for (int k = 2; k <= 4; ++k) {
      const auto spec = bw(coloring, k);
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<HeapSize> heaps(k);
        for (auto& h : heaps) h = size(rng);
        heaps[0] = 0;
        const Position pos(heaps);
        EXPECT_EQ(legal_moves(spec, pos), nim_moves(pos));
      }
    }
  }
}

// Adding members above every heap in play changes nothing.
TEST(LegalMovesProperty, OnlyMembershipOfInvolvedSizesMatters) {
  std::mt19937 rng(29);
  std::uniform_int_distribution<HeapSize> size(1, 12);
  const auto small = bw("explicit:2,5,7", 3);
  const auto padded = bw("explicit:2,5,7,13,20,31", 3);
  for (int trial = 0; trial < 300; ++trial) {
    const Position pos({size(rng), size(rng), size(rng)});
    EXPECT_EQ(is_legal(small, pos), is_legal(padded, pos));
    if (is_legal(small, pos)) EXPECT_EQ(legal_moves(small, pos), legal_moves(padded, pos));
  }
}

}  // namespace
}  // namespace bwnim
