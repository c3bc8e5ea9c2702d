#pragma once

// Positions, heap colors, legality and move generation.
//
// Legality of a move X -> Y depends only on whether Y is a legal position;
// nothing consults the history of a heap, only coloring membership of the
// sizes involved.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bwnim/coloring.hpp"

namespace bwnim {

using HeapSize = std::int64_t;

/// Unordered multiset of heap sizes, stored sorted ascending.
class Position {
 public:
  Position() = default;
  explicit Position(std::vector<HeapSize> sizes);
  Position(std::initializer_list<HeapSize> sizes) : Position(std::vector<HeapSize>(sizes)) {}

  /// "x1,x2,...,xk" in any order.
  static Position parse(std::string_view text);
  /// Canonical "x1,x2,...,xk", ascending.
  std::string to_string() const;

  std::size_t k() const { return sizes_.size(); }
  HeapSize operator[](std::size_t i) const { return sizes_[i]; }
  std::span<const HeapSize> sizes() const { return sizes_; }
  auto begin() const { return sizes_.begin(); }
  auto end() const { return sizes_.end(); }

  HeapSize total() const;
  HeapSize max() const { return sizes_.empty() ? 0 : sizes_.back(); }
  bool is_terminal() const { return max() == 0; }
  bool has_empty_heap() const { return !sizes_.empty() && sizes_.front() == 0; }
  bool has_heap(HeapSize size) const;

  /// The position after one heap of size `from` is lowered to `to`.
  Position lowered(HeapSize from, HeapSize to) const;

  friend auto operator<=>(const Position&, const Position&) = default;

 private:
  std::vector<HeapSize> sizes_;
};

struct Move {
  Position from;
  Position to;
  HeapSize lowered_heap_old;
  HeapSize lowered_heap_new;

  friend bool operator==(const Move&, const Move&) = default;
};

enum class SpectrumInterpretation { AllColorsWhenFeasible, DistinctColors };
enum class BichromaticMode { AtMost, Exactly, AtLeast };
enum class Player { Left, Right };

/// At least one heap must be black (empty or top token in S).
struct BlackWhite {
  ColoringSet coloring;
};

/// Token n has color n mod l.
struct Spectrum {
  int l;
  SpectrumInterpretation interpretation;
};

struct Bichromatic {
  int l;
  BichromaticMode mode;
};

/// Left must move to a position with a white heap, Right to one with a black
/// heap.
struct PartizanBW {
  ColoringSet coloring;
};

using Rules = std::variant<BlackWhite, Spectrum, Bichromatic, PartizanBW>;

class GameSpec {
 public:
  /// Validates k >= 1, l >= 2, and k >= 2 for bichromatic rules.
  GameSpec(int k, Rules rules);

  /// Rules grammar: any coloring spec (black & white), "partizan:<coloring>",
  /// "spectrum:<l>:all|distinct", "bichromatic:<l>:atmost|exactly|atleast".
  static GameSpec parse(std::string_view rules, int k);
  std::string rules_string() const;

  int k() const { return k_; }
  const Rules& rules() const { return rules_; }
  bool is_partizan() const { return std::holds_alternative<PartizanBW>(rules_); }
  /// The coloring of black & white rules (impartial or partizan), if any.
  const ColoringSet* coloring() const;

 private:
  int k_;
  Rules rules_;
};

bool heap_is_black(const ColoringSet& s, HeapSize size);

inline constexpr int kEmptyColor = -1;
/// size mod l, or kEmptyColor for an empty heap.
int color_of_heap(int l, HeapSize size);

bool spectrum_legal(int l, SpectrumInterpretation interpretation, std::span<const HeapSize> sizes);
bool bichromatic_legal(int l, BichromaticMode mode, std::span<const HeapSize> sizes);

/// Whether `pos` satisfies the color rule. Partizan positions are always
/// legal; the restriction there is on moves.
bool is_legal(const GameSpec& spec, const Position& pos);

/// Every Nim lowering whose target is legal, one Move per distinct target,
/// ordered by target. Throws std::invalid_argument("position violates color
/// rule") for an illegal or wrong-sized position, and for partizan rules.
std::vector<Move> legal_moves(const GameSpec& spec, const Position& pos);

std::vector<Move> partizan_legal_moves(const ColoringSet& s, const Position& pos, Player player);

/// All Nim lowerings, one per distinct target, ordered by target.
std::vector<Move> nim_moves(const Position& pos);

}  // namespace bwnim
