#pragma once

// Brute-force outcome classes and Grundy values by backward induction over
// the box of canonical positions with every heap <= M.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "bwnim/gamecore.hpp"

namespace bwnim {

enum class Outcome : std::uint8_t { Illegal, P, N };
enum class PartizanOutcome : std::uint8_t { P, L, R, N };

const char* to_string(Outcome o);
const char* to_string(PartizanOutcome o);

class ResourceLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct SolveLimits {
  static constexpr std::uint64_t kDefaultMaxEntries = 50'000'000;
  std::uint64_t max_entries = kDefaultMaxEntries;

  /// Defaults, overridden by BWNIM_MAX_TABLE_ENTRIES when set.
  static SolveLimits from_environment();
};

/// Dense ranking of sorted k-tuples over [0, M]. Ranks follow colex order, in
/// which every Nim option of a position has a smaller rank than the position.
class PositionIndex {
 public:
  PositionIndex(int k, HeapSize bound);

  int k() const { return k_; }
  HeapSize bound() const { return bound_; }
  std::uint64_t size() const { return size_; }

  /// Number of positions for (k, bound) without building an index; saturates
  /// at UINT64_MAX.
  static std::uint64_t count(int k, HeapSize bound);

  bool in_box(const Position& pos) const;
  /// Rank of a sorted tuple inside the box.
  std::uint64_t rank(std::span<const HeapSize> sorted) const;
  /// Throws std::out_of_range when pos is outside the box or has the wrong k.
  std::uint64_t checked_rank(const Position& pos) const;

  /// Visits every sorted tuple in rank order.
  void for_each_colex(const std::function<void(std::span<const HeapSize>, std::uint64_t)>& fn) const;
  /// Visits every sorted tuple in lexicographic order.
  void for_each_lex(const std::function<void(std::span<const HeapSize>, std::uint64_t)>& fn) const;

 private:
  std::uint64_t binom(HeapSize n, int r) const { return binom_[static_cast<std::size_t>(n) * (k_ + 1) + r]; }

  int k_;
  HeapSize bound_;
  std::uint64_t size_;
  std::vector<std::uint64_t> binom_;
};

class OutcomeTable {
 public:
  OutcomeTable(GameSpec spec, PositionIndex index, std::vector<Outcome> entries)
      : spec_(std::move(spec)), index_(std::move(index)), entries_(std::move(entries)) {}

  const GameSpec& spec() const { return spec_; }
  HeapSize bound() const { return index_.bound(); }
  const PositionIndex& index() const { return index_; }

  Outcome outcome(const Position& pos) const { return entries_[index_.checked_rank(pos)]; }
  Outcome at_rank(std::uint64_t rank) const { return entries_[rank]; }

  /// P-positions in lexicographic order.
  std::vector<Position> p_positions() const;

 private:
  GameSpec spec_;
  PositionIndex index_;
  std::vector<Outcome> entries_;
};

class GrundyTable {
 public:
  static constexpr std::uint32_t kIllegal = UINT32_MAX;

  GrundyTable(GameSpec spec, PositionIndex index, std::vector<std::uint32_t> values)
      : spec_(std::move(spec)), index_(std::move(index)), values_(std::move(values)) {}

  const GameSpec& spec() const { return spec_; }
  HeapSize bound() const { return index_.bound(); }
  const PositionIndex& index() const { return index_; }

  /// nullopt for illegal positions.
  std::optional<std::uint32_t> grundy(const Position& pos) const;
  Outcome outcome(const Position& pos) const;
  std::uint32_t at_rank(std::uint64_t rank) const { return values_[rank]; }

  std::vector<Position> p_positions() const;

 private:
  GameSpec spec_;
  PositionIndex index_;
  std::vector<std::uint32_t> values_;
};

class PartizanTable {
 public:
  PartizanTable(ColoringSet coloring, PositionIndex index, std::vector<PartizanOutcome> entries)
      : coloring_(std::move(coloring)), index_(std::move(index)), entries_(std::move(entries)) {}

  const ColoringSet& coloring() const { return coloring_; }
  HeapSize bound() const { return index_.bound(); }
  const PositionIndex& index() const { return index_; }

  PartizanOutcome outcome(const Position& pos) const { return entries_[index_.checked_rank(pos)]; }
  PartizanOutcome at_rank(std::uint64_t rank) const { return entries_[rank]; }

 private:
  ColoringSet coloring_;
  PositionIndex index_;
  std::vector<PartizanOutcome> entries_;
};

/// Least nonnegative integer not in `values`.
std::uint32_t mex(std::span<const std::uint32_t> values);

OutcomeTable outcome_table(const GameSpec& spec, HeapSize bound,
                           const SolveLimits& limits = SolveLimits::from_environment());
GrundyTable grundy_table(const GameSpec& spec, HeapSize bound,
                         const SolveLimits& limits = SolveLimits::from_environment());

/// Normal-play classification of the partizan black & white game: Left must
/// move to a position with a white heap, Right to one with a black heap.
PartizanTable partizan_outcomes(const ColoringSet& s, int k, HeapSize bound,
                                const SolveLimits& limits = SolveLimits::from_environment());

/// Legal moves whose target is a P-position. Empty iff pos is P.
std::vector<Move> winning_moves(const OutcomeTable& table, const Position& pos);
std::vector<Move> winning_moves(const GrundyTable& table, const Position& pos);
/// Solves the box [0, max heap]^k on demand.
std::vector<Move> winning_moves(const GameSpec& spec, const Position& pos);

/// XOR of the heap sizes is zero. Only meaningful with an empty heap present,
/// where every Nim move is legal; throws otherwise.
bool nim_xor_check(const Position& pos);

/// CSV with header "x1,...,xk,outcome,grundy", rows in lexicographic order.
/// An OutcomeTable leaves the grundy column blank.
std::string to_csv(const OutcomeTable& table);
std::string to_csv(const GrundyTable& table);
/// Header "x1,...,xk,outcome" with outcomes P/L/R/N.
std::string to_csv(const PartizanTable& table);

/// Finished Grundy tables keyed by (rules, k), reused for any bound up to the
/// largest one solved. Safe for concurrent use.
class TableCache {
 public:
  explicit TableCache(SolveLimits limits = SolveLimits::from_environment()) : limits_(limits) {}

  std::shared_ptr<const GrundyTable> get(const GameSpec& spec, HeapSize bound);

 private:
  SolveLimits limits_;
  std::shared_mutex mutex_;
  std::map<std::pair<std::string, int>, std::shared_ptr<const GrundyTable>> tables_;
};

}  // namespace bwnim
