#include "bwnim/solver.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <sstream>

namespace bwnim {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::P:
      return "P";
    case Outcome::N:
      return "N";
    case Outcome::Illegal:
      return "Illegal";
  }
  return "?";
}

const char* to_string(PartizanOutcome o) {
  switch (o) {
    case PartizanOutcome::P:
      return "P";
    case PartizanOutcome::L:
      return "L";
    case PartizanOutcome::R:
      return "R";
    case PartizanOutcome::N:
      return "N";
  }
  return "?";
}

SolveLimits SolveLimits::from_environment() {
  SolveLimits limits;
  if (const char* env = std::getenv("BWNIM_MAX_TABLE_ENTRIES"); env && *env) {
    try {
      limits.max_entries = std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("BWNIM_MAX_TABLE_ENTRIES must be a nonnegative integer");
    }
  }
  return limits;
}

// ---------------------------------------------------------------------------
// PositionIndex

namespace {

std::uint64_t saturating_binom_step(std::uint64_t prev, HeapSize n, int r) {
  // C(n, r) = C(n, r-1) * (n - r + 1) / r, exact at every step.
  const unsigned __int128 v = static_cast<unsigned __int128>(prev) * static_cast<std::uint64_t>(n - r + 1) / r;
  return v > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(v);
}

}  // namespace

std::uint64_t PositionIndex::count(int k, HeapSize bound) {
  if (k < 1 || bound < 0) return 0;
  std::uint64_t c = 1;
  for (int r = 1; r <= k; ++r) {
    if (c == UINT64_MAX) return c;
    c = saturating_binom_step(c, bound + k, r);
  }
  return c;
}

PositionIndex::PositionIndex(int k, HeapSize bound) : k_(k), bound_(bound) {
  if (k < 1) throw std::invalid_argument("heap count k must be >= 1");
  if (bound < 0) throw std::invalid_argument("bound must be nonnegative");
  const auto rows = static_cast<std::size_t>(bound) + k + 1;
  binom_.assign(rows * (k + 1), 0);
  for (std::size_t n = 0; n < rows; ++n) {
    std::uint64_t c = 1;
    binom_[n * (k + 1)] = 1;
    for (int r = 1; r <= k && static_cast<std::size_t>(r) <= n; ++r) {
      c = c == UINT64_MAX ? c : saturating_binom_step(c, static_cast<HeapSize>(n), r);
      binom_[n * (k + 1) + r] = c;
    }
  }
  size_ = binom(bound + k, k);
}

bool PositionIndex::in_box(const Position& pos) const {
  return pos.k() == static_cast<std::size_t>(k_) && pos.max() <= bound_;
}

std::uint64_t PositionIndex::rank(std::span<const HeapSize> sorted) const {
  std::uint64_t r = 0;
  for (int i = 0; i < k_; ++i) r += binom(sorted[i] + i, i + 1);
  return r;
}

std::uint64_t PositionIndex::checked_rank(const Position& pos) const {
  if (pos.k() != static_cast<std::size_t>(k_)) {
    throw std::out_of_range("position has " + std::to_string(pos.k()) + " heaps, table has " +
                            std::to_string(k_));
  }
  if (pos.max() > bound_) {
    throw std::out_of_range("position " + pos.to_string() + " exceeds table bound " + std::to_string(bound_));
  }
  return rank(pos.sizes());
}

void PositionIndex::for_each_colex(
    const std::function<void(std::span<const HeapSize>, std::uint64_t)>& fn) const {
  std::vector<HeapSize> a(static_cast<std::size_t>(k_), 0);
  for (std::uint64_t r = 0;; ++r) {
    fn(a, r);
    int i = 0;
    while (i < k_ && a[i] == (i + 1 < k_ ? a[i + 1] : bound_)) ++i;
    if (i == k_) return;
    ++a[i];
    std::fill(a.begin(), a.begin() + i, 0);
  }
}

void PositionIndex::for_each_lex(
    const std::function<void(std::span<const HeapSize>, std::uint64_t)>& fn) const {
  std::vector<HeapSize> a(static_cast<std::size_t>(k_), 0);
  while (true) {
    fn(a, rank(a));
    int i = k_ - 1;
    while (i >= 0 && a[i] == bound_) --i;
    if (i < 0) return;
    ++a[i];
    std::fill(a.begin() + i + 1, a.end(), a[i]);
  }
}

// ---------------------------------------------------------------------------
// Solving

namespace {

// Legality of sorted tuples inside a box, with heap colors precomputed.
class LegalityProbe {
 public:
  LegalityProbe(const GameSpec& spec, HeapSize bound) : spec_(spec) {
    if (const auto* s = spec.coloring()) {
      black_.resize(static_cast<std::size_t>(bound) + 1);
      for (HeapSize h = 0; h <= bound; ++h) black_[h] = heap_is_black(*s, h);
    }
  }

  bool black(HeapSize h) const { return black_[h]; }

  bool has_black(std::span<const HeapSize> a) const {
    return std::any_of(a.begin(), a.end(), [&](HeapSize h) { return black_[h]; });
  }
  bool has_white(std::span<const HeapSize> a) const {
    return std::any_of(a.begin(), a.end(), [&](HeapSize h) { return !black_[h]; });
  }

  bool legal(std::span<const HeapSize> a) const {
    const auto& rules = spec_.rules();
    if (std::holds_alternative<BlackWhite>(rules)) return has_black(a);
    if (const auto* sp = std::get_if<Spectrum>(&rules)) return spectrum_legal(sp->l, sp->interpretation, a);
    if (const auto* bc = std::get_if<Bichromatic>(&rules)) return bichromatic_legal(bc->l, bc->mode, a);
    return true;
  }

 private:
  const GameSpec& spec_;
  std::vector<char> black_;
};

// Calls visit(target_rank, target_tuple) for every Nim lowering of `a`, one
// per distinct target; stops early when visit returns false.
template <class Visit>
void for_each_option(std::span<const HeapSize> a, const PositionIndex& index,
                     std::vector<HeapSize>& scratch, Visit&& visit) {
  const std::size_t k = a.size();
  for (std::size_t j = 0; j < k; ++j) {
    if (j > 0 && a[j] == a[j - 1]) continue;
    for (HeapSize y = 0; y < a[j]; ++y) {
      // Remove a[j], then insert y keeping the tuple sorted.
      scratch.assign(a.begin(), a.end());
      std::size_t i = j;
      while (i > 0 && scratch[i - 1] > y) {
        scratch[i] = scratch[i - 1];
        --i;
      }
      scratch[i] = y;
      if (!visit(index.rank(scratch), std::span<const HeapSize>(scratch))) return;
    }
  }
}

PositionIndex checked_index(int k, HeapSize bound, const SolveLimits& limits) {
  if (bound < 0) throw std::invalid_argument("bound must be nonnegative");
  const auto entries = PositionIndex::count(k, bound);
  if (entries > limits.max_entries) {
    throw ResourceLimitError("table of " + std::to_string(entries) + " positions exceeds the limit of " +
                             std::to_string(limits.max_entries) + " (BWNIM_MAX_TABLE_ENTRIES)");
  }
  return PositionIndex(k, bound);
}

void require_impartial(const GameSpec& spec) {
  if (spec.is_partizan()) throw std::invalid_argument("partizan rules need partizan_outcomes");
}

}  // namespace

std::uint32_t mex(std::span<const std::uint32_t> values) {
  std::vector<bool> seen(values.size() + 1, false);
  for (const auto v : values) {
    if (v < seen.size()) seen[v] = true;
  }
  std::uint32_t m = 0;
  while (seen[m]) ++m;
  return m;
}

OutcomeTable outcome_table(const GameSpec& spec, HeapSize bound, const SolveLimits& limits) {
  require_impartial(spec);
  PositionIndex index = checked_index(spec.k(), bound, limits);
  std::vector<Outcome> entries(index.size(), Outcome::Illegal);
  const LegalityProbe probe(spec, bound);
  std::vector<HeapSize> scratch;

  // Ranks are a topological order: options always have smaller ranks, and
  // illegal targets stay Illegal so they never count as P.
  index.for_each_colex([&](std::span<const HeapSize> a, std::uint64_t r) {
    if (!probe.legal(a)) return;
    bool reaches_p = false;
    for_each_option(a, index, scratch, [&](std::uint64_t t, std::span<const HeapSize>) {
      reaches_p = entries[t] == Outcome::P;
      return !reaches_p;
    });
    entries[r] = reaches_p ? Outcome::N : Outcome::P;
  });
  return OutcomeTable(spec, std::move(index), std::move(entries));
}

GrundyTable grundy_table(const GameSpec& spec, HeapSize bound, const SolveLimits& limits) {
  require_impartial(spec);
  PositionIndex index = checked_index(spec.k(), bound, limits);
  std::vector<std::uint32_t> values(index.size(), GrundyTable::kIllegal);
  const LegalityProbe probe(spec, bound);
  std::vector<HeapSize> scratch;

  // mex by generation stamps; a position has at most k * bound options.
  std::vector<std::uint64_t> stamp(static_cast<std::size_t>(spec.k()) * bound + 2, 0);
  std::uint64_t generation = 0;

  index.for_each_colex([&](std::span<const HeapSize> a, std::uint64_t r) {
    if (!probe.legal(a)) return;
    ++generation;
    for_each_option(a, index, scratch, [&](std::uint64_t t, std::span<const HeapSize>) {
      const auto g = values[t];
      if (g < stamp.size()) stamp[g] = generation;
      return true;
    });
    std::uint32_t m = 0;
    while (stamp[m] == generation) ++m;
    values[r] = m;
  });
  return GrundyTable(spec, std::move(index), std::move(values));
}

PartizanTable partizan_outcomes(const ColoringSet& s, int k, HeapSize bound, const SolveLimits& limits) {
  const GameSpec spec(k, PartizanBW{s});
  PositionIndex index = checked_index(k, bound, limits);
  const LegalityProbe probe(spec, bound);
  // Whether Left (resp. Right) wins when moving first; a stuck player loses.
  std::vector<char> left_wins(index.size(), 0);
  std::vector<char> right_wins(index.size(), 0);
  std::vector<PartizanOutcome> entries(index.size(), PartizanOutcome::P);
  std::vector<HeapSize> scratch;

  index.for_each_colex([&](std::span<const HeapSize> a, std::uint64_t r) {
    bool left = false;
    bool right = false;
    for_each_option(a, index, scratch, [&](std::uint64_t t, std::span<const HeapSize> target) {
      if (!left && !right_wins[t] && probe.has_white(target)) left = true;
      if (!right && !left_wins[t] && probe.has_black(target)) right = true;
      return !(left && right);
    });
    left_wins[r] = left;
    right_wins[r] = right;
    entries[r] = left ? (right ? PartizanOutcome::N : PartizanOutcome::L)
                      : (right ? PartizanOutcome::R : PartizanOutcome::P);
  });
  return PartizanTable(s, std::move(index), std::move(entries));
}

// ---------------------------------------------------------------------------
// Queries

std::vector<Position> OutcomeTable::p_positions() const {
  std::vector<Position> out;
  index_.for_each_lex([&](std::span<const HeapSize> a, std::uint64_t r) {
    if (entries_[r] == Outcome::P) out.emplace_back(std::vector<HeapSize>(a.begin(), a.end()));
  });
  return out;
}

std::optional<std::uint32_t> GrundyTable::grundy(const Position& pos) const {
  const auto g = values_[index_.checked_rank(pos)];
  if (g == kIllegal) return std::nullopt;
  return g;
}

Outcome GrundyTable::outcome(const Position& pos) const {
  const auto g = grundy(pos);
  if (!g) return Outcome::Illegal;
  return *g == 0 ? Outcome::P : Outcome::N;
}

std::vector<Position> GrundyTable::p_positions() const {
  std::vector<Position> out;
  index_.for_each_lex([&](std::span<const HeapSize> a, std::uint64_t r) {
    if (values_[r] == 0) out.emplace_back(std::vector<HeapSize>(a.begin(), a.end()));
  });
  return out;
}

namespace {

template <class Table>
std::vector<Move> winning_moves_in(const Table& table, const Position& pos) {
  auto moves = legal_moves(table.spec(), pos);
  table.index().checked_rank(pos);
  std::erase_if(moves, [&](const Move& m) { return table.outcome(m.to) != Outcome::P; });
  return moves;
}

}  // namespace

std::vector<Move> winning_moves(const OutcomeTable& table, const Position& pos) {
  return winning_moves_in(table, pos);
}

std::vector<Move> winning_moves(const GrundyTable& table, const Position& pos) {
  return winning_moves_in(table, pos);
}

std::vector<Move> winning_moves(const GameSpec& spec, const Position& pos) {
  if (!is_legal(spec, pos)) throw std::invalid_argument("position violates color rule");
  return winning_moves(outcome_table(spec, pos.max()), pos);
}

bool nim_xor_check(const Position& pos) {
  if (!pos.has_empty_heap()) throw std::invalid_argument("precondition: empty heap required");
  HeapSize x = 0;
  for (const auto h : pos) x ^= h;
  return x == 0;
}

// ---------------------------------------------------------------------------
// Export

namespace {

void write_header(std::ostream& out, int k, bool with_grundy) {
  for (int i = 1; i <= k; ++i) out << 'x' << i << ',';
  out << "outcome" << (with_grundy ? ",grundy" : "") << '\n';
}

void write_sizes(std::ostream& out, std::span<const HeapSize> a) {
  for (const auto h : a) out << h << ',';
}

}  // namespace

std::string to_csv(const OutcomeTable& table) {
  std::ostringstream out;
  write_header(out, table.spec().k(), true);
  table.index().for_each_lex([&](std::span<const HeapSize> a, std::uint64_t r) {
    write_sizes(out, a);
    out << to_string(table.at_rank(r)) << ",\n";
  });
  return out.str();
}

std::string to_csv(const GrundyTable& table) {
  std::ostringstream out;
  write_header(out, table.spec().k(), true);
  table.index().for_each_lex([&](std::span<const HeapSize> a, std::uint64_t r) {
    write_sizes(out, a);
    const auto g = table.at_rank(r);
    if (g == GrundyTable::kIllegal) {
      out << "Illegal,\n";
    } else {
      out << (g == 0 ? "P" : "N") << ',' << g << '\n';
    }
  });
  return out.str();
}

std::string to_csv(const PartizanTable& table) {
  std::ostringstream out;
  write_header(out, table.index().k(), false);
  table.index().for_each_lex([&](std::span<const HeapSize> a, std::uint64_t r) {
    write_sizes(out, a);
    out << to_string(table.at_rank(r)) << '\n';
  });
  return out.str();
}

// ---------------------------------------------------------------------------
// TableCache

std::shared_ptr<const GrundyTable> TableCache::get(const GameSpec& spec, HeapSize bound) {
  const auto key = std::make_pair(spec.rules_string(), spec.k());
  {
    std::shared_lock lock(mutex_);
    if (auto it = tables_.find(key); it != tables_.end() && it->second->bound() >= bound) return it->second;
  }
  auto solved = std::make_shared<const GrundyTable>(grundy_table(spec, bound, limits_));
  std::unique_lock lock(mutex_);
  auto& slot = tables_[key];
  if (!slot || slot->bound() < solved->bound()) slot = solved;
  return slot->bound() >= bound ? slot : solved;
}

}  // namespace bwnim
