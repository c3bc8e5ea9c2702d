#include "bwnim/gamecore.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bwnim {

Position::Position(std::vector<HeapSize> sizes) : sizes_(std::move(sizes)) {
  for (const auto s : sizes_) {
    if (s < 0) throw std::invalid_argument("heap sizes must be nonnegative");
  }
  std::sort(sizes_.begin(), sizes_.end());
}

Position Position::parse(std::string_view text) {
  std::vector<HeapSize> sizes;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    const auto field = text.substr(start, comma - start);
    HeapSize v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
      throw std::invalid_argument("malformed position: '" + std::string(text) + "'");
    }
    sizes.push_back(v);
    if (comma == text.size()) break;
    start = comma + 1;
  }
  return Position(std::move(sizes));
}

std::string Position::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < sizes_.size(); ++i) out << (i ? "," : "") << sizes_[i];
  return out.str();
}

HeapSize Position::total() const { return std::accumulate(sizes_.begin(), sizes_.end(), HeapSize{0}); }

bool Position::has_heap(HeapSize size) const {
  return std::binary_search(sizes_.begin(), sizes_.end(), size);
}

Position Position::lowered(HeapSize from, HeapSize to) const {
  if (to < 0 || to >= from) throw std::invalid_argument("move must lower the heap");
  auto it = std::lower_bound(sizes_.begin(), sizes_.end(), from);
  if (it == sizes_.end() || *it != from) throw std::invalid_argument("no heap of that size");
  Position out = *this;
  out.sizes_[static_cast<std::size_t>(it - sizes_.begin())] = to;
  std::sort(out.sizes_.begin(), out.sizes_.end());
  return out;
}

namespace {

int parse_small(std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("malformed integer: '" + std::string(text) + "'");
  }
  return v;
}

// "<l>:<mode>" -> (l, mode)
std::pair<int, std::string_view> split_color_rule(std::string_view body) {
  const auto colon = body.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("expected <l>:<mode>, got '" + std::string(body) + "'");
  }
  return {parse_small(body.substr(0, colon)), body.substr(colon + 1)};
}

}  // namespace

GameSpec::GameSpec(int k, Rules rules) : k_(k), rules_(std::move(rules)) {
  if (k_ < 1) throw std::invalid_argument("heap count k must be >= 1");
  if (const auto* s = std::get_if<Spectrum>(&rules_); s && s->l < 2) {
    throw std::invalid_argument("color count l must be >= 2");
  }
  if (const auto* b = std::get_if<Bichromatic>(&rules_)) {
    if (b->l < 2) throw std::invalid_argument("color count l must be >= 2");
    if (k_ < 2) throw std::invalid_argument("bichromatic rules need k >= 2");
  }
}

GameSpec GameSpec::parse(std::string_view rules, int k) {
  if (rules.starts_with("partizan:")) {
    return GameSpec(k, PartizanBW{ColoringSet::parse(rules.substr(9))});
  }
  if (rules.starts_with("spectrum:")) {
    const auto [l, mode] = split_color_rule(rules.substr(9));
    if (mode == "all") return GameSpec(k, Spectrum{l, SpectrumInterpretation::AllColorsWhenFeasible});
    if (mode == "distinct") return GameSpec(k, Spectrum{l, SpectrumInterpretation::DistinctColors});
    throw std::invalid_argument("spectrum mode must be all|distinct");
  }
  if (rules.starts_with("bichromatic:")) {
    const auto [l, mode] = split_color_rule(rules.substr(12));
    if (mode == "atmost") return GameSpec(k, Bichromatic{l, BichromaticMode::AtMost});
    if (mode == "exactly") return GameSpec(k, Bichromatic{l, BichromaticMode::Exactly});
    if (mode == "atleast") return GameSpec(k, Bichromatic{l, BichromaticMode::AtLeast});
    throw std::invalid_argument("bichromatic mode must be atmost|exactly|atleast");
  }
  return GameSpec(k, BlackWhite{ColoringSet::parse(rules)});
}

std::string GameSpec::rules_string() const {
  if (const auto* bw = std::get_if<BlackWhite>(&rules_)) return bw->coloring.to_string();
  if (const auto* pz = std::get_if<PartizanBW>(&rules_)) return "partizan:" + pz->coloring.to_string();
  if (const auto* sp = std::get_if<Spectrum>(&rules_)) {
    return "spectrum:" + std::to_string(sp->l) +
           (sp->interpretation == SpectrumInterpretation::AllColorsWhenFeasible ? ":all" : ":distinct");
  }
  const auto& bc = std::get<Bichromatic>(rules_);
  const char* mode = bc.mode == BichromaticMode::AtMost    ? ":atmost"
                     : bc.mode == BichromaticMode::Exactly ? ":exactly"
                                                           : ":atleast";
  return "bichromatic:" + std::to_string(bc.l) + mode;
}

const ColoringSet* GameSpec::coloring() const {
  if (const auto* bw = std::get_if<BlackWhite>(&rules_)) return &bw->coloring;
  if (const auto* pz = std::get_if<PartizanBW>(&rules_)) return &pz->coloring;
  return nullptr;
}

bool heap_is_black(const ColoringSet& s, HeapSize size) {
  if (size < 0) throw std::invalid_argument("heap sizes must be nonnegative");
  return size == 0 || s.contains(size);
}

int color_of_heap(int l, HeapSize size) {
  if (l < 2) throw std::invalid_argument("color count l must be >= 2");
  return size == 0 ? kEmptyColor : static_cast<int>(size % l);
}

namespace {

// Distinct colors among non-empty heaps; false in `distinct` on a repeat.
struct ColorCensus {
  int count = 0;
  bool distinct = true;
};

ColorCensus census(int l, std::span<const HeapSize> sizes) {
  std::vector<bool> seen(static_cast<std::size_t>(l), false);
  ColorCensus c;
  for (const auto s : sizes) {
    const int color = color_of_heap(l, s);
    if (color == kEmptyColor) continue;
    if (seen[color]) {
      c.distinct = false;
    } else {
      seen[color] = true;
      ++c.count;
    }
  }
  return c;
}

}  // namespace

bool spectrum_legal(int l, SpectrumInterpretation interpretation, std::span<const HeapSize> sizes) {
  const auto c = census(l, sizes);
  if (c.count == 0) return true;
  const auto k = static_cast<int>(sizes.size());
  if (interpretation == SpectrumInterpretation::AllColorsWhenFeasible && l <= k) return c.count == l;
  return c.distinct;
}

bool bichromatic_legal(int l, BichromaticMode mode, std::span<const HeapSize> sizes) {
  const int count = census(l, sizes).count;
  switch (mode) {
    case BichromaticMode::AtMost:
      return count <= 2;
    case BichromaticMode::Exactly:
      return count == 2;
    case BichromaticMode::AtLeast:
      return count >= 2;
  }
  return false;
}

namespace {

bool has_black_heap(const ColoringSet& s, std::span<const HeapSize> sizes) {
  return std::any_of(sizes.begin(), sizes.end(), [&](HeapSize h) { return heap_is_black(s, h); });
}

bool has_white_heap(const ColoringSet& s, std::span<const HeapSize> sizes) {
  return std::any_of(sizes.begin(), sizes.end(), [&](HeapSize h) { return !heap_is_black(s, h); });
}

}  // namespace

bool is_legal(const GameSpec& spec, const Position& pos) {
  if (pos.k() != static_cast<std::size_t>(spec.k())) return false;
  const auto sizes = pos.sizes();
  if (const auto* bw = std::get_if<BlackWhite>(&spec.rules())) return has_black_heap(bw->coloring, sizes);
  if (const auto* sp = std::get_if<Spectrum>(&spec.rules())) return spectrum_legal(sp->l, sp->interpretation, sizes);
  if (const auto* bc = std::get_if<Bichromatic>(&spec.rules())) return bichromatic_legal(bc->l, bc->mode, sizes);
  return true;
}

std::vector<Move> nim_moves(const Position& pos) {
  std::vector<Move> moves;
  HeapSize previous = -1;
  for (const auto h : pos) {
    if (h == previous) continue;
    previous = h;
    for (HeapSize y = 0; y < h; ++y) moves.push_back(Move{pos, pos.lowered(h, y), h, y});
  }
  std::sort(moves.begin(), moves.end(), [](const Move& a, const Move& b) { return a.to < b.to; });
  return moves;
}

std::vector<Move> legal_moves(const GameSpec& spec, const Position& pos) {
  if (spec.is_partizan()) throw std::invalid_argument("partizan rules need a player to move");
  if (!is_legal(spec, pos)) throw std::invalid_argument("position violates color rule");
  auto moves = nim_moves(pos);
  std::erase_if(moves, [&](const Move& m) { return !is_legal(spec, m.to); });
  return moves;
}

std::vector<Move> partizan_legal_moves(const ColoringSet& s, const Position& pos, Player player) {
  auto moves = nim_moves(pos);
  std::erase_if(moves, [&](const Move& m) {
    return player == Player::Left ? !has_white_heap(s, m.to.sizes()) : !has_black_heap(s, m.to.sizes());
  });
  return moves;
}

}  // namespace bwnim
