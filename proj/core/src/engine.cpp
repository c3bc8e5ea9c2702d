#include "bwnim/engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "bwnim/oracles.hpp"

namespace bwnim {

Move delaying_move(const GameSpec& spec, const Position& pos) {
  const auto moves = legal_moves(spec, pos);
  if (moves.empty()) throw std::invalid_argument("game over");
  const HeapSize top = pos.max();
  const auto one_off = std::find_if(moves.begin(), moves.end(), [&](const Move& m) {
    return m.lowered_heap_old == top && m.lowered_heap_new == top - 1;
  });
  if (one_off != moves.end()) return *one_off;
  return *std::min_element(moves.begin(), moves.end(), [](const Move& a, const Move& b) {
    const auto ra = a.lowered_heap_old - a.lowered_heap_new;
    const auto rb = b.lowered_heap_old - b.lowered_heap_new;
    if (ra != rb) return ra < rb;
    return a.lowered_heap_old > b.lowered_heap_old;
  });
}

Move engine_move(const GameSpec& spec, const Position& pos, TableCache& cache) {
  if (pos.is_terminal()) throw std::invalid_argument("game over");
  if (!is_legal(spec, pos)) throw std::invalid_argument("position violates color rule");

  if (const auto oracle = sound_oracle_for(spec)) {
    if (oracle_is_p(spec, *oracle, pos)) return delaying_move(spec, pos);
    return oracle_winning_move(spec, *oracle, pos);
  }
  const auto table = cache.get(spec, pos.max());
  const auto wins = winning_moves(*table, pos);
  if (!wins.empty()) return wins.front();
  return delaying_move(spec, pos);
}

}  // namespace bwnim
