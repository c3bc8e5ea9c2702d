#pragma once

// Move policy for live play.

#include "bwnim/gamecore.hpp"
#include "bwnim/solver.hpp"

namespace bwnim {

/// Best move from a legal, non-terminal position. From an N-position this is
/// the move of a closed-form oracle that matches the game, when one applies, otherwise the winning move
/// with the smallest target. From a P-position it is delaying_move().
/// Throws std::invalid_argument("game over") when no move exists.
Move engine_move(const GameSpec& spec, const Position& pos, TableCache& cache);

/// Lower the largest heap by one if that is legal, otherwise the legal move
/// removing the fewest tokens (ties go to the larger heap).
Move delaying_move(const GameSpec& spec, const Position& pos);

}  // namespace bwnim
