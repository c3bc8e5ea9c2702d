#pragma once

// Closed-form P-position tests for two-heap modular and Beatty black & white
// Nim, constructive winning moves, and cross-validation
// against the brute-force solver.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bwnim/exactnum.hpp"
#include "bwnim/gamecore.hpp"

namespace bwnim {

// Modular case, S = multiples of beta, in the closed form
// (0,0) or {x, y} = {beta (n + t), beta n + t} with n >= 0 and
// 1 <= t <= beta - 1. Matches the game only for beta = 2; for beta >= 3 it
// pairs one black heap with several white ones (beta = 3: (2,6) and (4,6)).
bool modular_is_p(std::int64_t beta, const Position& pos);

// The same form restricted to n >= 1. It wrongly rejects positions such as
// (1,2) for beta = 2; cross_validate uses it to show n = 0 is needed.
bool modular_is_p_positive_n(std::int64_t beta, const Position& pos);

/// Case ladder: empty heap -> (0,0); x = beta i black and y >= x -> lower y
/// to beta (i - 1) + 1; y = beta n + t < x -> lower x to beta (n + t) when
/// i > n + t, else y to beta n + (i - n).
Move modular_winning_move(std::int64_t beta, const Position& pos);

// Modular case, actual P-positions: (0,0) and {beta i, w_i} for i >= 1, where
// w_i is the i-th positive non-multiple of beta. Equivalently
// {beta ((beta - 1) n + t), beta n + t} with n >= 0, 1 <= t <= beta - 1.
bool modular_pairing_is_p(std::int64_t beta, const Position& pos);

Move modular_pairing_winning_move(std::int64_t beta, const Position& pos);

/// n with floor(beta n) == v, if any. beta > 1, v >= 1.
std::optional<std::int64_t> beatty_index(const QuadraticIrrational& beta, std::int64_t v);

// Beatty case, S = { floor(beta n) }, beta > 2 irrational: P iff
// {x, y} = {floor(alpha n), floor(beta n)} for some n >= 0, where
// 1/alpha + 1/beta = 1.
bool beatty_is_p(const QuadraticIrrational& beta, const Position& pos);

Move beatty_winning_move(const QuadraticIrrational& beta, const Position& pos);

enum class OracleKind { Modular, ModularPositiveN, ModularPairing, Beatty };

std::string to_string(OracleKind kind);
OracleKind parse_oracle_kind(const std::string& text);

struct Mismatch {
  Position position;
  bool oracle_p;
  bool solver_p;
  /// Empty for a verdict disagreement; otherwise why the oracle's winning
  /// move from `position` was rejected.
  std::string detail;
};

struct OracleReport {
  GameSpec spec;
  OracleKind oracle;
  HeapSize bound;
  std::vector<Mismatch> mismatches;
  std::chrono::milliseconds elapsed{0};
  std::uint64_t positions_checked = 0;
  std::uint64_t moves_checked = 0;

  bool ok() const { return mismatches.empty(); }
};

/// The closed-form oracle matching a two-heap black & white spec, if
/// any: Modular for modular colorings, Beatty for irrational Beatty
/// colorings with beta > 2.
std::optional<OracleKind> oracle_for(const GameSpec& spec);

/// Like oracle_for, but ModularPairing for modular colorings.
std::optional<OracleKind> sound_oracle_for(const GameSpec& spec);

/// Oracle P-test / winning move dispatch for a spec accepted by oracle_for.
bool oracle_is_p(const GameSpec& spec, OracleKind kind, const Position& pos);
Move oracle_winning_move(const GameSpec& spec, OracleKind kind, const Position& pos);

/// Compares the oracle with the solver on every legal position of [0, M]^2
/// and checks every oracle winning move. Throws std::invalid_argument when
/// the spec is not of the oracle's family.
OracleReport cross_validate(const GameSpec& spec, OracleKind kind, HeapSize bound);

}  // namespace bwnim
