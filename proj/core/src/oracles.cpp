#include "bwnim/oracles.hpp"

#include <stdexcept>

#include "bwnim/solver.hpp"

namespace bwnim {

namespace {

void require_two_heaps(const Position& pos) {
  if (pos.k() != 2) throw std::invalid_argument("oracle needs k = 2");
}

void require_modulus(std::int64_t beta) {
  if (beta < 2) throw std::invalid_argument("modular oracle needs beta >= 2");
}

void require_beatty_beta(const QuadraticIrrational& beta) {
  if (beta.is_rational() || beta <= QuadraticIrrational::rational(2, 1, beta.d())) {
    throw std::invalid_argument("Beatty oracle needs an irrational beta > 2");
  }
}

Move lower(const Position& pos, HeapSize from, HeapSize to) { return Move{pos, pos.lowered(from, to), from, to}; }

std::int64_t to_int(const BigInt& v) { return v.convert_to<std::int64_t>(); }

bool modular_form(std::int64_t beta, const Position& pos, std::int64_t min_n) {
  require_two_heaps(pos);
  require_modulus(beta);
  const HeapSize lo = pos[0];
  const HeapSize hi = pos[1];
  if (hi == 0) return true;
  const std::int64_t t = lo % beta;
  if (t == 0) return false;
  const std::int64_t n = (lo - t) / beta;
  return n >= min_n && hi == beta * (n + t);
}

}  // namespace

bool modular_is_p(std::int64_t beta, const Position& pos) { return modular_form(beta, pos, 0); }

bool modular_is_p_positive_n(std::int64_t beta, const Position& pos) { return modular_form(beta, pos, 1); }

Move modular_winning_move(std::int64_t beta, const Position& pos) {
  if (modular_is_p(beta, pos)) throw std::invalid_argument("no winning move exists");
  const HeapSize lo = pos[0];
  const HeapSize hi = pos[1];
  if (lo == 0) return lower(pos, hi, 0);
  if (lo % beta != 0 && hi % beta != 0) throw std::invalid_argument("position violates color rule");

  // x = beta i is a black heap; prefer the smaller one so that y >= x when
  // both heaps are black.
  const bool lo_black = lo % beta == 0;
  const HeapSize x = lo_black ? lo : hi;
  const HeapSize y = lo_black ? hi : lo;
  const std::int64_t i = x / beta;
  if (y >= x) return lower(pos, y, beta * (i - 1) + 1);

  // beta i = x > y = beta n + t with 1 <= t <= beta - 1, hence i >= n + 1.
  const std::int64_t n = y / beta;
  const std::int64_t t = y % beta;
  if (i > n + t) return lower(pos, x, beta * (n + t));
  return lower(pos, y, beta * n + (i - n));
}

namespace {

// i-th positive non-multiple of beta.
std::int64_t non_multiple(std::int64_t beta, std::int64_t i) { return i + (i - 1) / (beta - 1); }

}  // namespace

bool modular_pairing_is_p(std::int64_t beta, const Position& pos) {
  require_two_heaps(pos);
  require_modulus(beta);
  const HeapSize lo = pos[0];
  const HeapSize hi = pos[1];
  if (hi == 0) return true;
  if (lo == 0 || hi % beta != 0) return false;
  return lo == non_multiple(beta, hi / beta);
}

Move modular_pairing_winning_move(std::int64_t beta, const Position& pos) {
  if (modular_pairing_is_p(beta, pos)) throw std::invalid_argument("no winning move exists");
  const HeapSize lo = pos[0];
  const HeapSize hi = pos[1];
  if (lo == 0) return lower(pos, hi, 0);
  if (lo % beta != 0 && hi % beta != 0) throw std::invalid_argument("position violates color rule");

  const HeapSize x = hi % beta == 0 ? hi : lo;
  const HeapSize y = x == hi ? lo : hi;
  const HeapSize partner = non_multiple(beta, x / beta);
  if (y > partner) return lower(pos, y, partner);
  // y < partner < x. A white y is some w_j with j < i; a black y = beta j
  // has j < i as well.
  if (y % beta != 0) return lower(pos, x, beta * (y - y / beta));
  return lower(pos, x, non_multiple(beta, y / beta));
}

std::optional<std::int64_t> beatty_index(const QuadraticIrrational& beta, std::int64_t v) {
  if (v < 1) throw std::invalid_argument("token index must be positive");
  const BigInt n = floor_times(beta.reciprocal(), v) + 1;
  if (floor_times(beta, n) == v) return to_int(n);
  return std::nullopt;
}

bool beatty_is_p(const QuadraticIrrational& beta, const Position& pos) {
  require_two_heaps(pos);
  require_beatty_beta(beta);
  const HeapSize lo = pos[0];
  const HeapSize hi = pos[1];
  if (hi == 0) return true;
  if (lo == 0) return false;
  const auto n = beatty_index(beta, hi);
  return n && floor_times(complement(beta), *n) == lo;
}

Move beatty_winning_move(const QuadraticIrrational& beta, const Position& pos) {
  if (beatty_is_p(beta, pos)) throw std::invalid_argument("no winning move exists");
  const HeapSize lo = pos[0];
  const HeapSize hi = pos[1];
  if (lo == 0) return lower(pos, hi, 0);

  const auto alpha = complement(beta);
  // Complementarity: each positive size is exactly one of an alpha-value or
  // a beta-value.
  const auto lo_beta = beatty_index(beta, lo);
  const auto hi_beta = beatty_index(beta, hi);
  if (!lo_beta && !hi_beta) throw std::invalid_argument("illegal position");

  if (lo_beta && hi_beta) {
    // Both beta-values with indices m >= n > 0: lower the larger heap.
    return lower(pos, hi, to_int(floor_times(alpha, *lo_beta)));
  }
  const HeapSize a_heap = lo_beta ? hi : lo;
  const HeapSize b_heap = lo_beta ? lo : hi;
  const auto m = beatty_index(alpha, a_heap);
  const std::int64_t n = lo_beta ? *lo_beta : *hi_beta;
  if (!m) throw std::logic_error("size " + std::to_string(a_heap) + " is in neither Beatty sequence");
  if (*m > n) return lower(pos, a_heap, to_int(floor_times(alpha, n)));
  return lower(pos, b_heap, to_int(floor_times(beta, *m)));
}

std::string to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::Modular:
      return "modular";
    case OracleKind::ModularPositiveN:
      return "modular-positive-n";
    case OracleKind::ModularPairing:
      return "modular-pairing";
    case OracleKind::Beatty:
      return "beatty";
  }
  return "?";
}

OracleKind parse_oracle_kind(const std::string& text) {
  for (const auto kind :
       {OracleKind::Modular, OracleKind::ModularPositiveN, OracleKind::ModularPairing, OracleKind::Beatty}) {
    if (to_string(kind) == text) return kind;
  }
  throw std::invalid_argument("unknown oracle: " + text);
}

std::optional<OracleKind> sound_oracle_for(const GameSpec& spec) {
  const auto kind = oracle_for(spec);
  if (kind == OracleKind::Modular) return OracleKind::ModularPairing;
  return kind;
}

std::optional<OracleKind> oracle_for(const GameSpec& spec) {
  const auto* bw = std::get_if<BlackWhite>(&spec.rules());
  if (spec.k() != 2 || !bw) return std::nullopt;
  const auto& v = bw->coloring.variant();
  if (std::holds_alternative<Modular>(v)) return OracleKind::Modular;
  if (const auto* b = std::get_if<BeattyIrrational>(&v);
      b && b->beta > QuadraticIrrational::rational(2, 1, b->beta.d())) {
    return OracleKind::Beatty;
  }
  return std::nullopt;
}

namespace {

struct OracleParams {
  std::int64_t modulus = 0;
  std::optional<QuadraticIrrational> beatty;
};

OracleParams params_for(const GameSpec& spec, OracleKind kind) {
  const auto* bw = std::get_if<BlackWhite>(&spec.rules());
  if (spec.k() != 2 || !bw) throw std::invalid_argument("oracle needs two-heap black & white rules");
  const auto& v = bw->coloring.variant();
  OracleParams p;
  if (kind == OracleKind::Beatty) {
    const auto* b = std::get_if<BeattyIrrational>(&v);
    if (!b) throw std::invalid_argument("Beatty oracle needs a beatty: coloring");
    require_beatty_beta(b->beta);
    p.beatty = b->beta;
  } else {
    const auto* m = std::get_if<Modular>(&v);
    if (!m) throw std::invalid_argument("modular oracle needs a modular: coloring");
    p.modulus = m->beta;
  }
  return p;
}

bool is_p_with(const OracleParams& p, OracleKind kind, const Position& pos) {
  switch (kind) {
    case OracleKind::Modular:
      return modular_is_p(p.modulus, pos);
    case OracleKind::ModularPositiveN:
      return modular_is_p_positive_n(p.modulus, pos);
    case OracleKind::ModularPairing:
      return modular_pairing_is_p(p.modulus, pos);
    case OracleKind::Beatty:
      return beatty_is_p(*p.beatty, pos);
  }
  return false;
}

Move move_with(const OracleParams& p, OracleKind kind, const Position& pos) {
  if (kind == OracleKind::Beatty) return beatty_winning_move(*p.beatty, pos);
  if (kind == OracleKind::ModularPairing) return modular_pairing_winning_move(p.modulus, pos);
  return modular_winning_move(p.modulus, pos);
}

}  // namespace

bool oracle_is_p(const GameSpec& spec, OracleKind kind, const Position& pos) {
  return is_p_with(params_for(spec, kind), kind, pos);
}

Move oracle_winning_move(const GameSpec& spec, OracleKind kind, const Position& pos) {
  return move_with(params_for(spec, kind), kind, pos);
}

OracleReport cross_validate(const GameSpec& spec, OracleKind kind, HeapSize bound) {
  const auto started = std::chrono::steady_clock::now();
  const auto params = params_for(spec, kind);
  OracleReport report{spec, kind, bound, {}};
  const auto table = outcome_table(spec, bound);

  table.index().for_each_lex([&](std::span<const HeapSize> a, std::uint64_t r) {
    if (table.at_rank(r) == Outcome::Illegal) return;
    const Position pos(std::vector<HeapSize>(a.begin(), a.end()));
    ++report.positions_checked;
    const bool oracle_p = is_p_with(params, kind, pos);
    const bool solver_p = table.at_rank(r) == Outcome::P;
    if (oracle_p != solver_p) report.mismatches.push_back({pos, oracle_p, solver_p, {}});
    if (oracle_p) return;

    ++report.moves_checked;
    try {
      const Move m = move_with(params, kind, pos);
      if (m.from != pos || m.to != pos.lowered(m.lowered_heap_old, m.lowered_heap_new) || !is_legal(spec, m.to)) {
        report.mismatches.push_back({pos, oracle_p, solver_p, "winning move to " + m.to.to_string() + " is illegal"});
      } else if (!is_p_with(params, kind, m.to)) {
        report.mismatches.push_back(
            {pos, oracle_p, solver_p, "winning move target " + m.to.to_string() + " is not oracle-P"});
      }
    } catch (const std::invalid_argument& e) {
      report.mismatches.push_back({pos, oracle_p, solver_p, std::string("no winning move: ") + e.what()});
    }
  });

  report.elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  return report;
}

}  // namespace bwnim
