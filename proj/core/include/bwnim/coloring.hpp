#pragma once

// The set S of black token indices.

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bwnim/exactnum.hpp"

namespace bwnim {

/// S = { beta * n : n >= 1 }, beta >= 2.
struct Modular {
  std::int64_t beta;
};

/// S = { floor(beta * n) : n >= 1 }, beta > 1 irrational.
struct BeattyIrrational {
  QuadraticIrrational beta;
};

/// S = { floor(n * num / den) : n >= 1 }, num/den > 2 and not an integer.
/// Stored in lowest terms.
struct RationalBeatty {
  std::int64_t num;
  std::int64_t den;
};

/// A finite S, sorted and deduplicated.
struct Explicit {
  std::vector<std::int64_t> members;
};

class ColoringSet {
 public:
  using Variant = std::variant<Modular, BeattyIrrational, RationalBeatty, Explicit>;

  static ColoringSet modular(std::int64_t beta);
  static ColoringSet beatty(QuadraticIrrational beta);
  static ColoringSet rational(std::int64_t num, std::int64_t den);
  static ColoringSet explicit_set(std::vector<std::int64_t> members);

  /// Config grammar: "modular:3", "beatty:(1+1*sqrt(2))/1", "rational:5/2",
  /// "explicit:2,5,9".
  static ColoringSet parse(std::string_view text);
  std::string to_string() const;

  const Variant& variant() const { return value_; }

  /// m in S. Throws std::invalid_argument("token index must be positive") for
  /// m <= 0.
  bool contains(std::int64_t m) const;

  /// Members of S that are <= bound, ascending, by direct generation of the
  /// sequence (independent of contains()).
  std::vector<std::int64_t> prefix(std::int64_t bound) const;

 private:
  explicit ColoringSet(Variant v) : value_(std::move(v)) {}
  Variant value_;
};

/// floor(beta * n) for n = 1, 2, ... while the value is <= bound.
std::vector<std::int64_t> beatty_prefix(const QuadraticIrrational& beta, std::int64_t bound);

struct CoverageDefect {
  std::int64_t value;
  int count;  // 0 = missing, >= 2 = covered more than once

  friend bool operator==(const CoverageDefect&, const CoverageDefect&) = default;
};

/// Integers in [1, bound] not covered exactly once by the union of the two
/// Beatty sequences. Empty means complementary on the range.
std::vector<CoverageDefect> verify_complementary(const QuadraticIrrational& alpha,
                                                 const QuadraticIrrational& beta,
                                                 std::int64_t bound);

}  // namespace bwnim
