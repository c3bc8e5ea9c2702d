#pragma once

// Exact arithmetic in Q(sqrt(d)) for Beatty colorings.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace bwnim {

using BigInt = boost::multiprecision::cpp_int;

/// floor(sqrt(m)) for m >= 0, by Newton iteration from above followed by an
/// exact correction step.
BigInt isqrt(const BigInt& m);

/// floor(a / b) for b != 0, rounding toward negative infinity.
BigInt floor_div(const BigInt& a, const BigInt& b);

/// Exact value (p + q*sqrt(d)) / r.
///
/// Normalized on construction: r > 0, d square-free (square factors are moved
/// into q), gcd(p, q, r) = 1. A value with q = 0 is rational; its d only
/// records which field it was embedded in and is ignored by equality.
class QuadraticIrrational {
 public:
  /// Throws std::invalid_argument("not irrational") for a perfect-square d,
  /// "zero denominator" for r = 0, and "radicand must be >= 2" for d < 2.
  static QuadraticIrrational make(BigInt p, BigInt q, std::int64_t d, BigInt r);

  /// num/den embedded with q = 0 in Q(sqrt(d)).
  static QuadraticIrrational rational(BigInt num, BigInt den = 1, std::int64_t d = 2);

  /// Parses "(p+q*sqrt(d))/r" (or with '-' before q). No whitespace.
  static QuadraticIrrational parse(std::string_view text);

  const BigInt& p() const { return p_; }
  const BigInt& q() const { return q_; }
  std::int64_t d() const { return d_; }
  const BigInt& r() const { return r_; }

  bool is_rational() const { return q_ == 0; }
  int sign() const;

  QuadraticIrrational reciprocal() const;
  QuadraticIrrational operator-() const;

  friend QuadraticIrrational operator+(const QuadraticIrrational& a, const QuadraticIrrational& b);
  friend QuadraticIrrational operator-(const QuadraticIrrational& a, const QuadraticIrrational& b);
  friend QuadraticIrrational operator*(const QuadraticIrrational& a, const QuadraticIrrational& b);
  friend QuadraticIrrational operator/(const QuadraticIrrational& a, const QuadraticIrrational& b);

  friend bool operator==(const QuadraticIrrational& a, const QuadraticIrrational& b);

  /// Printer matching parse(); parse(to_string()) == *this.
  std::string to_string() const;

  /// Display only. Never used for decisions.
  double approx() const;

 private:
  QuadraticIrrational(BigInt p, BigInt q, std::int64_t d, BigInt r)
      : p_(std::move(p)), q_(std::move(q)), d_(d), r_(std::move(r)) {}

  // Skips the square-free and perfect-square checks; d must already be valid.
  static QuadraticIrrational normalized(BigInt p, BigInt q, std::int64_t d, BigInt r);

  BigInt p_;
  BigInt q_;
  std::int64_t d_;
  BigInt r_;
};

/// Exact total order. Values with q != 0 on both sides must share d; throws
/// std::invalid_argument("incomparable representation") otherwise.
std::strong_ordering compare(const QuadraticIrrational& x, const QuadraticIrrational& y);

inline std::strong_ordering operator<=>(const QuadraticIrrational& x,
                                        const QuadraticIrrational& y) {
  return compare(x, y);
}

/// floor(n * x), exactly. n >= 0.
BigInt floor_times(const QuadraticIrrational& x, const BigInt& n);

/// The Beatty complement alpha = beta / (beta - 1), so 1/alpha + 1/beta = 1.
/// Requires beta > 1 and irrational; throws "no Beatty complement" otherwise.
QuadraticIrrational complement(const QuadraticIrrational& beta);

}  // namespace bwnim
