#include "bwnim/exactnum.hpp"

#include <charconv>
#include <cmath>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace bwnim {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::gcd;
using boost::multiprecision::msb;

// Sign of A + B*sqrt(d) for non-square d.
int sign_of(const BigInt& a, const BigInt& b, std::int64_t d) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (sa >= 0 && sb >= 0) return (sa > 0 || sb > 0) ? 1 : 0;
  if (sa <= 0 && sb <= 0) return -1;
  // Opposite signs: compare a^2 against b^2 d. Equality would make d square.
  const BigInt a2 = a * a;
  const BigInt b2d = b * b * d;
  if (sa > 0) return a2 > b2d ? 1 : -1;
  return b2d > a2 ? 1 : -1;
}

// floor(b * sqrt(d)).
BigInt floor_root_multiple(const BigInt& b, std::int64_t d) {
  if (b.is_zero()) return 0;
  const BigInt root = isqrt(b * b * d);
  // b^2 d is never a perfect square when b != 0, so the ceiling is root + 1.
  return b.sign() > 0 ? root : BigInt(-root - 1);
}

std::int64_t common_radicand(const QuadraticIrrational& a, const QuadraticIrrational& b) {
  if (a.is_rational()) return b.d();
  if (b.is_rational() || a.d() == b.d()) return a.d();
  throw std::invalid_argument("incomparable representation");
}

}  // namespace

BigInt isqrt(const BigInt& m) {
  if (m.sign() < 0) throw std::domain_error("isqrt of negative value");
  if (m < 2) return m;
  // 2^(floor(msb/2)+1) > sqrt(m), so the iteration descends monotonically.
  BigInt x = BigInt(1) << (msb(m) / 2 + 1);
  while (true) {
    BigInt y = (x + m / x) >> 1;
    if (y >= x) break;
    x = std::move(y);
  }
  while (x * x > m) --x;
  while ((x + 1) * (x + 1) <= m) ++x;
  return x;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  BigInt quot;
  BigInt rem;
  boost::multiprecision::divide_qr(a, b, quot, rem);
  if (!rem.is_zero() && (rem.sign() != b.sign())) --quot;
  return quot;
}

QuadraticIrrational QuadraticIrrational::normalized(BigInt p, BigInt q, std::int64_t d, BigInt r) {
  if (r.is_zero()) throw std::invalid_argument("zero denominator");
  if (r.sign() < 0) {
    p = -p;
    q = -q;
    r = -r;
  }
  BigInt g = gcd(gcd(abs(p), abs(q)), r);
  if (g > 1) {
    p /= g;
    q /= g;
    r /= g;
  }
  return QuadraticIrrational(std::move(p), std::move(q), d, std::move(r));
}

QuadraticIrrational QuadraticIrrational::make(BigInt p, BigInt q, std::int64_t d, BigInt r) {
  if (r.is_zero()) throw std::invalid_argument("zero denominator");
  if (d < 2) throw std::invalid_argument("radicand must be >= 2");
  const BigInt root = isqrt(BigInt(d));
  if (root * root == d) throw std::invalid_argument("not irrational");
  // Move square factors of d into q so equal values have equal fields.
  for (std::int64_t f = 2; f <= d / f; ++f) {
    while (d % (f * f) == 0) {
      d /= f * f;
      q *= f;
    }
  }
  return normalized(std::move(p), std::move(q), d, std::move(r));
}

QuadraticIrrational QuadraticIrrational::rational(BigInt num, BigInt den, std::int64_t d) {
  return make(std::move(num), 0, d, std::move(den));
}

QuadraticIrrational QuadraticIrrational::parse(std::string_view text) {
  static const std::regex kGrammar(R"(\((-?\d+)([+-])(\d+)\*sqrt\((\d+)\)\)/(\d+))");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(text.begin(), text.end(), m, kGrammar)) {
    throw std::invalid_argument("malformed quadratic irrational: " + std::string(text));
  }
  const std::string d_text = m[4].str();
  std::int64_t d = 0;
  const auto [ptr, ec] = std::from_chars(d_text.data(), d_text.data() + d_text.size(), d);
  if (ec != std::errc{}) throw std::invalid_argument("radicand out of range: " + d_text);
  BigInt q(m[3].str());
  if (m[2].str() == "-") q = -q;
  return make(BigInt(m[1].str()), std::move(q), d, BigInt(m[5].str()));
}

int QuadraticIrrational::sign() const { return sign_of(p_, q_, d_); }

QuadraticIrrational QuadraticIrrational::reciprocal() const {
  if (p_.is_zero() && q_.is_zero()) throw std::domain_error("division by zero");
  // r / (p + q sqrt d) = r (p - q sqrt d) / (p^2 - q^2 d)
  BigInt den = p_ * p_ - q_ * q_ * d_;
  return normalized(r_ * p_, -r_ * q_, d_, std::move(den));
}

QuadraticIrrational QuadraticIrrational::operator-() const {
  return QuadraticIrrational(-p_, -q_, d_, r_);
}

QuadraticIrrational operator+(const QuadraticIrrational& a, const QuadraticIrrational& b) {
  const std::int64_t d = common_radicand(a, b);
  return QuadraticIrrational::normalized(a.p_ * b.r_ + b.p_ * a.r_, a.q_ * b.r_ + b.q_ * a.r_, d,
                                         a.r_ * b.r_);
}

QuadraticIrrational operator-(const QuadraticIrrational& a, const QuadraticIrrational& b) {
  return a + (-b);
}

QuadraticIrrational operator*(const QuadraticIrrational& a, const QuadraticIrrational& b) {
  const std::int64_t d = common_radicand(a, b);
  return QuadraticIrrational::normalized(a.p_ * b.p_ + a.q_ * b.q_ * d, a.p_ * b.q_ + a.q_ * b.p_,
                                         d, a.r_ * b.r_);
}

QuadraticIrrational operator/(const QuadraticIrrational& a, const QuadraticIrrational& b) {
  return a * b.reciprocal();
}

bool operator==(const QuadraticIrrational& a, const QuadraticIrrational& b) {
  return a.p_ == b.p_ && a.q_ == b.q_ && a.r_ == b.r_ && (a.q_.is_zero() || a.d_ == b.d_);
}

std::string QuadraticIrrational::to_string() const {
  std::ostringstream out;
  out << '(' << p_ << (q_.sign() < 0 ? '-' : '+') << abs(q_) << "*sqrt(" << d_ << "))/" << r_;
  return out.str();
}

double QuadraticIrrational::approx() const {
  const double root = std::sqrt(static_cast<double>(d_));
  return (p_.convert_to<double>() + q_.convert_to<double>() * root) / r_.convert_to<double>();
}

std::strong_ordering compare(const QuadraticIrrational& x, const QuadraticIrrational& y) {
  const std::int64_t d = common_radicand(x, y);
  // x - y = ((p1 r2 - p2 r1) + (q1 r2 - q2 r1) sqrt d) / (r1 r2), r1 r2 > 0
  const int s = sign_of(x.p() * y.r() - y.p() * x.r(), x.q() * y.r() - y.q() * x.r(), d);
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

BigInt floor_times(const QuadraticIrrational& x, const BigInt& n) {
  if (n.sign() < 0) throw std::invalid_argument("multiplier must be nonnegative");
  if (n.is_zero()) return 0;
  // floor(y / r) == floor(floor(y) / r) for integer r > 0.
  const BigInt whole = n * x.p() + floor_root_multiple(n * x.q(), x.d());
  return floor_div(whole, x.r());
}

QuadraticIrrational complement(const QuadraticIrrational& beta) {
  const auto one = QuadraticIrrational::rational(1, 1, beta.d());
  if (beta.is_rational() || beta <= one) throw std::invalid_argument("no Beatty complement");
  return beta / (beta - one);
}

}  // namespace bwnim
