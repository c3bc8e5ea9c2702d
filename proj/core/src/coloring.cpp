#include "bwnim/coloring.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bwnim {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("malformed " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace

ColoringSet ColoringSet::modular(std::int64_t beta) {
  if (beta < 2) throw std::invalid_argument("modular coloring needs beta >= 2");
  return ColoringSet(Modular{beta});
}

ColoringSet ColoringSet::beatty(QuadraticIrrational beta) {
  if (beta.is_rational()) throw std::invalid_argument("Beatty coloring needs an irrational beta");
  if (beta <= QuadraticIrrational::rational(1, 1, beta.d())) {
    throw std::invalid_argument("Beatty coloring needs beta > 1");
  }
  return ColoringSet(BeattyIrrational{std::move(beta)});
}

ColoringSet ColoringSet::rational(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::invalid_argument("rational coloring needs a positive denominator");
  const std::int64_t g = std::gcd(num, den);
  num /= g;
  den /= g;
  if (den == 1) throw std::invalid_argument("rational coloring needs a non-integer beta");
  if (num <= 2 * den) throw std::invalid_argument("rational coloring needs beta > 2");
  return ColoringSet(RationalBeatty{num, den});
}

ColoringSet ColoringSet::explicit_set(std::vector<std::int64_t> members) {
  for (const auto m : members) {
    if (m < 1) throw std::invalid_argument("explicit members must be positive");
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return ColoringSet(Explicit{std::move(members)});
}

ColoringSet ColoringSet::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("malformed coloring spec: '" + std::string(text) + "'");
  }
  const auto kind = text.substr(0, colon);
  const auto body = text.substr(colon + 1);
  if (kind == "modular") return modular(parse_int(body, "modulus"));
  if (kind == "beatty") return beatty(QuadraticIrrational::parse(body));
  if (kind == "rational") {
    const auto slash = body.find('/');
    if (slash == std::string_view::npos) {
      throw std::invalid_argument("malformed rational: '" + std::string(body) + "'");
    }
    return rational(parse_int(body.substr(0, slash), "numerator"),
                    parse_int(body.substr(slash + 1), "denominator"));
  }
  if (kind == "explicit") {
    std::vector<std::int64_t> members;
    std::size_t start = 0;
    while (start < body.size()) {
      auto comma = body.find(',', start);
      if (comma == std::string_view::npos) comma = body.size();
      members.push_back(parse_int(body.substr(start, comma - start), "member"));
      start = comma + 1;
    }
    return explicit_set(std::move(members));
  }
  throw std::invalid_argument("unknown coloring kind: '" + std::string(kind) + "'");
}

std::string ColoringSet::to_string() const {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const Modular& s) { out << "modular:" << s.beta; },
                 [&](const BeattyIrrational& s) { out << "beatty:" << s.beta.to_string(); },
                 [&](const RationalBeatty& s) { out << "rational:" << s.num << '/' << s.den; },
                 [&](const Explicit& s) {
                   out << "explicit:";
                   for (std::size_t i = 0; i < s.members.size(); ++i) {
                     out << (i ? "," : "") << s.members[i];
                   }
                 },
             },
             value_);
  return out.str();
}

bool ColoringSet::contains(std::int64_t m) const {
  if (m <= 0) throw std::invalid_argument("token index must be positive");
  return std::visit(
      Overloaded{
          [&](const Modular& s) { return m % s.beta == 0; },
          [&](const BeattyIrrational& s) {
            // m = floor(beta n) for some n iff [m/beta, (m+1)/beta) holds an
            // integer; m/beta is never an integer here.
            const auto inverse = s.beta.reciprocal();
            return floor_times(inverse, m + 1) > floor_times(inverse, m);
          },
          [&](const RationalBeatty& s) {
            // Smallest n with n*beta >= m, then test n*beta < m + 1.
            const __int128 scaled = static_cast<__int128>(m) * s.den;
            const __int128 n = (scaled + s.num - 1) / s.num;
            return n * s.num < static_cast<__int128>(m + 1) * s.den;
          },
          [&](const Explicit& s) {
            return std::binary_search(s.members.begin(), s.members.end(), m);
          },
      },
      value_);
}

std::vector<std::int64_t> beatty_prefix(const QuadraticIrrational& beta, std::int64_t bound) {
  std::vector<std::int64_t> out;
  for (BigInt n = 1;; ++n) {
    const BigInt v = floor_times(beta, n);
    if (v > bound) break;
    out.push_back(v.convert_to<std::int64_t>());
  }
  return out;
}

std::vector<std::int64_t> ColoringSet::prefix(std::int64_t bound) const {
  std::vector<std::int64_t> out;
  if (bound <= 0) return out;
  std::visit(Overloaded{
                 [&](const Modular& s) {
                   for (std::int64_t v = s.beta; v <= bound; v += s.beta) out.push_back(v);
                 },
                 [&](const BeattyIrrational& s) { out = beatty_prefix(s.beta, bound); },
                 [&](const RationalBeatty& s) {
                   for (std::int64_t n = 1;; ++n) {
                     const auto v = static_cast<std::int64_t>(static_cast<__int128>(n) * s.num / s.den);
                     if (v > bound) break;
                     out.push_back(v);
                   }
                 },
                 [&](const Explicit& s) {
                   for (const auto v : s.members) {
                     if (v > bound) break;
                     out.push_back(v);
                   }
                 },
             },
             value_);
  return out;
}

std::vector<CoverageDefect> verify_complementary(const QuadraticIrrational& alpha,
                                                 const QuadraticIrrational& beta,
                                                 std::int64_t bound) {
  std::vector<CoverageDefect> defects;
  if (bound <= 0) return defects;
  const auto one = QuadraticIrrational::rational(1);
  if (alpha <= one || beta <= one) throw std::invalid_argument("Beatty sequences need values > 1");

  std::vector<int> cover(static_cast<std::size_t>(bound) + 1, 0);
  for (const auto v : beatty_prefix(alpha, bound)) ++cover[v];
  for (const auto v : beatty_prefix(beta, bound)) ++cover[v];
  for (std::int64_t v = 1; v <= bound; ++v) {
    if (cover[v] != 1) defects.push_back({v, cover[v]});
  }
  return defects;
}

}  // namespace bwnim
