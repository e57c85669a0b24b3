#include "core/number_theory.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "core/error.hpp"
#include "core/rational.hpp"

namespace flatpoly {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  if (n % 3 == 0) return n == 3;
  // Deterministic Miller-Rabin for 64-bit inputs.
  std::uint64_t d = n - 1;
  unsigned r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (a % n == 0) continue;
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp) {
  constexpr std::uint64_t limit = std::numeric_limits<std::int64_t>::max();
  std::uint64_t result = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && result > limit / base) return std::nullopt;
    result *= base;
  }
  return result;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n, std::uint64_t max_divisions,
                                          std::uint64_t* divisions_used) {
  std::vector<std::uint64_t> out;
  std::uint64_t used = 0;
  for (std::uint64_t d = 2; d <= n / d; d += (d == 2 ? 1 : 2)) {
    if (++used > max_divisions) {
      std::ostringstream msg;
      msg << "trial division of " << n << " exceeded the budget of " << max_divisions << " divisions";
      fail(ErrorCode::budget_exceeded, msg.str());
    }
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  std::sort(out.begin(), out.end());
  if (divisions_used) *divisions_used = used;
  return out;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % mod);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  std::uint64_t result = 1 % mod;
  base %= mod;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, mod);
    base = mul_mod(base, base, mod);
    exp >>= 1;
  }
  return result;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail(ErrorCode::budget_exceeded, "64-bit overflow in addition");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorCode::budget_exceeded, "64-bit overflow in multiplication");
  return r;
}

Rational parse_rational(const std::string& text) {
  auto bad = [&]() -> Rational { fail(ErrorCode::parse_error, "not a rational number: '" + text + "'"); };
  if (text.empty()) return bad();
  const auto slash = text.find('/');
  auto parse_int = [&](const std::string& s) -> BigInt {
    if (s.empty()) bad();
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) bad();
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') bad();
    BigInt v(s.substr(start));
    return s[0] == '-' ? BigInt(-v) : v;
  };
  if (slash != std::string::npos) {
    BigInt num = parse_int(text.substr(0, slash));
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) bad();
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(parse_int(text));
  std::string whole = text.substr(0, dot);
  std::string frac = text.substr(dot + 1);
  if (frac.empty()) bad();
  for (char c : frac)
    if (c < '0' || c > '9') bad();
  bool negative = !whole.empty() && whole[0] == '-';
  if (whole.empty() || whole == "-" || whole == "+") whole += "0";
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
  BigInt w = parse_int(whole);
  BigInt f(frac);
  BigInt num = (negative ? BigInt(-w) : w) * scale + f;
  return Rational(negative ? BigInt(-num) : num, scale);
}

}  // namespace flatpoly
