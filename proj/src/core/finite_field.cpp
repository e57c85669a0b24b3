#include "core/finite_field.hpp"

#include <utility>

#include "core/error.hpp"
#include "core/number_theory.hpp"

namespace flatpoly {
namespace {

using Poly = std::vector<std::uint64_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) { return pow_mod(a, p - 2, p); }

// a mod b over GF(p); b must be nonzero after trimming.
Poly poly_mod(Poly a, const Poly& b, std::uint64_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint64_t inv_lead = inverse_mod(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t factor = mul_mod(a.back(), inv_lead, p);
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = (a[shift + i] + p - mul_mod(factor, b[i], p)) % p;
    }
    trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace

QuotientRing::QuotientRing(std::uint64_t p, std::vector<std::uint64_t> monic_modulus)
    : p_(p), n_(monic_modulus.empty() ? 0 : monic_modulus.size() - 1), f_(std::move(monic_modulus)) {
  if (p_ < 2 || p_ >= (1ULL << 31)) fail(ErrorCode::invalid_argument, "field characteristic must lie in [2, 2^31)");
  if (n_ == 0 || f_.back() != 1) fail(ErrorCode::invalid_argument, "modulus must be monic of positive degree");
  for (auto& c : f_) c %= p_;
}

FieldElement QuotientRing::one() const {
  FieldElement e(n_, 0);
  e[0] = 1;
  return e;
}

FieldElement QuotientRing::x() const {
  if (n_ == 1) return FieldElement{(p_ - f_[0]) % p_};
  FieldElement e(n_, 0);
  e[1] = 1;
  return e;
}

FieldElement QuotientRing::add(const FieldElement& a, const FieldElement& b) const {
  FieldElement r(n_);
  for (std::size_t i = 0; i < n_; ++i) r[i] = (a[i] + b[i]) % p_;
  return r;
}

FieldElement QuotientRing::sub(const FieldElement& a, const FieldElement& b) const {
  FieldElement r(n_);
  for (std::size_t i = 0; i < n_; ++i) r[i] = (a[i] + p_ - b[i]) % p_;
  return r;
}

FieldElement QuotientRing::mul(const FieldElement& a, const FieldElement& b) const {
  std::vector<std::uint64_t> prod(2 * n_ - 1, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n_; ++j) {
      prod[i + j] = (prod[i + j] + a[i] * b[j]) % p_;
    }
  }
  // x^n = -(f_0 + ... + f_{n-1} x^{n-1})
  for (std::size_t k = prod.size(); k-- > n_;) {
    const std::uint64_t c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    for (std::size_t t = 0; t < n_; ++t) {
      prod[k - n_ + t] = (prod[k - n_ + t] + p_ - c * f_[t] % p_) % p_;
    }
  }
  prod.resize(n_);
  return prod;
}

FieldElement QuotientRing::pow(FieldElement base, std::uint64_t exp) const {
  FieldElement result = one();
  while (exp) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

bool QuotientRing::is_zero(const FieldElement& a) const {
  for (auto c : a)
    if (c != 0) return false;
  return true;
}

bool QuotientRing::is_one(const FieldElement& a) const {
  if (a[0] != 1 % p_) return false;
  for (std::size_t i = 1; i < n_; ++i)
    if (a[i] != 0) return false;
  return true;
}

FieldElement QuotientRing::from_code(std::uint64_t code) const {
  FieldElement e(n_, 0);
  for (std::size_t i = 0; i < n_ && code; ++i) {
    e[i] = code % p_;
    code /= p_;
  }
  return e;
}

bool is_irreducible(std::uint64_t p, const std::vector<std::uint64_t>& monic_poly) {
  const std::size_t n = monic_poly.size() - 1;
  if (n == 1) return true;
  QuotientRing ring(p, monic_poly);
  // frob[k] = x^(p^k) mod f
  std::vector<FieldElement> frob{ring.x()};
  for (std::size_t k = 1; k <= n; ++k) frob.push_back(ring.pow(frob.back(), p));
  if (frob[n] != ring.x()) return false;
  for (std::uint64_t l : prime_divisors(n, 1u << 20)) {
    FieldElement diff = ring.sub(frob[n / l], ring.x());
    Poly g = poly_gcd(Poly(monic_poly), Poly(diff.begin(), diff.end()), p);
    if (g.size() != 1) return false;
  }
  return true;
}

bool is_primitive(const QuotientRing& field, const FieldElement& g,
                  const std::vector<std::uint64_t>& order_prime_divisors) {
  if (field.is_zero(g)) return false;
  const auto order = *checked_pow(field.characteristic(), static_cast<unsigned>(field.degree())) - 1;
  for (std::uint64_t l : order_prime_divisors) {
    if (field.is_one(field.pow(g, order / l))) return false;
  }
  return true;
}

}  // namespace flatpoly
