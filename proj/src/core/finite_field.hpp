#pragma once

#include <cstdint>
#include <vector>

namespace flatpoly {

// Coefficient vectors are stored low degree first.
using FieldElement = std::vector<std::uint64_t>;

/// GF(p)[x] / (f) for a monic f. The ring is a field exactly when f is
/// irreducible; the irreducibility test below relies on it being usable as a
/// plain quotient ring too.
class QuotientRing {
 public:
  QuotientRing(std::uint64_t p, std::vector<std::uint64_t> monic_modulus);

  std::uint64_t characteristic() const noexcept { return p_; }
  std::size_t degree() const noexcept { return n_; }
  const std::vector<std::uint64_t>& modulus() const noexcept { return f_; }

  FieldElement zero() const { return FieldElement(n_, 0); }
  FieldElement one() const;
  FieldElement x() const;

  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement sub(const FieldElement& a, const FieldElement& b) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement pow(FieldElement base, std::uint64_t exp) const;

  bool is_zero(const FieldElement& a) const;
  bool is_one(const FieldElement& a) const;

  // Element whose coefficients are the base-p digits of `code`
  // (constant term least significant).
  FieldElement from_code(std::uint64_t code) const;

 private:
  std::uint64_t p_;
  std::size_t n_;
  std::vector<std::uint64_t> f_;
};

// Rabin's test over the prime field.
bool is_irreducible(std::uint64_t p, const std::vector<std::uint64_t>& monic_poly);

// g generates the multiplicative group iff g^(order/l) != 1 for every prime l | order.
bool is_primitive(const QuotientRing& field, const FieldElement& g,
                  const std::vector<std::uint64_t>& order_prime_divisors);

}  // namespace flatpoly
