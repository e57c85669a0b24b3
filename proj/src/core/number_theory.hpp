#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace flatpoly {

bool is_prime(std::uint64_t n);

// base^exp, or nullopt when the result does not fit in 63 bits.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp);

// Distinct prime divisors by trial division. Throws budget_exceeded when more
// than `max_divisions` candidate divisors would be tried.
std::vector<std::uint64_t> prime_divisors(std::uint64_t n, std::uint64_t max_divisions,
                                          std::uint64_t* divisions_used = nullptr);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t mod);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

// Checked signed arithmetic for the height and scale recursions.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

}  // namespace flatpoly
