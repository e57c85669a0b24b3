#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace flatpoly {

/// Canonical field data behind a Singer construction: the first irreducible
/// monic polynomial of degree 3m over GF(p) and the first primitive element,
/// both in base-p code order.
struct FieldSpec {
  std::uint64_t p = 0;
  unsigned m = 1;
  std::vector<std::uint64_t> modulus_poly;  // low degree first, monic, size 3m+1
  std::vector<std::uint64_t> generator;     // size 3m
  std::uint64_t trial_divisions = 0;        // spent factoring p^{3m}-1
};

/// Perfect difference set modulo q = p^{2m} + p^m + 1.
struct SingerSet {
  std::uint64_t p = 0;
  unsigned m = 1;
  std::int64_t q = 0;
  std::vector<std::int64_t> residues;  // strictly increasing, in [0, q)
  bool normalized = false;

  std::size_t size() const noexcept { return residues.size(); }
};

struct DifferenceReport {
  bool valid = false;
  // counts[r] = number of ordered pairs (i != j) with s_i - s_j = r (mod q);
  // counts[0] is always 0.
  std::vector<std::uint32_t> counts;
  std::optional<std::int64_t> first_violation;
};

struct SingerBudget {
  std::uint64_t max_trial_divisions = 100'000'000;
  std::int64_t max_modulus = 200'000'000;
};

FieldSpec canonical_field(std::uint64_t p, unsigned m = 1, const SingerBudget& budget = {});

SingerSet construct_singer(std::uint64_t p, unsigned m = 1, const SingerBudget& budget = {});

// Raw trace-zero index set, before normalization.
SingerSet construct_singer_raw(const FieldSpec& field, const SingerBudget& budget = {});

DifferenceReport verify_perfect_difference(std::span<const std::int64_t> residues, std::int64_t q);

SingerSet normalize(const SingerSet& set);

// q minus the largest residue of a normalized set.
std::int64_t gap_statistic(const SingerSet& set);

// Builds a SingerSet from explicit residues after checking the perfect
// difference property; residues need not be sorted or normalized.
SingerSet singer_from_residues(std::span<const std::int64_t> residues, std::int64_t q);

}  // namespace flatpoly
