#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/rational.hpp"
#include "core/singer.hpp"

namespace flatpoly {

/// How stage scales N_j are chosen. All rules start from N_1 = 1.
///   default        N_{j+1} = 2^j (p_j^m + 1) h_j
///   margin:c       N_{j+1} = c h_j
///   explicit       scales given verbatim
struct ScaleRule {
  enum class Kind { default_margin, constant_margin, explicit_scales };

  Kind kind = Kind::default_margin;
  std::int64_t factor = 0;
  std::vector<std::int64_t> scales;

  std::string descriptor() const;
  static ScaleRule parse(std::string_view descriptor, std::vector<std::int64_t> scales = {});
};

struct RieszStage {
  std::uint64_t p = 0;
  SingerSet set;           // normalized
  std::int64_t scale = 0;  // N_j
  std::int64_t height = 0; // h_j = s_top N_j + h_{j-1}

  std::int64_t top() const { return set.residues.back(); }
  std::vector<std::int64_t> frequencies() const;  // N_j * S_j
};

struct RieszPlan {
  unsigned m = 1;
  ScaleRule rule;
  std::vector<RieszStage> stages;
  // False for plans assembled by make_plan_unchecked.
  bool scale_conditions_checked = true;

  std::vector<std::uint64_t> primes() const;
  std::vector<std::int64_t> scales() const;
  std::vector<std::int64_t> heights() const;  // h_1 .. h_K
};

RieszPlan make_plan(std::span<const std::uint64_t> primes, const ScaleRule& rule, unsigned m = 1);

// Skips the scale-growth checks; for diagnostics on deliberately bad scales.
RieszPlan make_plan_unchecked(std::span<const std::uint64_t> primes, std::span<const std::int64_t> scales,
                              unsigned m = 1);

// {"m", "primes", "rule", "scales", "seeds"}; keys sorted, two-space indent.
std::string plan_to_json(const RieszPlan& plan);
RieszPlan plan_from_json(std::string_view text);

enum class DissociationMode { frequency_sums, difference_blocks };

const char* to_string(DissociationMode mode) noexcept;

struct DissociationCertificate {
  std::size_t stages = 0;
  DissociationMode mode = DissociationMode::frequency_sums;
  bool valid = true;
  std::int64_t combinations = 0;
  // Two distinct per-stage term choices with the same sum.
  std::optional<std::int64_t> collision_value;
  std::vector<std::int64_t> first;
  std::vector<std::int64_t> second;
};

inline constexpr std::int64_t default_enumeration_budget = 1'000'000;

DissociationCertificate check_dissociated(const RieszPlan& plan, std::size_t stages, DissociationMode mode,
                                          std::int64_t budget = default_enumeration_budget);

/// Exact Fourier coefficients of prod_j |P_{q_j}(z^{N_j})|^2 as integer
/// counts over the common denominator prod_j |S_j|.
struct SparseCoefficients {
  std::map<std::int64_t, std::int64_t> counts;
  std::int64_t denominator = 1;

  Rational coefficient(std::int64_t frequency) const;
  Rational total_mass() const;
  std::size_t support_size() const noexcept { return counts.size(); }
  bool zero_coefficient_is_one() const;
};

// Stages 1..k.
SparseCoefficients partial_coeffs(const RieszPlan& plan, std::size_t k,
                                  std::int64_t budget = default_enumeration_budget);
// Stages first+1 .. last (1-based), i.e. the product over j in (first, last].
SparseCoefficients partial_coeffs_range(const RieszPlan& plan, std::size_t first, std::size_t last,
                                        std::int64_t budget = default_enumeration_budget);

struct ErgodicityReport {
  std::vector<Rational> terms;  // ((p_j^m + 1) N_j / N_{j+1})^2
  std::vector<Rational> partial_sums;
  std::optional<Rational> converged_below;
  bool criterion_met = false;
};

ErgodicityReport ergodicity_sum(const RieszPlan& plan);

struct QuasiInvarianceReport {
  Rational x;
  std::vector<Rational> terms;  // (p_j^m + 1)^2 ||N_j x||^2
  std::vector<Rational> partial_sums;
  bool tail_vanishes = false;   // last computed term is zero
};

QuasiInvarianceReport quasi_invariance_sum(const RieszPlan& plan, const Rational& x);

Rational distance_to_nearest_integer(const Rational& x);

}  // namespace flatpoly
