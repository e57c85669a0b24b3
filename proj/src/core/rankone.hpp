#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "core/rational.hpp"
#include "core/riesz.hpp"

namespace flatpoly {

/// One cutting-and-stacking step: the stage-(j-1) tower of height h_{j-1} is
/// cut into r_j columns, spacers[i] levels are put on column i, and the
/// columns are stacked left to right.
struct RankOneStage {
  std::int64_t cuts = 0;                // r_j
  std::vector<std::int64_t> spacers;    // size r_j; last entry is the top spacer
  std::vector<std::int64_t> offsets;    // start of column i inside the new tower
  std::int64_t height = 0;              // h_j
  std::int64_t scale = 0;               // N_j, 0 when not derived from a plan
  std::uint64_t p = 0;                  // 0 when not derived from a plan

  std::int64_t spacer_total() const;
};

struct RankOneParams {
  std::vector<RankOneStage> stages;

  std::size_t size() const noexcept { return stages.size(); }
  // h_k with h_0 = 1.
  std::int64_t height(std::size_t k) const;

  // Generic construction from spacer lists; cuts are the list lengths.
  static RankOneParams from_cutting(const std::vector<std::vector<std::int64_t>>& spacers);
};

// a_i = (s_i - s_{i-1}) N_j - h_{j-1} for i < r_j, top spacer 0. Verifies both
// height recursions and offsets == s_i N_j, otherwise numeric_failure.
RankOneParams derive_map_params(const RieszPlan& plan);

struct FlowStage {
  std::int64_t cuts = 0;
  std::vector<Rational> spacers;
  std::vector<Rational> offsets;
  Rational height;
  Rational scale;
};

struct FlowParams {
  Rational tau;
  Rational base_height;  // tau
  std::vector<FlowStage> stages;
};

FlowParams derive_flow_params(const RieszPlan& plan, const Rational& tau);

struct GrowthReport {
  std::vector<Rational> terms;  // (sum_i a_{i,j}) / (r_j h_{j-1})
  std::vector<Rational> partial_sums;
  // Measure of the stage-j tower with unit base: prod_{i<=j} (1 + term_i).
  std::vector<Rational> measures;
  bool terms_nondecreasing = false;
  // Certified only when every term vanishes or the terms shrink at least
  // geometrically (ratio <= 1/2) across all computed stages.
  bool finite_measure = false;
};

GrowthReport measure_growth(const RankOneParams& params);

inline constexpr std::int64_t max_tower_levels = 10'000'000;

struct Tower {
  std::size_t stage = 0;
  std::int64_t levels = 0;  // h_K
  Rational width;           // 1 / prod_{j<=K} r_j
  // origin[l] = 0 for levels inside base copies, j for spacers added at stage j.
  std::vector<std::uint16_t> origin;
  std::vector<std::int64_t> spacer_levels;  // per stage, counted from origin
  Rational total_measure;                   // levels * width
  Rational closed_form_measure;             // 1 + sum_j (sum_i a_{i,j}) width_j

  // Level shift; only defined below the top level.
  std::int64_t shift(std::int64_t level) const;
};

Tower build_tower(const RankOneParams& params, std::size_t K, std::int64_t budget = max_tower_levels);

// Offsets of the stage-k base copies inside the stage-K tower as the sumset
// of the stage offsets k+1..K. Sorted, with multiplicity.
std::vector<std::int64_t> base_occurrences(const RankOneParams& params, std::size_t k, std::size_t K,
                                           std::int64_t budget = default_enumeration_budget);

// Ordered-pair difference counts of base_occurrences(k, K).
std::map<std::int64_t, std::int64_t> offset_histogram(const RankOneParams& params, std::size_t k, std::size_t K,
                                                      std::int64_t budget = 100'000'000);

struct CorrelationReport {
  std::size_t k = 0;
  std::size_t K = 0;
  std::size_t sim_stage = 0;
  std::int64_t n = 0;
  Rational predicted;  // pairs at distance n in stage K / prod_{k<j<=K} r_j
  Rational empirical;  // m(B_k & T^-n B_k) / m(B_k) inside the sim_stage tower
  Rational tolerance;  // n / h_{sim_stage}
  bool within_tolerance = false;
};

// sim_stage = 0 means sim_stage = K. Requires k < K <= sim_stage and
// 0 <= n < h_{sim_stage}.
CorrelationReport correlation(const RankOneParams& params, std::size_t k, std::size_t K, std::int64_t n,
                              std::size_t sim_stage = 0, std::int64_t budget = max_tower_levels);

}  // namespace flatpoly
