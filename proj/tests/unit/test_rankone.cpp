#include <gtest/gtest.h>

#include <functional>

#include "core/error.hpp"
#include "core/rankone.hpp"
#include "core/riesz.hpp"

using namespace flatpoly;

namespace {

RieszPlan margin_plan(std::vector<std::uint64_t> primes, const char* rule = "margin:2") {
  return make_plan(primes, ScaleRule::parse(rule));
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::invalid_argument;
}

Rational r(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

}  // namespace

// =============================================================================
// Parameters
// =============================================================================

TEST(MapParams, TwoStageExample) {
  const RankOneParams params = derive_map_params(margin_plan({2, 3}));
  ASSERT_EQ(params.size(), 2u);
  EXPECT_EQ(params.stages[0].spacers, (std::vector<std::int64_t>{0, 1, 0}));
  EXPECT_EQ(params.stages[0].offsets, (std::vector<std::int64_t>{0, 1, 3}));
  EXPECT_EQ(params.stages[1].spacers, (std::vector<std::int64_t>{4, 12, 44, 0}));
  EXPECT_EQ(params.stages[1].offsets, (std::vector<std::int64_t>{0, 8, 24, 72}));
  EXPECT_EQ(params.height(0), 1);
  EXPECT_EQ(params.height(1), 4);
  EXPECT_EQ(params.height(2), 76);
  EXPECT_EQ(params.stages[1].cuts, 4);
  EXPECT_EQ(params.stages[1].spacer_total(), 60);
  EXPECT_EQ(params.stages[1].scale, 8);
  EXPECT_EQ(params.stages[1].p, 3u);
}

TEST(MapParams, HeightsAgreeWithPlan) {
  for (const RieszPlan& plan : {margin_plan({2, 3, 5, 7}), make_plan(std::vector<std::uint64_t>{2, 3, 5}, ScaleRule{})}) {
    const RankOneParams params = derive_map_params(plan);
    const auto heights = plan.heights();
    for (std::size_t j = 0; j < heights.size(); ++j) {
      EXPECT_EQ(params.height(j + 1), heights[j]);
      const RankOneStage& st = params.stages[j];
      EXPECT_EQ(st.height, st.cuts * params.height(j) + st.spacer_total());
      EXPECT_EQ(st.spacers.back(), 0);
    }
  }
}

TEST(MapParams, NegativeSpacerIsRejected) {
  const RieszPlan plan = make_plan(std::vector<std::uint64_t>{2, 3}, ScaleRule::parse("explicit", {1, 3}));
  EXPECT_EQ(code_of([&] { derive_map_params(plan); }), ErrorCode::negative_spacer);
}

TEST(MapParams, FromCutting) {
  const RankOneParams params = RankOneParams::from_cutting({{0, 0}, {1, 0, 2}});
  EXPECT_EQ(params.height(1), 2);
  EXPECT_EQ(params.height(2), 9);
  EXPECT_EQ(params.stages[1].offsets, (std::vector<std::int64_t>{0, 3, 5}));
  EXPECT_EQ(code_of([] { RankOneParams::from_cutting({{0, -1}}); }), ErrorCode::negative_spacer);
  EXPECT_EQ(code_of([] { RankOneParams::from_cutting({{}}); }), ErrorCode::invalid_argument);
}

TEST(FlowParams, HalfScale) {
  const FlowParams flow = derive_flow_params(margin_plan({2, 3}), r(1, 2));
  EXPECT_EQ(flow.base_height, r(1, 2));
  ASSERT_EQ(flow.stages.size(), 2u);
  EXPECT_EQ(flow.stages[0].spacers, (std::vector<Rational>{r(0), r(1, 2), r(0)}));
  EXPECT_EQ(flow.stages[0].height, r(2));
  EXPECT_EQ(flow.stages[1].spacers, (std::vector<Rational>{r(2), r(6), r(22), r(0)}));
  EXPECT_EQ(flow.stages[1].height, r(38));
  EXPECT_EQ(flow.stages[1].offsets, (std::vector<Rational>{r(0), r(4), r(12), r(36)}));
}

TEST(FlowParams, RejectsNonPositiveTau) {
  EXPECT_EQ(code_of([] { derive_flow_params(margin_plan({2, 3}), r(0)); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { derive_flow_params(margin_plan({2, 3}), r(-1, 3)); }), ErrorCode::invalid_argument);
}

// =============================================================================
// Growth and towers
// =============================================================================

TEST(Growth, TwoStageExample) {
  const GrowthReport g = measure_growth(derive_map_params(margin_plan({2, 3})));
  EXPECT_EQ(g.terms, (std::vector<Rational>{r(1, 3), r(15, 4)}));
  EXPECT_EQ(g.partial_sums.back(), r(49, 12));
  EXPECT_EQ(g.measures, (std::vector<Rational>{r(4, 3), r(19, 3)}));
  EXPECT_TRUE(g.terms_nondecreasing);
  EXPECT_FALSE(g.finite_measure);
}

TEST(Growth, ZeroSpacersCertifyFiniteMeasure) {
  const GrowthReport g = measure_growth(RankOneParams::from_cutting({{0, 0}, {0, 0, 0}}));
  EXPECT_TRUE(g.finite_measure);
  EXPECT_EQ(g.measures.back(), r(1));
}

TEST(Growth, GeometricDecay) {
  // Terms 1/2 then 1/12, a ratio below 1/2.
  const GrowthReport g = measure_growth(RankOneParams::from_cutting({{1, 0}, {1, 0, 0, 0}}));
  EXPECT_EQ(g.terms, (std::vector<Rational>{r(1, 2), r(1, 12)}));
  EXPECT_TRUE(g.finite_measure);
  EXPECT_FALSE(measure_growth(RankOneParams::from_cutting({{1, 0}})).finite_measure);
}

TEST(Tower, Stages) {
  const RankOneParams params = derive_map_params(margin_plan({2, 3}));
  const Tower t0 = build_tower(params, 0);
  EXPECT_EQ(t0.levels, 1);
  EXPECT_EQ(t0.total_measure, r(1));
  const Tower t1 = build_tower(params, 1);
  EXPECT_EQ(t1.levels, 4);
  EXPECT_EQ(t1.width, r(1, 3));
  EXPECT_EQ(t1.origin, (std::vector<std::uint16_t>{0, 0, 1, 0}));
  EXPECT_EQ(t1.total_measure, r(4, 3));
  const Tower t2 = build_tower(params, 2);
  EXPECT_EQ(t2.levels, 76);
  EXPECT_EQ(t2.width, r(1, 12));
  EXPECT_EQ(t2.total_measure, r(19, 3));
  EXPECT_EQ(t2.closed_form_measure, t2.total_measure);
  EXPECT_EQ(t2.spacer_levels, (std::vector<std::int64_t>{4, 60}));
  EXPECT_EQ(t2.shift(10), 11);
  EXPECT_EQ(code_of([&] { (void)t2.shift(75); }), ErrorCode::precondition);
}

TEST(Tower, Budget) {
  const RankOneParams params = derive_map_params(margin_plan({2, 3}));
  EXPECT_EQ(code_of([&] { build_tower(params, 2, 50); }), ErrorCode::budget_exceeded);
  EXPECT_EQ(code_of([&] { build_tower(params, 3); }), ErrorCode::precondition);
}

// =============================================================================
// Occurrences and correlations
// =============================================================================

TEST(Occurrences, SumsetOfOffsets) {
  const RankOneParams params = derive_map_params(margin_plan({2, 3}));
  EXPECT_EQ(base_occurrences(params, 1, 2), (std::vector<std::int64_t>{0, 8, 24, 72}));
  EXPECT_EQ(base_occurrences(params, 0, 2),
            (std::vector<std::int64_t>{0, 1, 3, 8, 9, 11, 24, 25, 27, 72, 73, 75}));
  EXPECT_EQ(base_occurrences(params, 2, 2), (std::vector<std::int64_t>{0}));
  // Occurrences sit exactly on the base-origin levels of the tower.
  const Tower t = build_tower(params, 2);
  for (std::int64_t l : base_occurrences(params, 0, 2)) EXPECT_EQ(t.origin[static_cast<std::size_t>(l)], 0);
}

TEST(Correlation, ExactInsideTheOwnTower) {
  const RankOneParams params = derive_map_params(margin_plan({2, 3}));
  for (std::int64_t n = 0; n <= 10; ++n) {
    const CorrelationReport c = correlation(params, 0, 2, n);
    EXPECT_EQ(c.empirical, c.predicted) << n;
    EXPECT_TRUE(c.within_tolerance);
  }
  EXPECT_EQ(correlation(params, 0, 2, 0).predicted, r(1));
  EXPECT_EQ(correlation(params, 0, 2, 1).predicted, r(1, 3));
  EXPECT_EQ(correlation(params, 0, 2, 8).predicted, r(1, 4));
  EXPECT_EQ(correlation(params, 0, 2, 4).predicted, r(0));
}

TEST(Correlation, LagBeyondTheStageTowerUsesALaterOne) {
  const RankOneParams params = derive_map_params(margin_plan({2, 3}));
  EXPECT_EQ(code_of([&] { correlation(params, 0, 1, 4); }), ErrorCode::invalid_argument);
  const CorrelationReport c = correlation(params, 0, 1, 4, 2);
  EXPECT_EQ(c.sim_stage, 2u);
  EXPECT_EQ(c.predicted, r(0));
  EXPECT_EQ(c.tolerance, r(4, 76));
  EXPECT_TRUE(c.within_tolerance);
}

TEST(Correlation, Preconditions) {
  const RankOneParams params = derive_map_params(margin_plan({2, 3}));
  EXPECT_EQ(code_of([&] { correlation(params, 2, 2, 1); }), ErrorCode::precondition);
  EXPECT_EQ(code_of([&] { correlation(params, 0, 2, 1, 1); }), ErrorCode::precondition);
  EXPECT_EQ(code_of([&] { correlation(params, 0, 2, -1); }), ErrorCode::invalid_argument);
}

TEST(Correlation, HistogramMatchesRieszCoefficients) {
  const RieszPlan plan = margin_plan({2, 3, 5, 7});
  const RankOneParams params = derive_map_params(plan);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto hist = offset_histogram(params, k, 3);
    const SparseCoefficients coeffs = partial_coeffs_range(plan, k, 3);
    EXPECT_EQ(hist, coeffs.counts) << k;
  }
}

TEST(Correlation, FourPrimesWithinTolerance) {
  const RankOneParams params = derive_map_params(margin_plan({2, 3, 5, 7}));
  for (std::int64_t n = 1; n <= 10; ++n) {
    const CorrelationReport c = correlation(params, 0, 2, n, 3);
    EXPECT_TRUE(c.within_tolerance) << n;
  }
}
