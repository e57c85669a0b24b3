#include <gtest/gtest.h>

#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "flatpoly/flatpoly.h"
#include "json.hpp"

namespace {

struct SingerDeleter {
  void operator()(fp_singer* s) const { fp_singer_destroy(s); }
};
struct PolyDeleter {
  void operator()(fp_poly* p) const { fp_poly_destroy(p); }
};
struct PlanDeleter {
  void operator()(fp_plan* p) const { fp_plan_destroy(p); }
};
struct RankOneDeleter {
  void operator()(fp_rankone* r) const { fp_rankone_destroy(r); }
};

using SingerPtr = std::unique_ptr<fp_singer, SingerDeleter>;
using PolyPtr = std::unique_ptr<fp_poly, PolyDeleter>;
using PlanPtr = std::unique_ptr<fp_plan, PlanDeleter>;
using RankOnePtr = std::unique_ptr<fp_rankone, RankOneDeleter>;

SingerPtr singer(std::uint64_t p) {
  fp_singer* s = nullptr;
  EXPECT_EQ(fp_singer_create(p, 1, &s), FP_OK);
  return SingerPtr(s);
}

PolyPtr poly(std::uint64_t p) {
  fp_poly* out = nullptr;
  EXPECT_EQ(fp_poly_create(singer(p).get(), &out), FP_OK);
  return PolyPtr(out);
}

PlanPtr plan(std::vector<std::uint64_t> primes, const char* rule) {
  fp_plan* out = nullptr;
  EXPECT_EQ(fp_plan_create(primes.data(), primes.size(), 1, rule, nullptr, 0, &out), FP_OK) << fp_last_error();
  return PlanPtr(out);
}

nlohmann::json take_json(char* s) {
  nlohmann::json j = nlohmann::json::parse(s);
  fp_string_free(s);
  return j;
}

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(fp_version(), "");
  EXPECT_STREQ(fp_status_name(FP_OK), "ok");
  EXPECT_STREQ(fp_status_name(FP_ERR_NOT_PRIME), "not_prime");
  EXPECT_EQ(fp_is_prime(97), 1);
  EXPECT_EQ(fp_is_prime(91), 0);
}

TEST(CApi, SingerRoundTrip) {
  SingerPtr s = singer(2);
  EXPECT_EQ(fp_singer_modulus(s.get()), 7);
  ASSERT_EQ(fp_singer_size(s.get()), 3u);
  std::vector<std::int64_t> r(3);
  EXPECT_EQ(fp_singer_residues(s.get(), r.data(), r.size()), FP_OK);
  EXPECT_EQ(r, (std::vector<std::int64_t>{0, 1, 3}));
  EXPECT_EQ(fp_singer_residues(s.get(), r.data(), 2), FP_ERR_BUFFER_TOO_SMALL);
  char* json = nullptr;
  ASSERT_EQ(fp_singer_json(s.get(), &json), FP_OK);
  const auto j = take_json(json);
  EXPECT_EQ(j["set"]["residues"], nlohmann::json::array({0, 1, 3}));
  EXPECT_TRUE(j["verification"]["valid"].get<bool>());
}

TEST(CApi, ErrorsCarryMessages) {
  fp_singer* s = nullptr;
  EXPECT_EQ(fp_singer_create(4, 1, &s), FP_ERR_NOT_PRIME);
  EXPECT_EQ(s, nullptr);
  EXPECT_STRNE(fp_last_error(), "");
  EXPECT_EQ(fp_singer_create(2, 1, nullptr), FP_ERR_INVALID_ARGUMENT);
  const std::int64_t bad[] = {0, 1, 2};
  EXPECT_EQ(fp_singer_from_residues(bad, 3, 7, &s), FP_ERR_NOT_PERFECT_DIFFERENCE);
  int valid = 1;
  std::int64_t violation = -1;
  EXPECT_EQ(fp_verify_perfect_difference(bad, 3, 7, &valid, &violation), FP_OK);
  EXPECT_EQ(valid, 0);
  EXPECT_GT(violation, 0);
}

TEST(CApi, PolynomialReports) {
  PolyPtr p = poly(2);
  EXPECT_EQ(fp_poly_degree(p.get()), 3);
  std::int64_t num = 0, den = 0;
  ASSERT_EQ(fp_poly_defect_at_one(p.get(), &num, &den), FP_OK);
  EXPECT_EQ(num, 2);
  EXPECT_EQ(den, 1);

  fp_flatness_report f{};
  ASSERT_EQ(fp_flatness(p.get(), 2.0, 0, &f), FP_OK);
  EXPECT_EQ(f.grid_size, 112u);
  EXPECT_NEAR(f.defect_sq, 0.816497, 1e-6);
  EXPECT_EQ(fp_flatness(p.get(), 3.0, 0, &f), FP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(fp_flatness(p.get(), 1.0, 20, &f), FP_ERR_PRECONDITION);

  fp_l2_exact_report l2{};
  ASSERT_EQ(fp_l2_defect_exact(p.get(), &l2), FP_OK);
  EXPECT_EQ(l2.squared_num, 2);
  EXPECT_EQ(l2.squared_den, 3);

  std::vector<double> re(7), im(7);
  ASSERT_EQ(fp_poly_eval_grid(p.get(), FP_POLY_NEWMAN, 7, re.data(), im.data()), FP_OK);
  for (std::size_t r = 1; r < 7; ++r) EXPECT_NEAR(re[r] * re[r] + im[r] * im[r], 2.0 / 3.0, 1e-12);

  fp_mz_report mz{};
  ASSERT_EQ(fp_mz_ratio(p.get(), FP_POLY_NEWMAN, 2.0, 7, 0, &mz), FP_OK);
  EXPECT_NEAR(mz.ratio, 1.0, 1e-10);

  fp_mahler_report a{}, b{};
  ASSERT_EQ(fp_mahler(p.get(), FP_MAHLER_LOG_INTEGRAL, 0, &a), FP_OK);
  ASSERT_EQ(fp_mahler(p.get(), FP_MAHLER_JENSEN, 0, &b), FP_OK);
  EXPECT_NEAR(a.value, b.value, 1e-6);
  EXPECT_EQ(b.method, FP_MAHLER_JENSEN);
}

TEST(CApi, DenseEntryPoints) {
  const double re[] = {-2.0, 1.0};
  const double im[] = {0.0, 0.0};
  fp_mahler_report m{};
  ASSERT_EQ(fp_mahler_dense(re, im, 2, FP_MAHLER_JENSEN, 0, &m), FP_OK);
  EXPECT_NEAR(m.value, 2.0, 1e-12);
  fp_mz_report mz{};
  ASSERT_EQ(fp_mz_ratio_dense(re, im, 2, 2.0, 2, 0, &mz), FP_OK);
  EXPECT_NEAR(mz.ratio, 1.0, 1e-10);
}

TEST(CApi, Kernel) {
  double v = 0, tail = 0;
  ASSERT_EQ(fp_kernel_value(1.0, 0.0, &v), FP_OK);
  EXPECT_NEAR(v, 0.15915494309189535, 1e-15);
  std::int64_t t = 0;
  ASSERT_EQ(fp_kernel_default_truncation(1.0, &t), FP_OK);
  EXPECT_EQ(t, FP_MIN_KERNEL_TRUNCATION);
  ASSERT_EQ(fp_periodized_kernel(1.0, t, 0.0, &v, &tail), FP_OK);
  EXPECT_NEAR(v, 1.0, 1e-12);
  EXPECT_EQ(fp_kernel_value(0.0, 0.0, &v), FP_ERR_INVALID_ARGUMENT);

  fp_realline_report r{};
  ASSERT_EQ(fp_realline(poly(2).get(), 1.0, 1.0, 0, 0, &r), FP_OK);
  EXPECT_GT(r.value, 0.0);
  EXPECT_EQ(r.grid_size, 112u);
}

TEST(CApi, PlanLifecycle) {
  PlanPtr pl = plan({2, 3}, "default");
  EXPECT_EQ(fp_plan_stage_count(pl.get()), 2u);
  std::int64_t scales[2], heights[2];
  ASSERT_EQ(fp_plan_scales(pl.get(), scales, 2), FP_OK);
  ASSERT_EQ(fp_plan_heights(pl.get(), heights, 2), FP_OK);
  EXPECT_EQ(scales[1], 24);
  EXPECT_EQ(heights[1], 220);

  char* text = nullptr;
  ASSERT_EQ(fp_plan_to_json(pl.get(), &text), FP_OK);
  fp_plan* back = nullptr;
  ASSERT_EQ(fp_plan_from_json(text, &back), FP_OK);
  fp_string_free(text);
  PlanPtr back_ptr(back);
  EXPECT_EQ(fp_plan_stage_count(back), 2u);
  EXPECT_EQ(fp_plan_from_json("{}", &back), FP_ERR_PARSE);

  std::int64_t num = 0, den = 0;
  ASSERT_EQ(fp_plan_coefficient(pl.get(), 2, 24, &num, &den), FP_OK);
  EXPECT_EQ(num, 1);
  EXPECT_EQ(den, 4);

  fp_dissociation_report d{};
  ASSERT_EQ(fp_plan_dissociation(pl.get(), 2, FP_DISSOCIATION_FREQUENCY_SUMS, 0, &d), FP_OK);
  EXPECT_EQ(d.valid, 1);

  char* q = nullptr;
  ASSERT_EQ(fp_plan_quasi_invariance_json(pl.get(), "1/7", &q), FP_OK);
  const auto qj = take_json(q);
  EXPECT_EQ(qj["partial_sums"].back()["num"], "153");
  EXPECT_EQ(fp_plan_quasi_invariance_json(pl.get(), "one seventh", &q), FP_ERR_PARSE);

  double m = 0;
  ASSERT_EQ(fp_plan_mahler(pl.get(), 2, 0, &m), FP_OK);
  EXPECT_GT(m, 0.0);
  EXPECT_LE(m, 1.0);
}

TEST(CApi, PlanErrors) {
  const std::uint64_t primes[] = {2, 3};
  const std::int64_t scales[] = {1, 2};
  fp_plan* out = nullptr;
  EXPECT_EQ(fp_plan_create(primes, 2, 1, "explicit", scales, 2, &out), FP_ERR_PRECONDITION);
  ASSERT_EQ(fp_plan_create_unchecked(primes, 2, 1, scales, &out), FP_OK);
  PlanPtr bad(out);
  fp_dissociation_report d{};
  ASSERT_EQ(fp_plan_dissociation(bad.get(), 2, FP_DISSOCIATION_FREQUENCY_SUMS, 0, &d), FP_OK);
  EXPECT_EQ(d.valid, 0);
  EXPECT_EQ(d.has_collision, 1);
  EXPECT_EQ(d.collision_value, 3);
  fp_rankone* r = nullptr;
  EXPECT_EQ(fp_rankone_from_plan(bad.get(), &r), FP_ERR_NEGATIVE_SPACER);
  EXPECT_EQ(fp_plan_create(primes, 2, 1, "sideways", nullptr, 0, &out), FP_ERR_PARSE);
}

TEST(CApi, RankOne) {
  PlanPtr pl = plan({2, 3}, "margin:2");
  fp_rankone* raw = nullptr;
  ASSERT_EQ(fp_rankone_from_plan(pl.get(), &raw), FP_OK);
  RankOnePtr r(raw);
  EXPECT_EQ(fp_rankone_stage_count(r.get()), 2u);
  std::int64_t h = 0;
  ASSERT_EQ(fp_rankone_height(r.get(), 2, &h), FP_OK);
  EXPECT_EQ(h, 76);

  std::vector<std::int64_t> occ(4);
  std::size_t count = 0;
  ASSERT_EQ(fp_rankone_base_occurrences(r.get(), 1, 2, occ.data(), occ.size(), &count), FP_OK);
  EXPECT_EQ(count, 4u);
  EXPECT_EQ(occ, (std::vector<std::int64_t>{0, 8, 24, 72}));
  EXPECT_EQ(fp_rankone_base_occurrences(r.get(), 0, 2, occ.data(), occ.size(), &count), FP_ERR_BUFFER_TOO_SMALL);
  EXPECT_EQ(count, 12u);

  fp_correlation_report c{};
  ASSERT_EQ(fp_rankone_correlation(r.get(), 0, 2, 1, 0, &c), FP_OK);
  EXPECT_EQ(c.predicted_num, 1);
  EXPECT_EQ(c.predicted_den, 3);
  EXPECT_EQ(c.within_tolerance, 1);

  char* json = nullptr;
  ASSERT_EQ(fp_rankone_growth_json(r.get(), &json), FP_OK);
  EXPECT_EQ(take_json(json)["measures"].back()["num"], "19");
  ASSERT_EQ(fp_rankone_tower_json(r.get(), 1, &json), FP_OK);
  EXPECT_EQ(take_json(json)["levels"], 4);
  ASSERT_EQ(fp_rankone_flow_json(pl.get(), "1/2", &json), FP_OK);
  EXPECT_EQ(take_json(json)["base_height"]["den"], "2");

  const std::int64_t spacers[] = {0, 0, 1, 0, 2};
  const std::size_t lengths[] = {2, 3};
  ASSERT_EQ(fp_rankone_from_cutting(spacers, lengths, 2, &raw), FP_OK);
  RankOnePtr cut(raw);
  ASSERT_EQ(fp_rankone_height(cut.get(), 2, &h), FP_OK);
  EXPECT_EQ(h, 9);
}
