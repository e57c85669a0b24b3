#include <gtest/gtest.h>

#include <cmath>

#include "core/analysis.hpp"
#include "core/error.hpp"
#include "core/mahler.hpp"
#include "core/riesz.hpp"
#include "core/singer.hpp"

using namespace flatpoly;

namespace {

DensePolynomial dense(std::initializer_list<Complex> c) { return DensePolynomial{std::vector<Complex>(c)}; }

DensePolynomial singer_dense(std::uint64_t p) { return to_dense(build_polynomial(construct_singer(p))); }

}  // namespace

TEST(Mahler, ClosedForms) {
  struct Case {
    DensePolynomial poly;
    double expected;
  };
  const std::vector<Case> cases{
      {dense({Complex(-3, 0)}), 3.0},
      {dense({0, 1}), 1.0},
      {dense({-2, 1}), 2.0},
      {dense({-0.5, 1}), 1.0},
      {dense({6, -5, 1}), 6.0},         // (z - 2)(z - 3)
      {dense({0.5, 0, 0, 0, 1}), 1.0},  // roots inside the disc
  };
  for (const auto& c : cases) {
    EXPECT_NEAR(mahler_jensen(c.poly).value, c.expected, 1e-10);
    EXPECT_NEAR(mahler_log(c.poly).value, c.expected, 1e-6);
  }
}

// A root on the circle costs the midpoint rule exactly log(2) / N in log M.
TEST(Mahler, MidpointBiasAtCircleRoots) {
  for (std::size_t n : {64u, 4096u}) {
    EXPECT_NEAR(mahler_log(dense({-1, 1}), n).value, std::exp(std::log(2.0) / static_cast<double>(n)), 1e-12);
    EXPECT_NEAR(mahler_log(dense({1, 0, 0, 0, 1}), n).value, std::exp(4 * std::log(2.0) / static_cast<double>(n)),
                1e-12);
  }
  EXPECT_EQ(mahler_jensen(dense({-1, 1})).roots_outside, 0);
  EXPECT_NEAR(mahler_jensen(dense({-1, 1})).value, 1.0, 1e-12);
}

TEST(Mahler, LogAndJensenAgreeOnSingerPolynomials) {
  for (std::uint64_t prime : {2u, 3u, 5u}) {
    const DensePolynomial d = singer_dense(prime);
    const MahlerReport log = mahler_log(d);
    const MahlerReport jen = mahler_jensen(d);
    EXPECT_NEAR(log.value, jen.value, 1e-6) << prime;
    EXPECT_LE(log.value, log.l1 + 1e-8);
    EXPECT_LE(log.l1, 1.0 + 1e-8);
  }
}

TEST(Mahler, Multiplicative) {
  const DensePolynomial a = singer_dense(2);
  const DensePolynomial b = dense({-3, 1, 5});  // roots inside the disc
  const double prod = mahler_jensen(multiply(a, b)).value;
  EXPECT_NEAR(prod, mahler_jensen(a).value * mahler_jensen(b).value, 1e-9);
  EXPECT_NEAR(mahler_log(multiply(a, b)).value, prod, 1e-6);
}

TEST(Mahler, Homogeneous) {
  DensePolynomial a = singer_dense(3);
  const double base = mahler_jensen(a).value;
  for (auto& c : a.coeffs) c *= Complex(0, -2.5);
  EXPECT_NEAR(mahler_jensen(a).value, 2.5 * base, 1e-9);
}

TEST(Mahler, GridPrecondition) {
  const DensePolynomial d = singer_dense(2);
  EXPECT_THROW(mahler_log(d, 16 * static_cast<std::size_t>(d.degree()) - 1), Error);
  EXPECT_NO_THROW(mahler_log(d, 16 * static_cast<std::size_t>(d.degree())));
  EXPECT_THROW(mahler_log(DensePolynomial{}), Error);
  EXPECT_THROW(mahler_jensen(DensePolynomial{}), Error);
}

TEST(Mahler, JensenDegreeBudget) {
  DensePolynomial big;
  big.coeffs.assign(static_cast<std::size_t>(max_jensen_degree) + 2, Complex(1, 0));
  try {
    mahler_jensen(big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::budget_exceeded);
  }
}

TEST(RieszMahler, PartialProductsNonincreasing) {
  const std::vector<std::uint64_t> primes{2, 3, 5};
  const RieszPlan plan = make_plan(primes, ScaleRule{});
  const RieszMahlerReport r = riesz_mahler(plan, 3);
  ASSERT_EQ(r.partial_products.size(), 3u);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_LE(r.factors[j], 1.0 + 1e-12);
    if (j > 0) EXPECT_LE(r.partial_products[j], r.partial_products[j - 1] + 1e-12);
  }
  EXPECT_DOUBLE_EQ(r.value, r.partial_products.back());
  EXPECT_NEAR(r.factors[0], std::pow(mahler_jensen(singer_dense(2)).value, 2), 1e-6);
  EXPECT_THROW(riesz_mahler(plan, 4), Error);
}
