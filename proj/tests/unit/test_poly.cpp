#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "core/error.hpp"
#include "core/fft.hpp"
#include "core/poly.hpp"
#include "core/singer.hpp"

using namespace flatpoly;

namespace {

std::vector<Complex> random_coeffs(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> c(n);
  for (auto& z : c) z = Complex(u(rng), u(rng));
  return c;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Direct sum with long double angles; independent of the library twiddles.
Complex direct_value(const NewmanPolynomial& p, std::size_t j, std::size_t n) {
  std::complex<long double> acc{};
  for (std::int64_t s : p.support) {
    const long double t = 2.0L * 3.14159265358979323846264338327950288L *
                          static_cast<long double>((j * static_cast<std::size_t>(s)) % n) / n;
    acc += std::complex<long double>(std::cos(t), std::sin(t));
  }
  return Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag())) * p.scale.value();
}

const double pi = std::acos(-1.0);

}  // namespace

// =============================================================================
// Transforms
// =============================================================================

class FftSize : public ::testing::TestWithParam<std::size_t> {};

TEST_P(FftSize, MatchesDirectSummation) {
  const std::size_t n = GetParam();
  const auto c = random_coeffs(n, 17 + static_cast<unsigned>(n));
  const auto fast = fft::evaluate_at_roots(c, n);
  const auto slow = fft::evaluate_at_roots_direct(c, n);
  EXPECT_LT(max_diff(fast, slow), 1e-11 * static_cast<double>(n));
}

TEST_P(FftSize, InterpolationInvertsEvaluation) {
  const std::size_t n = GetParam();
  const auto c = random_coeffs(n, 3);
  const auto back = fft::interpolate_from_roots(fft::evaluate_at_roots(c, n));
  EXPECT_LT(max_diff(c, back), 1e-12 * std::log2(static_cast<double>(n) + 1) * 10);
}

INSTANTIATE_TEST_SUITE_P(Sizes, FftSize, ::testing::Values(1, 2, 7, 63, 64, 100, 128, 1000, 1024, 4099));

TEST(Fft, FoldsCoefficientsBeyondLength) {
  const auto c = random_coeffs(20, 5);
  std::vector<Complex> folded(8);
  for (std::size_t k = 0; k < c.size(); ++k) folded[k % 8] += c[k];
  EXPECT_LT(max_diff(fft::evaluate_at_roots(c, 8), fft::evaluate_at_roots(folded, 8)), 1e-13);
}

TEST(Fft, UnitRootReduction) {
  EXPECT_EQ(fft::unit_root(0, 8), Complex(1, 0));
  EXPECT_NEAR(fft::unit_root(2, 8).imag(), 1.0, 0.0);
  EXPECT_NEAR(fft::unit_root(2, 8).real(), 0.0, 0.0);
  EXPECT_NEAR(fft::unit_root(4, 8).real(), -1.0, 0.0);
  EXPECT_LT(std::abs(fft::unit_root(1000001, 1000000) - fft::unit_root(1, 1000000)), 1e-16);
  for (std::size_t r = 0; r < 97; ++r) {
    EXPECT_NEAR(std::abs(fft::unit_root(r, 97)), 1.0, 1e-15);
    EXPECT_NEAR(std::arg(fft::unit_root(r, 97) * std::conj(std::polar(1.0, 2 * pi * r / 97))), 0.0, 1e-15);
  }
}

TEST(Fft, PowerOfTwoHelpers) {
  EXPECT_TRUE(fft::is_power_of_two(1));
  EXPECT_TRUE(fft::is_power_of_two(1024));
  EXPECT_FALSE(fft::is_power_of_two(0));
  EXPECT_FALSE(fft::is_power_of_two(1000));
  EXPECT_EQ(fft::next_power_of_two(1000), 1024u);
  EXPECT_EQ(fft::next_power_of_two(1024), 1024u);
  EXPECT_EQ(fft::next_power_of_two(1), 1u);
}

// =============================================================================
// Newman polynomial
// =============================================================================

TEST(NewmanPolynomial, SpecExamples) {
  const NewmanPolynomial p = build_polynomial(construct_singer(2));
  EXPECT_EQ(p.support, (std::vector<std::int64_t>{0, 1, 3}));
  EXPECT_EQ(p.scale.radicand, 3);
  EXPECT_NEAR(p.evaluate(Complex(1, 0)).real(), std::sqrt(3.0), 1e-15);
  EXPECT_DOUBLE_EQ(build_polynomial(construct_singer(3)).scale.value(), 0.5);
}

TEST(NewmanPolynomial, UnitL2Norm) {
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u}) {
    const NewmanPolynomial poly = build_polynomial(construct_singer(p));
    EXPECT_EQ(poly.size() * 1, poly.scale.radicand);
    EXPECT_NEAR(static_cast<double>(poly.size()) * std::pow(poly.scale.value(), 2), 1.0, 1e-15);
  }
}

TEST(NewmanPolynomial, RejectsBadSupport) {
  EXPECT_THROW(newman_from_support(std::vector<std::int64_t>{}, 7), Error);
  EXPECT_THROW(newman_from_support(std::vector<std::int64_t>{0, 7}, 7), Error);
  EXPECT_THROW(newman_from_support(std::vector<std::int64_t>{1, 1}, 7), Error);
}

TEST(NewmanPolynomial, EvaluateAngleMatchesEvaluate) {
  const NewmanPolynomial p = build_polynomial(construct_singer(5));
  for (double t : {0.0, 0.3, 1.7, 3.0, -2.2}) {
    EXPECT_LT(std::abs(p.evaluate_angle(t) - p.evaluate(std::polar(1.0, t))), 1e-13);
  }
}

// =============================================================================
// Correlations and the defect polynomial
// =============================================================================

TEST(Correlations, SpecExamples) {
  const CorrelationTable t = correlations(construct_singer(2));
  EXPECT_EQ(t.cyclic_counts, (std::vector<std::int64_t>{3, 1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(t.aperiodic(1), 1);
  EXPECT_EQ(t.aperiodic(6), 0);
  EXPECT_EQ(t.aperiodic(-3), 1);
  EXPECT_EQ(t.cyclic(6), t.aperiodic(6) + t.aperiodic(-1));
  EXPECT_EQ(t.cyclic(6), 1);
}

TEST(Correlations, StructuralIdentities) {
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 31u}) {
    const CorrelationTable t = correlations(construct_singer(p));
    EXPECT_EQ(t.aperiodic(0), t.support_size);
    EXPECT_EQ(t.cyclic(0), t.support_size);
    for (std::int64_t r = 1; r < t.q; ++r) {
      EXPECT_EQ(t.cyclic(r), t.aperiodic(r) + t.aperiodic(r - t.q));
      EXPECT_EQ(t.cyclic(r), 1);
      EXPECT_EQ(t.aperiodic(r), t.aperiodic(-r));
    }
  }
}

TEST(Correlations, NonSingerSupport) {
  const CorrelationTable t = correlations(newman_from_support(std::vector<std::int64_t>{0, 1, 2}, 7));
  EXPECT_EQ(t.aperiodic(1), 2);
  EXPECT_EQ(t.cyclic(1), 2);
  EXPECT_EQ(t.cyclic(3), 0);
}

TEST(DefectPolynomial, SpecExamples) {
  const DefectPolynomial q2 = defect_poly(construct_singer(2));
  EXPECT_EQ(q2.value_at_one(), make_rational(2));
  for (std::int64_t l = 1; l < 7; ++l) EXPECT_EQ(q2.coefficient(l), make_rational(1, 3));
  const auto g = eval_grid(q2, 7);
  for (std::size_t r = 1; r < 7; ++r) EXPECT_LT(std::abs(g.values[r] - Complex(-1.0 / 3, 0)), 1e-12);

  const DefectPolynomial q3 = defect_poly(construct_singer(3));
  EXPECT_EQ(q3.value_at_one(), make_rational(3));
  const auto g3 = eval_grid(q3, 13);
  for (std::size_t r = 1; r < 13; ++r) EXPECT_LT(std::abs(g3.values[r] - Complex(-0.25, 0)), 1e-12);
}

TEST(DefectPolynomial, ValueAtOneIsPrimePower) {
  EXPECT_EQ(defect_poly(construct_singer(2, 2)).value_at_one(), make_rational(4));
  EXPECT_EQ(defect_poly(construct_singer(13)).value_at_one(), make_rational(13));
}

// =============================================================================
// Grid evaluation
// =============================================================================

TEST(EvalGrid, RootOfUnityClosedForms) {
  const auto g = eval_grid(build_polynomial(construct_singer(2)), 7);
  EXPECT_NEAR(std::norm(g.values[0]), 3.0, 1e-12);
  for (std::size_t r = 1; r < 7; ++r) {
    EXPECT_NEAR(std::norm(g.values[r]), 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(std::norm(g.values[r]) - 1.0, -1.0 / 3.0, 1e-12);
  }
}

TEST(EvalGrid, SubgridConsistency) {
  const NewmanPolynomial p = build_polynomial(construct_singer(2));
  const auto g7 = eval_grid(p, 7);
  const auto g14 = eval_grid(p, 14);
  for (std::size_t j = 0; j < 7; ++j) EXPECT_LT(std::abs(g14.values[2 * j] - g7.values[j]), 1e-13);
}

TEST(EvalGrid, MatchesDirectSummation) {
  for (std::uint64_t prime : {5u, 13u, 31u}) {
    const NewmanPolynomial p = build_polynomial(construct_singer(prime));
    for (std::size_t n : {static_cast<std::size_t>(p.q), 4096ul, 3 * static_cast<std::size_t>(p.q) + 1}) {
      const auto g = eval_grid(p, n);
      double worst = 0;
      for (std::size_t j = 0; j < n; j += 7) worst = std::max(worst, std::abs(g.values[j] - direct_value(p, j, n)));
      EXPECT_LT(worst, 1e-12 * std::sqrt(static_cast<double>(p.size()))) << prime << " n=" << n;
    }
  }
}

TEST(EvalGrid, RejectsSmallGrid) {
  const NewmanPolynomial p = build_polynomial(construct_singer(3));
  EXPECT_THROW(eval_grid(p, 12), Error);
}

TEST(EvalGrid, DiscreteParseval) {
  for (std::uint64_t prime : {2u, 7u, 23u}) {
    const NewmanPolynomial p = build_polynomial(construct_singer(prime));
    for (std::size_t n : {static_cast<std::size_t>(p.q) + 1, 1024ul}) {
      const auto g = eval_grid(p, n);
      double sum = 0;
      for (const auto& v : g.values) sum += std::norm(v);
      EXPECT_NEAR(sum / static_cast<double>(n), 1.0, 1e-12);
    }
  }
}

TEST(EvalGrid, RootOfUnityAndCoincidenceLaws) {
  for (std::uint64_t prime : {2u, 3u, 5u, 7u, 11u, 13u}) {
    const SingerSet s = construct_singer(prime);
    const auto gp = eval_grid(build_polynomial(s), static_cast<std::size_t>(s.q));
    const auto gq = eval_grid(defect_poly(s), static_cast<std::size_t>(s.q));
    const double target = static_cast<double>(prime) / (prime + 1.0);
    for (std::int64_t r = 0; r < s.q; ++r) {
      const double sq = std::norm(gp.values[r]);
      if (r > 0) EXPECT_LE(std::abs(sq - target), 1e-10);
      EXPECT_LE(std::abs(gq.values[r] - Complex(sq - 1.0, 0)), 1e-10) << prime << " r=" << r;
    }
  }
}

TEST(EvalGrid, FourierCoefficientsOfSquaredModulus) {
  for (std::uint64_t prime : {2u, 5u, 11u}) {
    const SingerSet s = construct_singer(prime);
    const NewmanPolynomial p = build_polynomial(s);
    const CorrelationTable t = correlations(s);
    const std::size_t n = 2 * static_cast<std::size_t>(s.q);
    const auto g = eval_grid(p, n);
    std::vector<Complex> sq(n);
    for (std::size_t j = 0; j < n; ++j) sq[j] = std::norm(g.values[j]);
    const auto coeffs = fft::interpolate_from_roots(sq);
    for (std::int64_t l = 1 - s.q; l < s.q; ++l) {
      const std::size_t idx = static_cast<std::size_t>((l + static_cast<std::int64_t>(n)) % static_cast<std::int64_t>(n));
      EXPECT_NEAR(coeffs[idx].real(), static_cast<double>(t.aperiodic(l)) / static_cast<double>(p.size()), 1e-10);
      EXPECT_NEAR(coeffs[idx].imag(), 0.0, 1e-10);
    }
  }
}

TEST(DensePolynomial, MidpointGridAndProducts) {
  DensePolynomial a{{Complex(1, 0), Complex(2, 0)}};
  DensePolynomial b{{Complex(0, 1), Complex(0, 0), Complex(3, 0)}};
  const DensePolynomial ab = multiply(a, b);
  EXPECT_EQ(ab.degree(), 3);
  for (double t : {0.1, 1.2, 2.9}) {
    const Complex z = std::polar(1.0, t);
    EXPECT_LT(std::abs(ab.evaluate(z) - a.evaluate(z) * b.evaluate(z)), 1e-13);
  }
  const auto mid = eval_grid(a, 8, /*midpoint=*/true);
  for (std::size_t j = 0; j < 8; ++j) {
    EXPECT_LT(std::abs(mid.values[j] - a.evaluate(std::polar(1.0, 2 * pi * (j + 0.5) / 8))), 1e-13);
  }
  EXPECT_EQ(DensePolynomial{}.degree(), -1);
  EXPECT_TRUE(DensePolynomial{{Complex{}}}.is_zero());
}

TEST(DensePolynomial, ConversionsAgree) {
  const SingerSet s = construct_singer(3);
  const NewmanPolynomial p = build_polynomial(s);
  const DensePolynomial d = to_dense(p);
  const DefectPolynomial q = defect_poly(s);
  const DensePolynomial dq = to_dense(q);
  for (double t : {0.0, 0.4, 2.5}) {
    const Complex z = std::polar(1.0, t);
    EXPECT_LT(std::abs(d.evaluate(z) - p.evaluate(z)), 1e-13);
    EXPECT_LT(std::abs(dq.evaluate(z) - q.evaluate(z)), 1e-13);
  }
}
